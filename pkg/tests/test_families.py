import random
from fractions import Fraction

import pytest

from singfold.families import (check_stratum_point, classify_quotient_fiber,
                               derive_quotient_chart, descriptor, fiber_at,
                               quotient_fiber, sample_stratum,
                               stratum_membership, theorem_singular_spotcheck,
                               verify_catalogue, verify_equivariance)
from singfold.poly import parse
from singfold.rootsys import CASE_IDS


@pytest.mark.parametrize("cid", CASE_IDS)
def test_equivariance(cid):
    rep = verify_equivariance(cid)
    assert rep["ok"], rep
    assert all(v in ("+1", "-1") for v in rep["generators"].values())


def test_group_orders():
    assert len(descriptor("A3B2D4").group_elements()) == 2
    assert len(descriptor("D4G2E6").group_elements()) == 3
    assert len(descriptor("D4G2E7").group_elements()) == 6


def test_catalogue_files_match_constants():
    rep = verify_catalogue()
    assert rep["ok"], rep


def test_descriptor_errors():
    with pytest.raises(ValueError):
        descriptor("A1B1C1")
    with pytest.raises(ValueError):
        descriptor("A3B2D4").stratum("nope")


def test_stratum_membership_examples():
    assert stratum_membership("A3B2D4", {"t2": Fraction(8), "t4": Fraction(8)}) \
        == "t4=t2^2/8"
    assert stratum_membership("A3B2D4", {"t2": Fraction(8), "t4": Fraction(-8)}) \
        == "t4=-t2^2/8"
    assert stratum_membership("A3B2D4", {"t2": Fraction(0), "t4": Fraction(0)}) \
        == "origin"
    assert stratum_membership("A3B2D4", {"t2": Fraction(1), "t4": Fraction(1)}) \
        == "generic"
    assert stratum_membership("A5B3D5",
                              {"t2": Fraction(6), "t4": Fraction(0),
                               "t6": Fraction(-2)}) == "H1,t4=0"
    assert stratum_membership("D4G2E6",
                              {"t2": Fraction(6), "t6": Fraction(2)}) \
        == "t6=t2^3/108"


def test_membership_unique_and_total_on_random_points():
    rng = random.Random(1)
    for cid in CASE_IDS:
        case = descriptor(cid)
        for _ in range(300):
            t = {p: Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                 for p in case.params}
            sid = stratum_membership(cid, t)
            matches = [s.stratum_id for s in case.strata
                       if all(eq.evaluate(t) == 0 for eq in s.equations)
                       and all(iq.evaluate(t) != 0 for iq in s.inequations)]
            assert matches and matches[0] == sid


@pytest.mark.parametrize("cid", CASE_IDS)
def test_sample_every_stratum(cid):
    case = descriptor(cid)
    for s in case.strata:
        want = min(3, s.max_samples or 3)
        pts = sample_stratum(cid, s.stratum_id, want)
        assert len(pts) == want
        assert len({tuple(t[p] for p in case.params) for t in pts}) == want
        for t in pts:
            assert stratum_membership(cid, t) == s.stratum_id


def test_quotient_configurations_spot_rows():
    # one row from each case at one point
    rows = [("A3B2D4", "t4=-t2^2/8", "A3"),
            ("A5B3D5", "H1,t4=0", "A3+A1"),
            ("D4C3D6", "H,t4=t2^2/12", "A5"),
            ("D4G2E6", "origin", "E6"),
            ("D4G2E7", "t6=t2^3/108", "D5+A1"),
            ("E6F4E7", "D6", "D6")]
    for cid, sid, expected in rows:
        t = sample_stratum(cid, sid, 1)[0]
        conf = classify_quotient_fiber(cid, t)
        assert conf.type_string() == expected


def test_fiber_orbit_row_with_identification():
    # covering fiber with a swapped pair of A1 points plus two fixed
    # smooth points
    t = sample_stratum("A3B2D4", "t4=t2^2/8", 1)[0]
    rep = check_stratum_point("A3B2D4", "t4=t2^2/8", t)
    assert rep["ok"]
    assert rep["fiber_orbits"] == ["A1(orbit 2)x1"]
    assert rep["fiber_fixed_smooth"] == 2


def test_s3_fiber_orbit_of_three():
    t = sample_stratum("D4G2E7", "t6=-t2^3/108", 1)[0]
    rep = check_stratum_point("D4G2E7", "t6=-t2^3/108", t)
    assert rep["ok"]
    assert rep["fiber_orbits"] == ["A1(orbit 3)x1"]


def test_c3_quotient_derivative():
    case = descriptor("D4C3D6")
    got = case.quotient.diff("Y")
    want = parse("2*X*Y + 1/4*t6 + 1/24*t2*t4 + 1/432*t2^3")
    assert got == want


def test_quotient_fiber_substitution():
    F = quotient_fiber("A3B2D4", {"t2": Fraction(8), "t4": Fraction(8)})
    assert F == parse("Z*(X^2 - 4*Z^2) + W^2 - 32*Z^2 - 64*Z")
    G = fiber_at("A3B2D4", {"t2": Fraction(8), "t4": Fraction(8)})
    assert G == parse("z^4 + 8*z^2 + 16 - x*y")


def test_theorem_singular_spotcheck_small():
    for cid in CASE_IDS:
        rep = theorem_singular_spotcheck(cid, count=5, seed=0)
        assert rep["ok"], rep


def test_theorem_fixed_point_example():
    # the catalogued symmetric point (-2, -2, 0) lies on the covering
    # fiber at parameters (4, 0, 2)
    F = fiber_at("A3B2D4", {"t2": Fraction(4), "t4": Fraction(2)})
    val = F.evaluate({"x": Fraction(-2), "y": Fraction(-2), "z": Fraction(0)})
    assert val == 0
    case = descriptor("A3B2D4")
    sigma = case.omega_gens["sigma"]
    pt = {"x": Fraction(-2), "y": Fraction(-2), "z": Fraction(0)}
    assert all(sigma[v].evaluate(pt) == pt[v] for v in case.fiber_vars)


def test_sampler_determinism():
    a = sample_stratum("E6F4E7", "H1&H2", 3)
    b = sample_stratum("E6F4E7", "H1&H2", 3)
    assert a == b


def test_derive_quotient_chart_b2():
    rep = derive_quotient_chart("A3B2D4")
    assert rep["ok"], rep
    assert len(rep["generators"]) == 3
    assert rep["relation_found"] and rep["quotient_identity"]


def test_derive_quotient_chart_rejects_small_bound():
    with pytest.raises(ValueError):
        derive_quotient_chart("A3B2D4", degree_bound=4)
