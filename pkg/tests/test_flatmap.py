import random
from fractions import Fraction

import pytest

from singfold.flatmap import (TYPE_TO_STRATUM, base_change,
                              chart_point_to_params, correspondence_check,
                              flat_chart, pi_prime, verify_iso,
                              witness_to_chart)
from singfold.rootsys import CASE_IDS
from singfold.subsys import subsystems_for_case

RELATION_COUNTS = {"A3B2D4": 1, "A5B3D5": 1, "D4C3D6": 3, "D4G2E6": 2,
                   "D4G2E7": 5, "E6F4E7": 3}


@pytest.mark.parametrize("cid", CASE_IDS)
def test_chart_relations_vanish(cid):
    chart = flat_chart(cid)  # raises if a relation fails
    assert len(chart.relations) == RELATION_COUNTS[cid]
    if cid == "E6F4E7":
        assert chart.formulas is None
    else:
        assert chart.formulas is not None


@pytest.mark.parametrize("cid", CASE_IDS)
def test_iso_identities(cid):
    rep = verify_iso(cid)
    assert rep["ok"], rep


def test_d4_chart_example():
    vals = pi_prime("A3B2D4", (Fraction(1), Fraction(1), 0, 0))
    assert vals["p2"] == 2
    assert vals["p4"] == 0
    assert vals["p6"] == Fraction(-2, 27)
    assert vals["pf"] == 0


def test_d6_chart_example():
    vals = pi_prime("D4C3D6", tuple(map(Fraction, (1, 1, 0, 0, 0, 0))))
    assert vals["p2"] == 2
    assert vals["p6"] == 0
    assert vals["pf"] == 0


def test_b2_forward_example():
    bc = base_change("A3B2D4")
    t = {"t2": Fraction(8), "t4": Fraction(8)}
    vals = [f.evaluate(t) if not f.is_constant() else f.constant_value()
            for f in bc.forward]
    assert vals == [8, 0, Fraction(-128, 27), 0]


def test_forward_has_no_constant_term():
    for cid in CASE_IDS:
        bc = base_change(cid)
        zero = {p: Fraction(0) for p in ("t2", "t4", "t6", "t8", "t12")}
        for f in bc.forward:
            val = f.evaluate({k: zero[k] for k in f.variables}) \
                if not f.is_constant() else f.constant_value()
            assert val == 0


def test_e6_zero_slots():
    bc = base_change("D4G2E6")
    chart = flat_chart("D4G2E6")
    idx = {n: i for i, n in enumerate(chart.psi_names)}
    assert bc.forward[idx["p5"]].is_zero()
    assert bc.forward[idx["p9"]].is_zero()


def test_pi_prime_invariant_under_chart_symmetries():
    rng = random.Random(2)
    # D-type charts: sign flips of each coordinate preserve every psi;
    # for D5 coordinate permutations do as well
    for _ in range(10):
        a, b, c = (Fraction(rng.randint(-5, 5)) for _ in range(3))
        base = pi_prime("A5B3D5", (a, b, c, 0, 0))
        assert pi_prime("A5B3D5", (-a, b, -c, 0, 0)) == base
        assert pi_prime("A5B3D5", (b, c, a, 0, 0)) == base
        d4 = pi_prime("A3B2D4", (a, b, 0, 0))
        assert pi_prime("A3B2D4", (-b, -a, 0, 0)) == d4


def test_witness_to_chart_validates():
    with pytest.raises(ValueError):
        witness_to_chart("A3B2D4", (1, 1, 1, 0))
    coords = witness_to_chart("A3B2D4", (Fraction(3), Fraction(-2), 0, 0))
    assert coords == {"x1": 3, "x2": -2}
    with pytest.raises(ValueError):
        pi_prime("E6F4E7", (0,) * 8)


def test_pi_prime_of_zero_is_zero():
    for cid in [c for c in CASE_IDS if c != "E6F4E7"]:
        from singfold.rootsys import build_root_system, case_meta
        rs = build_root_system(case_meta(cid).quotient_type)
        vals = pi_prime(cid, (Fraction(0),) * rs.dim)
        assert all(v == 0 for v in vals.values())


def test_correspondence_small_case():
    rep = correspondence_check("A3B2D4")
    assert rep["ok"]
    assert rep["subsystems"] == 6
    types = sorted(e["type"] for e in rep["entries"])
    assert types == ["A1+A1", "A1+A1+A1", "A1+A1+A1", "A3", "A3", "D4"]
    for e in rep["entries"]:
        assert e["stratum"] == e["stratum_expected"]
        assert e["configuration"] == e["type"]


def test_type_to_stratum_covers_all_types():
    for cid in CASE_IDS:
        subs = subsystems_for_case(cid)
        types = {s.type_string() for s in subs}
        assert types == set(TYPE_TO_STRATUM[cid])


def test_chart_point_roundtrip():
    # witness -> psi -> t -> forward reproduces psi for a sample witness
    subs = subsystems_for_case("A5B3D5")
    bc = base_change("A5B3D5")
    chart = flat_chart("A5B3D5")
    for s in subs[:6]:
        psi = pi_prime("A5B3D5", s.witness)
        t = chart_point_to_params("A5B3D5", psi)
        for name, f in zip(chart.psi_names, bc.forward):
            val = f.evaluate(t) if not f.is_constant() else f.constant_value()
            assert val == psi[name]
