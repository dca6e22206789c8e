import random
from fractions import Fraction

import pytest

from singfold.poly import Polynomial, parse
from singfold.singclass import (ClassificationError, classify_point,
                                fiber_configuration, hessian_corank,
                                milnor_number, singular_points)

KLEIN_FORMS = [
    ("X^4 + Y*Z", "A3"),
    ("X*(Y^2 - X^4) + Z^2", "D6"),
    ("X^4 + Y^3 + Z^2", "E6"),
    ("X^3 + X*Y^3 + Z^2", "E7"),
    ("X^5 + Y^3 + Z^2", "E8"),
]


@pytest.mark.parametrize("text,label", KLEIN_FORMS)
def test_klein_forms(text, label):
    conf = fiber_configuration(parse(text))
    assert conf.type_string() == label
    assert len(conf.points) == 1
    assert conf.points[0].mu == int(label[1:])


@pytest.mark.parametrize("k", range(1, 9))
def test_arnold_a_family(k):
    conf = fiber_configuration(parse(f"x^{k+1} + y^2 + z^2"))
    assert conf.type_string() == f"A{k}"
    rec = conf.points[0]
    assert rec.corank == (0 if k == 1 else 1)


@pytest.mark.parametrize("k", range(4, 9))
def test_arnold_d_family(k):
    conf = fiber_configuration(parse(f"x^2*y + y^{k-1} + z^2"))
    assert conf.type_string() == f"D{k}"
    rec = conf.points[0]
    assert rec.corank == 2
    assert rec.cubic_shape == ("three-distinct" if k == 4 else "one-double")


def test_milnor_examples():
    assert milnor_number(parse("x^2 + y^2 + z^2"), (0, 0, 0)) == 1
    assert milnor_number(parse("X^3 + X*Y^3 + Z^2"), (0, 0, 0)) == 7
    assert milnor_number(parse("x^2*y + y^5 + z^2"), (0, 0, 0)) == 6


def test_milnor_stabilization_is_cap_independent():
    for text, mu in (("x^4 + y^2 + z^2", 3), ("X^5 + Y^3 + Z^2", 8)):
        for cap in (12, 14, 16):
            assert milnor_number(parse(text), (0, 0, 0), cap=cap) == mu


def test_hessian_corank_examples():
    assert hessian_corank(parse("x^2 + y^2 + z^2"), (0, 0, 0)) == 0
    assert hessian_corank(parse("z^4 - x*y"), (0, 0, 0)) == 1
    assert hessian_corank(parse("X^4 + Y^3 + Z^2"), (0, 0, 0)) == 2


def test_singular_points_examples():
    pts = singular_points(parse("z^4 - x*y"))
    assert len(pts) == 1
    ring, coords = pts[0]
    assert ring.degree == 1 and all(c == 0 for c in coords)
    assert singular_points(parse("x^2 + y^2 + z^2 - 1")) == []


def test_b2_quotient_fiber_example():
    # covering fiber parameters (8, 0, 8): three rational A1 points
    F = parse("Z*(X^2 - 4*Z^2) + W^2 - 32*Z^2 - 64*Z")
    conf = fiber_configuration(F)
    assert conf.type_string() == "A1+A1+A1"
    assert sum(r.orbit_size for r in conf.points) == 3


def test_non_isolated_locus_fails_loudly():
    with pytest.raises(ClassificationError):
        fiber_configuration(parse("x^2"))
    with pytest.raises(ClassificationError):
        # a whole singular line: z^2 - x^2*y^2 has singular locus x*y = z = 0
        fiber_configuration(parse("z^2 - x^2*y^2"))


def test_more_than_three_variables():
    with pytest.raises(ClassificationError):
        fiber_configuration(parse("x^2 + y^2 + z^2 + X^2"))


def test_classify_point_requires_singular_point():
    with pytest.raises(ClassificationError):
        classify_point(parse("x^2 + y^2 + z^2 - 1"), (0, 0, 0))
    with pytest.raises(ClassificationError):
        classify_point(parse("x^2 + y^2 + z^2"),
                       (Fraction(1), Fraction(0), Fraction(0)))


def test_affine_invariance_of_classify_point():
    rng = random.Random(31)
    forms = ["x^3 + y^4 + z^2", "x^2*y + y^4 + z^2", "x^5 + y^2 + z^2"]
    names = ("x", "y", "z")
    for text in forms:
        F = parse(text)
        base = classify_point(F, (Fraction(0),) * 3)
        for _ in range(4):
            while True:
                A = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
                det = (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
                       - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
                       + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))
                if det != 0:
                    break
            q = [Fraction(rng.randint(-2, 2)) for _ in range(3)]
            # substitution sending q to the origin: x_i -> sum A_ij x_j - A q
            sub = {}
            for i, n in enumerate(names):
                expr = Polynomial.zero(names)
                for j in range(3):
                    expr = expr + Fraction(A[i][j]) * (parse(names[j]) - q[j])
                sub[n] = expr
            moved = F.subs(sub)
            rec = classify_point(moved, tuple(q))
            assert (rec.ade_type, rec.mu, rec.corank, rec.cubic_shape) == \
                (base.ade_type, base.mu, base.corank, base.cubic_shape)


def test_conjugate_points_share_type_on_quadratic_branches():
    # singular pair at z^2 = 2, x = y = 0 on a deformed covering fiber
    from singfold.exact import AlgebraicScalar
    F = parse("z^4 - 4*z^2 - x*y + 4")  # (z^2 - 2)^2 = x*y
    pts = singular_points(F)
    assert len(pts) == 1
    ring, coords = pts[0]
    assert ring.degree == 2
    rec = classify_point(F, coords, ring)
    # conjugation sends the generator a to -b - a for x^2 + b x + c
    gen_conj = ring.element((-ring.modulus[1], -1))

    def conj(c):
        if not isinstance(c, AlgebraicScalar):
            return c
        out = ring.zero()
        for i, coef in enumerate(c.value):
            out = out + coef * gen_conj ** i
        return out

    rec2 = classify_point(F, tuple(conj(c) for c in coords), ring)
    assert (rec.ade_type, rec.mu, rec.corank) == \
        (rec2.ade_type, rec2.mu, rec2.corank)


def test_mu_orbit_sum_invariant_under_variable_permutation():
    # permuting the elimination roles must not change the total
    base = parse("Z*(X^2 + 4*Z^3) + W^2 + 8*Z^3 + 20*Z^2 + 16*Z")
    perms = [
        {"X": parse("X"), "Z": parse("Z"), "W": parse("W")},
        {"X": parse("Z"), "Z": parse("X"), "W": parse("W")},
    ]
    totals = []
    for sub in perms:
        conf = fiber_configuration(base.subs(sub).drop_unused())
        totals.append(sum(r.mu * r.orbit_size for r in conf.points))
    assert len(set(totals)) == 1
