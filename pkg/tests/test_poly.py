import random
from fractions import Fraction

import pytest

from singfold.exact import make_extension
from singfold.poly import (ParseError, Polynomial, binary_cubic_shape,
                           div_exact, gcd_univariate, parse, resultant,
                           to_text)


def _rand_poly(rng, names, deg=2, terms=4):
    p = Polynomial.zero(names)
    for _ in range(terms):
        e = tuple(rng.randint(0, deg) for _ in names)
        p = p + Polynomial(names, {e: Fraction(rng.randint(-4, 4))})
    return p


def test_parse_print_roundtrip():
    for text in ("-1/64*X^5 + X*Y^2 - W^2",
                 "z^4 + z^2*t2 - x*y + 1/8*t2^2 + t4",
                 "11664*X^4 - Y^3 - Z^2"):
        p = parse(text)
        assert parse(to_text(p)) == p


def test_parse_errors():
    with pytest.raises(ParseError):
        parse("x +")
    with pytest.raises(ParseError):
        parse("x ^ y")
    with pytest.raises(ParseError):
        parse("(x")


def test_basic_arithmetic():
    x, y = parse("x"), parse("y")
    assert (x + y) * (x - y) == parse("x^2 - y^2")
    assert parse("z^2") ** 2 == parse("z^4")
    p = parse("-1/4*x^4 + y^3 + z^2")
    assert (p - p).is_zero()


def test_ring_axioms_random():
    rng = random.Random(5)
    for _ in range(20):
        p = _rand_poly(rng, ("x", "y"))
        q = _rand_poly(rng, ("y", "z"))
        r = _rand_poly(rng, ("x", "z"))
        assert (p + q) * r == p * r + q * r
        assert p * q == q * p


def test_differentiate():
    p = parse("z^4 - x*y")
    assert p.diff("z") == parse("4*z^3")
    assert p.diff("x") == parse("-y")
    with pytest.raises(ValueError):
        p.diff("w")


def test_diff_linear_and_leibniz():
    rng = random.Random(9)
    for _ in range(15):
        p = _rand_poly(rng, ("x", "y"))
        q = _rand_poly(rng, ("x", "y"))
        assert (p + q).diff("x") == p.diff("x") + q.diff("x")
        assert (p * q).diff("x") == p.diff("x") * q + p * q.diff("x")


def test_substitute():
    p = parse("z^4 + t2*z^2 + t4 + t2^2/8 - x*y")
    swapped = p.subs({"x": parse("y"), "y": parse("x"), "z": parse("-z")})
    assert swapped == p
    assert p.subs({"x": 0, "y": 0, "z": 0}) == parse("t4 + t2^2/8")
    assert parse("x^2").subs({"x": parse("x+1")}) == parse("x^2 + 2*x + 1")


def test_resultant_examples():
    assert resultant(parse("x - y"), parse("x + y"), "y") == parse("2*x")
    assert resultant(parse("z^2 - t2"), parse("z"), "z") == parse("t2")
    assert resultant(parse("y^2 - x"), parse("y^2 - 2*x"), "y") == parse("x^2")


def test_gcd_univariate_examples():
    assert gcd_univariate(parse("x^2 - 1"), parse("x - 1")) == parse("x - 1")
    assert gcd_univariate(parse("x^3"), parse("x^2")) == parse("x^2")
    g = gcd_univariate(parse("(x^2 - 2)*(x + 1)"), parse("(x^2 - 2)*(x + 3)"))
    assert g == parse("x^2 - 2")
    with pytest.raises(ValueError):
        gcd_univariate(Polynomial.zero(("x",)), Polynomial.zero(("x",)))


def test_gcd_over_extension_ring_splits():
    ring = make_extension([2, 1, -2, 1])  # (x-1)(x^2-2) -> squarefree
    a = ring.generator()
    # p = (y - a): gcd with (y - a)(y + a) over the composite ring
    y = Polynomial.var("y")
    p = y - Polynomial.constant(a)
    q = (y - Polynomial.constant(a)) * (y + Polynomial.constant(a))
    g = gcd_univariate(q, p)
    assert g == p


def test_resultant_vanishes_iff_common_root():
    rng = random.Random(21)
    x = Polynomial.var("x")
    for _ in range(40):
        dp, dq = rng.randint(1, 3), rng.randint(1, 3)
        p = Polynomial.constant(Fraction(1))
        for _ in range(dp):
            p = p * (x - rng.randint(-3, 3))
        q = Polynomial.constant(Fraction(1))
        for _ in range(dq):
            q = q * (x - rng.randint(-3, 3))
        res = resultant(p, q, "x")
        common = gcd_univariate(p, q).total_degree() > 0
        assert res.is_zero() == common


def test_div_exact():
    p = parse("x^2 - y^2")
    assert div_exact(p, parse("x - y")) == parse("x + y")
    with pytest.raises(ValueError):
        div_exact(parse("x^2 + 1"), parse("x - y"))


def test_binary_cubic_shapes():
    assert binary_cubic_shape(parse("x^2*y + y^3")) == "three-distinct"
    assert binary_cubic_shape(parse("x^2*y")) == "one-double"
    assert binary_cubic_shape(parse("x^3")) == "triple"
    assert binary_cubic_shape(Polynomial.zero(("x", "y"))) == "zero"
    with pytest.raises(ValueError):
        binary_cubic_shape(parse("x^2 + y^2"))


def test_cubic_shape_invariant_under_unimodular_change():
    rng = random.Random(3)
    cubics = [parse("x^2*y + y^3"), parse("x^2*y"), parse("x^3"),
              parse("x^3 - x*y^2"), parse("x^2*y + x*y^2")]
    for c in cubics:
        base = binary_cubic_shape(c)
        for _ in range(6):
            while True:
                a, b = rng.randint(-3, 3), rng.randint(-3, 3)
                cc, d = rng.randint(-3, 3), rng.randint(-3, 3)
                if a * d - b * cc in (1, -1):
                    break
            nx = Polynomial.constant(Fraction(a)) * parse("x") + b * parse("y")
            ny = Polynomial.constant(Fraction(cc)) * parse("x") + d * parse("y")
            moved = c.subs({"x": nx, "y": ny})
            assert binary_cubic_shape(moved) == base


def test_homogeneous_part():
    p = parse("x^3 + x*y + 2*x + 5")
    assert p.homogeneous_part(3) == parse("x^3")
    assert p.homogeneous_part(2) == parse("x*y")
    assert p.homogeneous_part(0) == parse("5")
