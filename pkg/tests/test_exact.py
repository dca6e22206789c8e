import random
from fractions import Fraction

import pytest

from singfold.exact import (SplitEvent, invert, make_extension, nullspace,
                            row_reduce, solve_linear, upoly, upoly_deg,
                            upoly_gcd, upoly_mul, upoly_rational_roots,
                            upoly_squarefree_part)


def test_make_extension_linear_is_rational():
    ring = make_extension([-3, 1])  # x - 3
    assert ring.degree == 1
    a = ring.generator()
    assert a.as_rational() == 3


def test_make_extension_squarefree_reduction():
    # (x-1)^2 (x+2) reduces to (x-1)(x+2)
    m = upoly_mul(upoly_mul(upoly((-1, 1)), upoly((-1, 1))), upoly((2, 1)))
    ring = make_extension(m)
    assert ring.degree == 2
    assert ring.modulus == upoly((-2, 1, 1))


def test_make_extension_rejects_bad_moduli():
    with pytest.raises(ValueError):
        make_extension([5])
    with pytest.raises(ValueError):
        make_extension([])
    with pytest.raises(ValueError):
        make_extension([1, 2])  # not monic


def test_invert_sqrt2():
    ring = make_extension([-2, 0, 1])
    a = ring.generator()
    b = invert(a)
    assert a * b == 1
    assert b == ring.element((0, Fraction(1, 2)))


def test_invert_zero_divisor_splits():
    ring = make_extension(upoly_mul(upoly((-1, 1)), upoly((2, 1))))
    with pytest.raises(SplitEvent) as exc:
        invert(ring.generator() - 1)
    ev = exc.value
    assert upoly_mul(ev.factor_a, ev.factor_b) == ring.modulus
    assert upoly_deg(ev.factor_a) >= 1 and upoly_deg(ev.factor_b) >= 1


def test_invert_rational():
    assert invert(Fraction(5)) == Fraction(1, 5)
    with pytest.raises(ZeroDivisionError):
        invert(Fraction(0))
    # inversion in a degree-1 ring stays rational
    ring = make_extension([-3, 1])
    five = ring.element(5)
    assert (invert(five) * five) == ring.one()
    assert invert(five).as_rational() == Fraction(1, 5)


def test_inverse_roundtrip_random():
    rng = random.Random(7)
    ring = make_extension([1, 0, -3, 1])  # x^3 - 3x + 1, squarefree
    for _ in range(25):
        a = ring.element(tuple(Fraction(rng.randint(-5, 5)) for _ in range(3)))
        if not a:
            continue
        assert a * invert(a) == ring.one()


def test_arithmetic_mismatched_rings_raises():
    r1 = make_extension([-2, 0, 1])
    r2 = make_extension([-3, 0, 1])
    with pytest.raises(ValueError):
        r1.generator() + r2.generator()


def test_row_reduce_identity_and_rank():
    eye = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    rank, rows, pivots = row_reduce(eye)
    assert rank == 3 and pivots == [0, 1, 2]
    rank, _, _ = row_reduce([[Fraction(1), Fraction(2)],
                             [Fraction(2), Fraction(4)]])
    assert rank == 1


def test_row_reduce_extension_entries():
    ring = make_extension([-2, 0, 1])
    a = ring.generator()
    rank, _, _ = row_reduce([[a, ring.one()], [ring.one(), a]])
    assert rank == 2  # determinant a^2 - 1 = 1


def test_row_reduce_ragged():
    with pytest.raises(ValueError):
        row_reduce([[Fraction(1)], [Fraction(1), Fraction(2)]])


def _bareiss_rank(mat):
    # independent fraction-free elimination over the integers
    m = [row[:] for row in mat]
    n_rows, n_cols = len(m), len(m[0])
    prev = 1
    rank = 0
    pr = 0
    for pc in range(n_cols):
        piv = None
        for i in range(pr, n_rows):
            if m[i][pc] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[pr], m[piv] = m[piv], m[pr]
        for i in range(pr + 1, n_rows):
            for j in range(pc + 1, n_cols):
                m[i][j] = (m[pr][pc] * m[i][j] - m[i][pc] * m[pr][j]) // prev
            m[i][pc] = 0
        prev = m[pr][pc]
        rank += 1
        pr += 1
        if pr == n_rows:
            break
    return rank


def test_rank_agrees_with_bareiss_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 8)
        mat = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        got = row_reduce([[Fraction(x) for x in row] for row in mat])[0]
        assert got == _bareiss_rank(mat)


def test_rank_invariant_under_row_permutation():
    rng = random.Random(13)
    for _ in range(20):
        mat = [[Fraction(rng.randint(-3, 3)) for _ in range(5)]
               for _ in range(4)]
        base = row_reduce(mat)[0]
        perm = mat[:]
        rng.shuffle(perm)
        assert row_reduce(perm)[0] == base


def test_nullspace_and_solve():
    mat = [[Fraction(1), Fraction(2), Fraction(3)],
           [Fraction(2), Fraction(4), Fraction(6)]]
    basis = nullspace(mat)
    assert len(basis) == 2
    for vec in basis:
        assert all(sum(r * v for r, v in zip(row, vec)) == 0 for row in mat)
    sol = solve_linear([[Fraction(2)]], [Fraction(5)])
    assert sol == (Fraction(5, 2),)
    assert solve_linear([[Fraction(0)]], [Fraction(1)]) is None


def test_upoly_helpers():
    p = upoly((6, -5, 1))  # (x-2)(x-3)
    assert upoly_rational_roots(p) == [Fraction(2), Fraction(3)]
    sq = upoly_mul(p, p)
    assert upoly_squarefree_part(sq) == p
    assert upoly_gcd(upoly_mul(p, upoly((1, 1))), p) == p
