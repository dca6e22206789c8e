"""Exact scalars: big rationals, algebraic extension rings, exact linear algebra.

Computations over ``Q[a]/(m)`` with a monic squarefree modulus ``m`` proceed
as if ``m`` were irreducible.  The moment an inversion meets a zero divisor,
the gcd that exposed it yields a nontrivial factorization ``m = m1*m2`` and a
:class:`SplitEvent` is raised; callers restart the computation on each factor
(dynamic evaluation).  No univariate factorization is ever performed.

Univariate polynomials over Q are plain tuples of :class:`fractions.Fraction`
coefficients in increasing degree, with no trailing zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

Rational = Fraction
UPoly = Tuple[Fraction, ...]  # univariate over Q, low -> high, trimmed


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational scalar: {x!r}")


# ---------------------------------------------------------------------------
# univariate polynomials over Q
# ---------------------------------------------------------------------------

def upoly(coeffs: Iterable) -> UPoly:
    """Build a trimmed univariate polynomial from low-to-high coefficients."""
    cs = [_frac(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def upoly_deg(p: UPoly) -> int:
    """Degree, with deg 0 = -1 by convention."""
    return len(p) - 1


def upoly_add(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    return upoly((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                 for i in range(n))


def upoly_neg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def upoly_sub(p: UPoly, q: UPoly) -> UPoly:
    return upoly_add(p, upoly_neg(q))


def upoly_scale(p: UPoly, c: Fraction) -> UPoly:
    if c == 0:
        return ()
    return tuple(x * c for x in p)


def upoly_mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return upoly(out)


def upoly_divmod(p: UPoly, q: UPoly) -> Tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    r = list(p)
    quot = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    dq = len(q) - 1
    lead = q[-1]
    while len(r) - 1 >= dq and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dq:
            break
        c = r[-1] / lead
        k = len(r) - 1 - dq
        quot[k] = c
        for i, b in enumerate(q):
            r[k + i] -= c * b
        r.pop()
    return upoly(quot), upoly(r)


def upoly_monic(p: UPoly) -> UPoly:
    if not p:
        return ()
    return upoly_scale(p, 1 / p[-1])


def upoly_gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd over Q via the Euclidean algorithm."""
    a, b = p, q
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a)


def upoly_xgcd(p: UPoly, q: UPoly) -> Tuple[UPoly, UPoly, UPoly]:
    """Extended gcd: returns monic g and u, v with u*p + v*q = g."""
    r0, r1 = p, q
    s0, s1 = upoly((1,)), ()
    t0, t1 = (), upoly((1,))
    while r1:
        qt, rr = upoly_divmod(r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, upoly_sub(s0, upoly_mul(qt, s1))
        t0, t1 = t1, upoly_sub(t0, upoly_mul(qt, t1))
    if not r0:
        return (), s0, t0
    lc = r0[-1]
    inv = 1 / lc
    return upoly_scale(r0, inv), upoly_scale(s0, inv), upoly_scale(t0, inv)


def upoly_deriv(p: UPoly) -> UPoly:
    return upoly(i * c for i, c in enumerate(p) if i > 0)


def upoly_squarefree_part(p: UPoly) -> UPoly:
    """Monic squarefree part p / gcd(p, p')."""
    if upoly_deg(p) < 1:
        return upoly_monic(p)
    g = upoly_gcd(p, upoly_deriv(p))
    q, r = upoly_divmod(p, g)
    assert not r
    return upoly_monic(q)


def upoly_eval(p: UPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _int_divisors(n: int, cap: int = 200000) -> List[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n and d <= cap:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def upoly_rational_roots(p: UPoly) -> List[Fraction]:
    """All rational roots of p, via the rational root theorem."""
    if not p:
        raise ValueError("zero polynomial has every root")
    # strip powers of x
    k = 0
    while p[k] == 0:
        k += 1
    roots = [Fraction(0)] if k > 0 else []
    q = p[k:]
    if len(q) == 1:
        return roots
    from math import lcm
    den = lcm(*[c.denominator for c in q])
    zq = [int(c * den) for c in q]
    for num in _int_divisors(zq[0]):
        for dd in _int_divisors(zq[-1]):
            for cand in (Fraction(num, dd), Fraction(-num, dd)):
                if cand not in roots and upoly_eval(q, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def upoly_str(p: UPoly, var: str = "x") -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append(f"{c}*{var}" if c != 1 else var)
        else:
            parts.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# extension rings and dynamic evaluation
# ---------------------------------------------------------------------------

class SplitEvent(Exception):
    """A zero divisor revealed a factorization of the active modulus.

    ``factor_a * factor_b`` equals the modulus of the ring that raised the
    event; both factors are monic of degree >= 1.
    """

    def __init__(self, ring: "ExtensionRing", factor_a: UPoly, factor_b: UPoly):
        self.ring = ring
        self.factor_a = factor_a
        self.factor_b = factor_b
        super().__init__(
            f"modulus split: ({upoly_str(factor_a)}) * ({upoly_str(factor_b)})")


@dataclass(frozen=True)
class ExtensionRing:
    """Q[gen]/(modulus) with modulus monic and squarefree."""

    modulus: UPoly
    gen: str = "a"

    @property
    def degree(self) -> int:
        return upoly_deg(self.modulus)

    def __repr__(self):
        return f"ExtensionRing({upoly_str(self.modulus, self.gen)})"

    def element(self, coeffs) -> "AlgebraicScalar":
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        v = upoly(coeffs)
        _, v = upoly_divmod(v, self.modulus)
        return AlgebraicScalar(self, v)

    def generator(self) -> "AlgebraicScalar":
        return self.element((0, 1))

    def zero(self) -> "AlgebraicScalar":
        return AlgebraicScalar(self, ())

    def one(self) -> "AlgebraicScalar":
        return self.element(1)


def make_extension(modulus, gen: str = "a") -> ExtensionRing:
    """Ring Q[gen]/(squarefree part of modulus).

    The modulus must be monic of degree >= 1; a degree-1 modulus just means
    the ring is Q with the generator pinned to a rational value.
    """
    m = upoly(modulus)
    if upoly_deg(m) < 1:
        raise ValueError("modulus must have degree >= 1")
    if m[-1] != 1:
        raise ValueError("modulus must be monic")
    return ExtensionRing(upoly_squarefree_part(m), gen)


RATIONAL_RING = ExtensionRing(upoly((0, 1)))  # Q itself: generator == 0


@dataclass(frozen=True)
class AlgebraicScalar:
    """An element of an ExtensionRing, reduced modulo the modulus."""

    ring: ExtensionRing
    value: UPoly

    def _coerce(self, other) -> "AlgebraicScalar":
        if isinstance(other, AlgebraicScalar):
            if other.ring != self.ring:
                raise ValueError("arithmetic on mismatched rings")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicScalar(self.ring, upoly((other,)))
        return NotImplemented  # type: ignore[return-value]

    def __bool__(self):
        return bool(self.value)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicScalar(self.ring, upoly_add(self.value, o.value))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicScalar(self.ring, upoly_neg(self.value))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicScalar(self.ring, upoly_sub(self.value, o.value))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        prod = upoly_mul(self.value, o.value)
        _, r = upoly_divmod(prod, self.ring.modulus)
        return AlgebraicScalar(self.ring, r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * invert(o)

    def __rtruediv__(self, other):
        return invert(self) * other

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraicScalar(self.ring, upoly((other,)))
        if not isinstance(other, AlgebraicScalar):
            return NotImplemented
        return self.ring == other.ring and self.value == other.value

    def __hash__(self):
        return hash((self.ring, self.value))

    def __repr__(self):
        return upoly_str(self.value, self.ring.gen) if self.value else "0"

    def as_rational(self) -> Fraction:
        """The value as a plain rational; requires degree < 1 in the generator."""
        if len(self.value) > 1:
            # degree-1 ring: generator is rational, substitute it
            if self.ring.degree == 1:
                root = -self.ring.modulus[0]
                return upoly_eval(self.value, root)
            raise ValueError(f"{self!r} is not rational")
        return self.value[0] if self.value else Fraction(0)


Scalar = Union[Fraction, AlgebraicScalar]


def scalar_ring(x: Scalar) -> ExtensionRing:
    return x.ring if isinstance(x, AlgebraicScalar) else RATIONAL_RING


def invert(a: Scalar) -> Scalar:
    """Multiplicative inverse; raises SplitEvent on a zero divisor."""
    if isinstance(a, (int, Fraction)):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / _frac(a)
    if not a.value:
        raise ZeroDivisionError("inverse of zero")
    g, u, _ = upoly_xgcd(a.value, a.ring.modulus)
    if upoly_deg(g) == 0:
        _, r = upoly_divmod(u, a.ring.modulus)
        return AlgebraicScalar(a.ring, r)
    cof, rem = upoly_divmod(a.ring.modulus, g)
    assert not rem
    raise SplitEvent(a.ring, g, upoly_monic(cof))


def map_to_factor(x: Scalar, new_ring: ExtensionRing) -> Scalar:
    """Reduce a scalar into the quotient by a factor of its modulus."""
    if isinstance(x, (int, Fraction)):
        return new_ring.element(_frac(x)) if new_ring is not RATIONAL_RING else _frac(x)
    _, r = upoly_divmod(x.value, new_ring.modulus)
    return AlgebraicScalar(new_ring, r)


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def row_reduce(matrix: Sequence[Sequence[Scalar]]):
    """Reduced row echelon form over one scalar ring.

    Returns (rank, rows, pivot_columns).  Raises SplitEvent if a pivot
    inversion meets a zero divisor, and ValueError on a ragged matrix.
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return 0, [], []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    pivots: List[int] = []
    pr = 0
    for pc in range(ncols):
        pivot_row = None
        for i in range(pr, len(rows)):
            if rows[i][pc]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
        inv = invert(rows[pr][pc])
        rows[pr] = [x * inv for x in rows[pr]]
        for i in range(len(rows)):
            if i != pr and rows[i][pc]:
                f = rows[i][pc]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[pr])]
        pivots.append(pc)
        pr += 1
        if pr == len(rows):
            break
    return len(pivots), rows, pivots


def matrix_rank(matrix: Sequence[Sequence[Scalar]]) -> int:
    return row_reduce(matrix)[0]


def nullspace(matrix: Sequence[Sequence[Fraction]]) -> List[Tuple[Fraction, ...]]:
    """Basis of the rational kernel of a matrix over Q."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rank, rows, pivots = row_reduce(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(tuple(vec))
    return basis


def solve_linear(matrix: Sequence[Sequence[Fraction]],
                 rhs: Sequence[Fraction]):
    """One rational solution of M x = b, or None if inconsistent."""
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0]) if matrix else 0
    rank, rows, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][-1]
    return tuple(x)
