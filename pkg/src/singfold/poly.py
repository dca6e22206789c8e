"""Sparse multivariate polynomials over an exact scalar field.

Coefficients are either :class:`fractions.Fraction` or
:class:`singfold.exact.AlgebraicScalar` (one extension ring per polynomial).
Terms are a dict from exponent tuples to nonzero coefficients; the variable
tuple is ordered by a fixed global precedence so the canonical form is
unique.  Polynomials are immutable by convention.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .exact import AlgebraicScalar, Scalar, invert, _frac

# fixed precedence for the variable universe; unknown names sort after, alphabetically
_VAR_ORDER = [
    "x", "y", "z", "X", "Y", "Z", "W", "u", "v", "w",
    "t2", "t4", "t6", "t8", "t10", "t12",
    "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8",
    "p2", "p4", "p5", "p6", "p8", "p9", "p10", "p12", "p14", "p18", "p0",
]
_VAR_RANK = {v: i for i, v in enumerate(_VAR_ORDER)}


def _var_key(name: str):
    return (0, _VAR_RANK[name]) if name in _VAR_RANK else (1, name)


def _sort_vars(names: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(names), key=_var_key))


def _is_zero(c) -> bool:
    return not c


class Polynomial:
    """A sparse multivariate polynomial in canonical form."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Tuple[int, ...], Scalar]):
        self.variables = tuple(variables)
        self.terms: Dict[Tuple[int, ...], Scalar] = {
            e: c for e, c in terms.items() if not _is_zero(c)}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(c, variables: Sequence[str] = ()) -> "Polynomial":
        if isinstance(c, int):
            c = Fraction(c)
        n = len(variables)
        return Polynomial(variables, {(0,) * n: c} if not _is_zero(c) else {})

    @staticmethod
    def var(name: str) -> "Polynomial":
        return Polynomial((name,), {(1,): Fraction(1)})

    @staticmethod
    def zero(variables: Sequence[str] = ()) -> "Polynomial":
        return Polynomial(variables, {})

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> Scalar:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def used_variables(self) -> Tuple[str, ...]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.variables[i])
        return _sort_vars(used)

    def drop_unused(self) -> "Polynomial":
        used = self.used_variables()
        if used == self.variables:
            return self
        return align(self, used)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        p, q = _pair(self, other)
        out = dict(p.terms)
        for e, c in q.terms.items():
            s = out.get(e, 0) + c
            if _is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(p.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other, self.variables))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p, q = _pair(self, other)
        out: Dict[Tuple[int, ...], Scalar] = {}
        for e1, c1 in p.terms.items():
            for e2, c2 in q.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if _is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(p.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            raise TypeError("use div_exact for polynomial division")
        return self * invert(_frac(c) if isinstance(c, int) else c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicScalar)):
            other = Polynomial.constant(other, self.variables)
        if not isinstance(other, Polynomial):
            return NotImplemented
        p, q = _pair(self, other)
        return p.terms == q.terms

    def __hash__(self):
        p = self.drop_unused()
        return hash((p.variables, frozenset(p.terms.items())))

    def __repr__(self):
        return to_text(self)

    # -- calculus & evaluation ---------------------------------------------

    def diff(self, name: str) -> "Polynomial":
        if name not in self.variables:
            raise ValueError(f"unknown variable {name!r}")
        i = self.variables.index(name)
        out: Dict[Tuple[int, ...], Scalar] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = e[:i] + (e[i] - 1,) + e[i + 1:]
            nc = c * e[i]
            s = out.get(ne, 0) + nc
            if _is_zero(s):
                out.pop(ne, None)
            else:
                out[ne] = s
        return Polynomial(self.variables, out)

    def subs(self, bindings: Mapping[str, Union["Polynomial", Scalar, int]]) -> "Polynomial":
        """Simultaneous substitution, fully expanded."""
        nvars = [v for v in self.variables if v not in bindings]
        extra = set()
        bound: Dict[str, Polynomial] = {}
        for k, v in bindings.items():
            if not isinstance(v, Polynomial):
                v = Polynomial.constant(v if not isinstance(v, int) else Fraction(v))
            bound[k] = v
            extra.update(v.used_variables())
        allvars = _sort_vars(set(nvars) | extra)
        result = Polynomial.zero(allvars)
        for e, c in self.terms.items():
            term = Polynomial.constant(c, allvars)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                name = self.variables[i]
                base = bound.get(name, None)
                if base is None:
                    base = align(Polynomial.var(name), allvars)
                else:
                    base = align(base, allvars)
                term = term * base ** k
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Scalar]) -> Scalar:
        acc = None
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * values[self.variables[i]] ** k
            acc = t if acc is None else acc + t
        return acc if acc is not None else Fraction(0)

    def coefficients_in(self, name: str) -> List["Polynomial"]:
        """Coefficients of powers of ``name``, low to high, over the other vars."""
        if name not in self.variables:
            return [self]
        i = self.variables.index(name)
        rest = self.variables[:i] + self.variables[i + 1:]
        d = self.degree_in(name)
        coeffs = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            re = e[:i] + e[i + 1:]
            coeffs[e[i]][re] = c
        return [Polynomial(rest, t) for t in coeffs]

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.variables,
                          {e: c for e, c in self.terms.items() if sum(e) == d})

    def lowest_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)


def _lift(x, variables) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        x = Fraction(x)
    return Polynomial.constant(x, variables)


def align(p: Polynomial, variables: Sequence[str]) -> Polynomial:
    """Re-express p on a variable tuple that must contain its used variables."""
    variables = tuple(variables)
    if p.variables == variables:
        return p
    idx = []
    for v in p.variables:
        idx.append(variables.index(v) if v in variables else -1)
    out: Dict[Tuple[int, ...], Scalar] = {}
    n = len(variables)
    for e, c in p.terms.items():
        ne = [0] * n
        for i, k in enumerate(e):
            if k:
                if idx[i] < 0:
                    raise ValueError(f"variable {p.variables[i]!r} not in target")
                ne[idx[i]] = k
        key = tuple(ne)
        s = out.get(key, 0) + c
        if _is_zero(s):
            out.pop(key, None)
        else:
            out[key] = s
    return Polynomial(variables, out)


def _pair(p: Polynomial, other) -> Tuple[Polynomial, Polynomial]:
    q = _lift(other, p.variables)
    if p.variables == q.variables:
        return p, q
    union = _sort_vars(set(p.variables) | set(q.variables))
    return align(p, union), align(q, union)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def to_text(p: Polynomial) -> str:
    """Canonical human syntax, graded-lex term order, e.g. ``-1/64*X^5 + X*Y^2``."""
    if p.is_zero():
        return "0"
    q = p.drop_unused()

    def order(e):
        return (-sum(e), tuple(-k for k in e))

    parts = []
    for e in sorted(q.terms, key=order):
        c = q.terms[e]
        mon = "*".join(
            (v if k == 1 else f"{v}^{k}")
            for v, k in zip(q.variables, e) if k)
        if isinstance(c, AlgebraicScalar):
            cs = f"({c!r})"
            parts.append(f"{cs}*{mon}" if mon else cs)
            continue
        neg = c < 0
        ac = -c if neg else c
        if mon:
            body = mon if ac == 1 else f"{ac}*{mon}"
        else:
            body = str(ac)
        parts.append(("- " if neg else "+ ") + body)
    text = " ".join(parts)
    if text.startswith("+ "):
        text = text[2:]
    elif text.startswith("- "):
        text = "-" + text[2:]
    return text


class ParseError(ValueError):
    pass


def parse(text: str) -> Polynomial:
    """Parse exact polynomial text: rationals, + - * / ^ ( ), and variables."""
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        t = tokens[pos[0]]
        pos[0] += 1
        return t

    def parse_expr() -> Polynomial:
        t = peek()
        sign = 1
        while t in ("+", "-"):
            take()
            if t == "-":
                sign = -sign
            t = peek()
        node = parse_term()
        node = node if sign > 0 else -node
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term() -> Polynomial:
        node = parse_factor()
        while True:
            t = peek()
            if t == "*":
                take()
                node = node * parse_factor()
            elif t == "/":
                take()
                d = parse_factor()
                if not d.is_constant():
                    raise ParseError("division only by constants")
                node = node * Fraction(1) / d.constant_value()
            elif t is not None and (t == "(" or _is_name(t) or _is_num(t)):
                # juxtaposition
                node = node * parse_factor()
            else:
                return node

    def parse_factor() -> Polynomial:
        node = parse_atom()
        while peek() in ("^", "**"):
            take()
            neg = False
            if peek() == "-":
                take()
                neg = True
            e = take()
            if not _is_num(e) or "/" in e:
                raise ParseError(f"bad exponent {e!r}")
            if neg:
                raise ParseError("negative exponents unsupported")
            node = node ** int(e)
        return node

    def parse_atom() -> Polynomial:
        t = peek()
        if t is None:
            raise ParseError("unexpected end of input")
        if t == "(":
            take()
            node = parse_expr()
            if peek() != ")":
                raise ParseError("missing ')'")
            take()
            return node
        if t == "-":
            take()
            return -parse_atom()
        take()
        if _is_num(t):
            return Polynomial.constant(Fraction(t))
        if _is_name(t):
            return Polynomial.var(t)
        raise ParseError(f"unexpected token {t!r}")

    node = parse_expr()
    if pos[0] != len(tokens):
        raise ParseError(f"trailing input at token {tokens[pos[0]]!r}")
    return node.drop_unused()


def _is_name(t: str) -> bool:
    return t[0].isalpha() or t[0] == "_"


def _is_num(t: str) -> bool:
    return t[0].isdigit()


def _tokenize(text: str) -> List[str]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            if ch == "*" and i + 1 < n and text[i + 1] == "*":
                out.append("**")
                i += 2
            else:
                out.append(ch)
                i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        else:
            raise ParseError(f"bad character {ch!r}")
    return out


# ---------------------------------------------------------------------------
# division, resultants, gcd
# ---------------------------------------------------------------------------

def div_exact(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact division p / q; raises ValueError if q does not divide p."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    union = _sort_vars(set(p.variables) | set(q.variables))
    p = align(p, union)
    q = align(q, union)

    def lead(f: Polynomial):
        e = max(f.terms, key=lambda e: (sum(e), e))
        return e, f.terms[e]

    qe, qc = lead(q)
    qinv = invert(qc)
    out: Dict[Tuple[int, ...], Scalar] = {}
    rem = p
    while not rem.is_zero():
        re, rc = lead(rem)
        de = tuple(a - b for a, b in zip(re, qe))
        if any(k < 0 for k in de):
            raise ValueError("inexact polynomial division")
        c = rc * qinv
        out[de] = c
        rem = rem - Polynomial(union, {de: c}) * q
    return Polynomial(union, out)


def divides(q: Polynomial, p: Polynomial) -> bool:
    try:
        div_exact(p, q)
        return True
    except ValueError:
        return False


def _det_bareiss(m: List[List[Polynomial]], variables) -> Polynomial:
    """Fraction-free determinant over a polynomial ring."""
    n = len(m)
    if n == 0:
        return Polynomial.constant(1, variables)
    m = [row[:] for row in m]
    sign = 1
    prev = Polynomial.constant(1, variables)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero(variables)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = div_exact(num, prev)
            m[i][k] = Polynomial.zero(variables)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def resultant(p: Polynomial, q: Polynomial, name: str) -> Polynomial:
    """Sylvester resultant of p and q with respect to ``name``.

    Vanishes exactly on parameter values where p and q share a root.
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    pc = p.coefficients_in(name)
    qc = q.coefficients_in(name)
    m, n = len(pc) - 1, len(qc) - 1
    rest = _sort_vars((set(p.variables) | set(q.variables)) - {name})
    pc = [align(c.drop_unused(), rest) if not c.is_zero() else Polynomial.zero(rest) for c in pc]
    qc = [align(c.drop_unused(), rest) if not c.is_zero() else Polynomial.zero(rest) for c in qc]
    if m == 0 and n == 0:
        return Polynomial.constant(1, rest)
    if m == 0:
        return align(pc[0], rest) ** n
    if n == 0:
        return align(qc[0], rest) ** m
    size = m + n
    zero = Polynomial.zero(rest)
    rows: List[List[Polynomial]] = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(pc)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(qc)):
            row[i + j] = c
        rows.append(row)
    det = _det_bareiss(rows, rest).drop_unused()
    # sign normalized so that Res_v(p, v) = -p(0) and Res_v(p-v, p+v) = 2p
    return -det if n % 2 == 1 else det


def _upoly_of(p: Polynomial, name: str) -> List[Scalar]:
    """Scalar coefficient list of a univariate polynomial, low to high."""
    if p.is_zero():
        return []
    used = set(p.used_variables())
    if used - {name}:
        raise ValueError(f"not univariate in {name!r}: {p}")
    q = align(p, (name,)) if name in p.variables or not used else align(p, (name,))
    d = q.degree_in(name)
    out: List[Scalar] = [Fraction(0)] * (d + 1)
    for e, c in q.terms.items():
        out[e[0]] = c
    return out


def _from_coeffs(coeffs: Sequence[Scalar], name: str) -> Polynomial:
    return Polynomial((name,), {(i,): c for i, c in enumerate(coeffs) if not _is_zero(c)})


def gcd_univariate(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd of univariate polynomials over one scalar ring.

    Over Q a subresultant PRS controls coefficient growth; over an extension
    ring a monic Euclidean sequence is used and may raise SplitEvent.
    """
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if p.is_zero():
        return _make_monic(q)
    if q.is_zero():
        return _make_monic(p)
    names = set(p.used_variables()) | set(q.used_variables())
    if len(names) > 1:
        raise ValueError("gcd_univariate needs univariate input")
    name = names.pop() if names else "x"
    a = _upoly_of(p, name)
    b = _upoly_of(q, name)
    rational = all(isinstance(c, Fraction) for c in a + b)
    if rational:
        g = _subresultant_gcd([Fraction(c) for c in a], [Fraction(c) for c in b])
    else:
        g = _euclid_gcd(a, b)
    return _from_coeffs(g, name)


def _make_monic(p: Polynomial) -> Polynomial:
    lead_exp = max(p.terms, key=lambda e: (sum(e), e))
    return p * invert(p.terms[lead_exp])


def _strip(c: List) -> List:
    while c and _is_zero(c[-1]):
        c.pop()
    return c


def _euclid_gcd(a: List[Scalar], b: List[Scalar]) -> List[Scalar]:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        # monic division step; inversion may raise SplitEvent
        inv = invert(b[-1])
        bm = [c * inv for c in b]
        r = list(a)
        while len(r) >= len(bm) and _strip(r):
            if _is_zero(r[-1]):
                r.pop()
                continue
            c = r[-1]
            k = len(r) - len(bm)
            for i, bc in enumerate(bm):
                r[k + i] = r[k + i] - c * bc
            r.pop()
        a, b = bm, _strip(r)
    inv = invert(a[-1])
    return [c * inv for c in a]


def _subresultant_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    """Monic gcd over Q via the subresultant PRS on integer primitives."""
    from math import gcd as igcd, lcm

    def to_int_primitive(p: List[Fraction]) -> List[int]:
        den = lcm(*[c.denominator for c in p]) if p else 1
        zs = [int(c * den) for c in p]
        g = 0
        for c in zs:
            g = igcd(g, abs(c))
        return [c // g for c in zs] if g else zs

    def pseudo_rem(f: List[int], g: List[int]) -> List[int]:
        # lc(g)^(deg f - deg g + 1) * f mod g
        f = f[:]
        dg = len(g) - 1
        lg = g[-1]
        steps = len(f) - len(g) + 1
        while len(f) - 1 >= dg and any(f):
            while f and f[-1] == 0:
                f.pop()
            if len(f) - 1 < dg:
                break
            c = f[-1]
            k = len(f) - 1 - dg
            f = [x * lg for x in f]
            for i, gc in enumerate(g):
                f[k + i] -= c * gc
            while f and f[-1] == 0:
                f.pop()
            steps -= 1
        if steps > 0:
            f = [x * lg ** steps for x in f]
        return f

    A = to_int_primitive(_strip(list(a)))
    B = to_int_primitive(_strip(list(b)))
    if len(A) < len(B):
        A, B = B, A
    g = 1
    h = 1
    while True:
        delta = len(A) - len(B)
        R = pseudo_rem(A, B)
        if not R:
            gp = to_int_primitive(B)
            lc = Fraction(gp[-1])
            return [Fraction(c) / lc for c in gp]
        if len(R) == 1:
            return [Fraction(1)]
        denom = g * h ** delta
        A, B = B, [c // denom for c in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = g ** delta // h ** (delta - 1)


# ---------------------------------------------------------------------------
# binary cubic shapes
# ---------------------------------------------------------------------------

BINARY_CUBIC_SHAPES = ("three-distinct", "one-double", "triple", "zero")


def binary_cubic_shape(c: Polynomial) -> str:
    """Root-multiplicity shape of a homogeneous binary cubic (or zero).

    Distinguishes three distinct roots, one double root, a triple root,
    and the zero form, from the degree of gcd(c, c_u, c_v).
    """
    if c.is_zero():
        return "zero"
    used = c.used_variables()
    if len(used) > 2:
        raise ValueError("binary form needed")
    if not all(sum(e) == 3 for e in c.terms):
        raise ValueError("homogeneous cubic needed")
    u, v = (used + ("_aux1", "_aux2"))[:2]
    d = _binary_form_gcd_degree(
        [c, c.diff(u)] + ([c.diff(v)] if v in c.variables else []), u, v)
    if d == 0:
        return "three-distinct"
    if d == 1:
        return "one-double"
    if d == 2:
        return "triple"
    raise ValueError("impossible gcd degree for a nonzero cubic")


def _binary_form_gcd_degree(forms: List[Polynomial], u: str, v: str) -> int:
    """Degree of the gcd of homogeneous binary forms in (u, v)."""
    # dehomogenize at v = 1; a common factor v^k shows up as degree drop
    infinity_mult = None
    dehoms = []
    for f in forms:
        if f.is_zero():
            continue
        deg = f.total_degree()
        fe = f.subs({v: Polynomial.constant(Fraction(1))}) if v in f.variables else f
        fe = fe.drop_unused()
        dv = fe.total_degree()
        k = deg - dv  # multiplicity of v in f
        infinity_mult = k if infinity_mult is None else min(infinity_mult, k)
        dehoms.append(fe)
    g = None
    for fe in dehoms:
        g = fe if g is None else gcd_univariate(g, fe)
        if g.total_degree() == 0 and (infinity_mult or 0) == 0:
            return 0
    return (g.total_degree() if g is not None else 0) + (infinity_mult or 0)
