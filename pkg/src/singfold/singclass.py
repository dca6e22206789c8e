"""Exact location and ADE classification of surface singularities.

Given F(u,v,w) = 0 with rational coefficients, the singular points are found
by structured elimination (the equations handled here are quadratic in one
variable with constant leading coefficient, or of split form c*u*v + P(w)),
with coordinates in extension rings produced by dynamic evaluation.  Each
point is classified by Milnor number, Hessian corank and the shape of the
kernel-restricted cubic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import (RATIONAL_RING, AlgebraicScalar, ExtensionRing, Scalar,
                    SplitEvent, invert, make_extension, map_to_factor,
                    upoly, upoly_deg)
from .poly import Polynomial, align, gcd_univariate, resultant, _sort_vars
from .subsys import TypeMultiset, canonical_type, format_type

Point = Tuple[Scalar, ...]
Branch = Tuple[ExtensionRing, Point]


class ClassificationError(ValueError):
    pass


@dataclass
class SingularPointRecord:
    ring: ExtensionRing
    coords: Point
    mu: int
    corank: int
    cubic_shape: Optional[str]
    ade_type: str
    orbit_size: int

    def to_json(self) -> dict:
        from .exact import upoly_str

        def ser(c):
            return str(c) if isinstance(c, Fraction) else repr(c)

        return {
            "ring_modulus": (upoly_str(self.ring.modulus, self.ring.gen)
                             if self.ring.degree > 1 else None),
            "coordinates": [ser(c) for c in self.coords],
            "mu": self.mu,
            "corank": self.corank,
            "cubic_shape": self.cubic_shape,
            "type": self.ade_type,
            "orbit_size": self.orbit_size,
        }


@dataclass
class FiberConfiguration:
    points: List[SingularPointRecord]
    type_multiset: TypeMultiset

    def type_string(self) -> str:
        return format_type(self.type_multiset) if self.type_multiset else "smooth"

    def to_json(self) -> dict:
        return {"configuration": self.type_string(),
                "points": [p.to_json() for p in self.points]}


def _as_scalar_in(ring: ExtensionRing, x: Scalar) -> Scalar:
    if ring is RATIONAL_RING or ring.degree == 1 and isinstance(x, Fraction):
        return x
    if isinstance(x, AlgebraicScalar):
        return x
    return ring.element(x)


# ---------------------------------------------------------------------------
# univariate root branches over Q
# ---------------------------------------------------------------------------

def _upoly_from(p: Polynomial, name: str) -> List[Scalar]:
    if p.is_zero():
        return []
    d = p.degree_in(name)
    out: List[Scalar] = [Fraction(0)] * (d + 1)
    i = p.variables.index(name) if name in p.variables else None
    for e, c in p.terms.items():
        k = e[i] if i is not None else 0
        out[k] = out[k] + c
    return out


def _root_branches_q(p: Polynomial, name: str) -> List[Tuple[ExtensionRing, Scalar]]:
    """Branches of roots of a nonzero squarefree-able polynomial over Q."""
    coeffs = _upoly_from(p, name)
    m = upoly(c if isinstance(c, Fraction) else c.as_rational() for c in coeffs)
    if upoly_deg(m) < 1:
        return []
    lead = m[-1]
    m = tuple(c / lead for c in m)
    ring = make_extension(m)
    if ring.degree == 1:
        return [(RATIONAL_RING, -ring.modulus[0])]
    return [(ring, ring.generator())]


# ---------------------------------------------------------------------------
# bivariate singular-point solver
# ---------------------------------------------------------------------------

def _eval_coeffs(p: Polynomial, u: str, v: str, alpha: Scalar) -> List[Scalar]:
    """Coefficients in v of p(u=alpha, v), low to high."""
    cs = p.coefficients_in(v) if v in p.variables else [p]
    out = []
    for c in cs:
        if c.is_constant():
            out.append(c.constant_value())
        else:
            out.append(c.evaluate({u: alpha}))
    return out


def _strip_scalars(c: List[Scalar]) -> List[Scalar]:
    while c and not c[-1]:
        c.pop()
    return c


def _gcd_scalar_polys(polys: List[List[Scalar]]) -> List[Scalar]:
    """Monic gcd of scalar coefficient lists; may raise SplitEvent."""
    g: Optional[List[Scalar]] = None
    for p in polys:
        p = _strip_scalars(list(p))
        if not p:
            continue
        if g is None:
            g = p
            continue
        a, b = g, p
        while b:
            inv = invert(b[-1])
            bm = [c * inv for c in b]
            r = list(a)
            while True:
                r = _strip_scalars(r)
                if len(r) < len(bm):
                    break
                c = r[-1]
                k = len(r) - len(bm)
                for i, bc in enumerate(bm):
                    r[k + i] = r[k + i] - c * bc
                r.pop()
            a, b = bm, _strip_scalars(r)
        g = a
        if len(g) == 1:
            break
    if g is None:
        raise ClassificationError("all polynomials vanish identically: non-isolated locus")
    inv = invert(g[-1])
    return [c * inv for c in g]


def _scalar_poly_divide(num: List[Scalar], den: List[Scalar]) -> List[Scalar]:
    """Exact division of scalar coefficient lists; den monic."""
    r = list(num)
    out: List[Scalar] = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    while True:
        r = _strip_scalars(r)
        if len(r) < len(den):
            break
        c = r[-1]
        k = len(r) - len(den)
        out[k] = c
        for i, dc in enumerate(den):
            r[k + i] = r[k + i] - c * dc
        r.pop()
    if _strip_scalars(r):
        raise AssertionError("inexact scalar polynomial division")
    return _strip_scalars(out)


def _scalar_poly_squarefree(g: List[Scalar]) -> List[Scalar]:
    """Squarefree part of a monic scalar polynomial; may raise SplitEvent."""
    if len(g) <= 2:
        return list(g)
    deriv = [i * c for i, c in enumerate(g)][1:]
    h = _gcd_scalar_polys([list(g), deriv])
    if len(h) == 1:
        return list(g)
    return _scalar_poly_divide(list(g), h)


def _merge_extension(ring: ExtensionRing, gpoly: List[Scalar], u_name: str,
                     v_name: str) -> List[Tuple[ExtensionRing, Scalar, Scalar]]:
    """Points (u, v) with m(u) = 0 and g(u, v) = 0, deg_v g >= 2.

    Merges the tower Q[u]/(m) -> [v]/(g) into single extensions by a
    primitive element v + k*u.
    """
    m = ring.modulus
    mpoly = Polynomial((u_name,), {(i,): c for i, c in enumerate(m) if c})
    # lift g to a bivariate polynomial over Q
    gv = Polynomial.zero((u_name, v_name))
    for j, c in enumerate(gpoly):
        if isinstance(c, AlgebraicScalar):
            cu = Polynomial((u_name,), {(i,): cc for i, cc in enumerate(c.value) if cc})
        else:
            cu = Polynomial.constant(c, (u_name,))
        gv = gv + cu * Polynomial.var(v_name) ** j
    for k in range(0, 12):
        # gamma = v + k*u
        shifted = gv.subs({v_name: Polynomial.var("_g") - k * Polynomial.var(u_name)})
        M = resultant(align(mpoly, _sort_vars({u_name, "_g"})), shifted, u_name)
        mc = _upoly_from(M, "_g")
        mq = upoly(c if isinstance(c, Fraction) else c.as_rational() for c in mc)
        if upoly_deg(mq) < 1:
            continue
        mq = tuple(c / mq[-1] for c in mq)
        from .exact import upoly_gcd, upoly_deriv
        if upoly_deg(upoly_gcd(mq, upoly_deriv(mq))) != 0:
            continue  # not squarefree for this k; try the next shear
        out: List[Tuple[ExtensionRing, Scalar, Scalar]] = []
        queue: List[ExtensionRing] = [make_extension(mq, "a")]
        ok = True
        while queue and ok:
            newring = queue.pop()
            gamma = newring.generator()
            try:
                # u is the common root of m(U) and g(U, gamma - k*U)
                mu_c = [_as_scalar_in(newring, c) for c in m]
                cs = shifted.coefficients_in(u_name)  # shifted lives in (u, _g)
                gu_c = [c.evaluate({"_g": gamma}) if not c.is_constant()
                        else _as_scalar_in(newring, c.constant_value()) for c in cs]
                common = _gcd_scalar_polys([mu_c, gu_c])
            except SplitEvent as e:
                queue.append(ExtensionRing(e.factor_a, newring.gen))
                queue.append(ExtensionRing(e.factor_b, newring.gen))
                continue
            if len(common) != 2:
                ok = False  # primitive element failed; try the next shear
                break
            uval = -common[0]  # monic linear: U + c0
            vval = gamma - k * uval
            out.append((newring, uval, vval))
        if ok and out:
            return out
    raise ClassificationError("primitive-element merge failed")


def _solve_bivariate(G: Polynomial, u: str, v: str) -> List[Tuple[ExtensionRing, Scalar, Scalar]]:
    """Common zeros of (G, G_u, G_v): the singular points of G(u,v) = 0."""
    if G.is_zero():
        raise ClassificationError("zero polynomial")
    polys = [G]
    if u in G.variables:
        polys.append(G.diff(u))
    if v in G.variables:
        polys.append(G.diff(v))
    pure_u = [p for p in polys if not p.is_zero() and v not in p.used_variables()]
    with_v = [p for p in polys if not p.is_zero() and v in p.used_variables()]
    if not with_v:
        raise ClassificationError("system does not constrain the second variable")
    elim: List[Polynomial] = list(pure_u)
    for i in range(len(with_v)):
        for j in range(i + 1, len(with_v)):
            r = resultant(with_v[i], with_v[j], v)
            # a vanishing pairwise eliminant carries no information (the pair
            # shares a factor); the remaining eliminants still cut out the
            # candidate values
            if not r.is_zero():
                elim.append(r)
    if not elim:
        raise ClassificationError("every eliminant vanishes: non-isolated locus")
    cand: Optional[Polynomial] = None
    for p in elim:
        cand = p if cand is None else gcd_univariate(cand, p)
    assert cand is not None
    if cand.is_zero():
        raise ClassificationError("eliminant vanishes identically: non-isolated locus")
    if cand.total_degree() == 0:
        return []
    branches = _root_branches_q(align(cand.drop_unused(), (u,)), u)
    out: List[Tuple[ExtensionRing, Scalar, Scalar]] = []
    queue: List[Tuple[ExtensionRing, Scalar]] = list(branches)
    while queue:
        ring, alpha = queue.pop()
        try:
            scal = [_eval_coeffs(p, u, v, alpha) for p in with_v]
            g = _scalar_poly_squarefree(_gcd_scalar_polys(scal))
        except SplitEvent as e:
            for fac in (e.factor_a, e.factor_b):
                r2 = ExtensionRing(fac, ring.gen) if upoly_deg(fac) > 1 else RATIONAL_RING
                if r2 is RATIONAL_RING:
                    a2: Scalar = -fac[0]
                else:
                    a2 = map_to_factor(alpha, r2)
                queue.append((r2, a2))
            continue
        deg = len(g) - 1
        if deg <= 0:
            continue  # spurious eliminant root: no common v here
        if deg == 1:
            out.append((ring, alpha, -g[0]))
            continue
        if ring.degree == 1 or ring is RATIONAL_RING:
            # plain univariate in v over Q
            coeffs = [c if isinstance(c, Fraction) else c.as_rational() for c in g]
            sub = _root_branches_q(Polynomial((v,), {(i,): c for i, c in enumerate(coeffs) if c}), v)
            for r2, beta in sub:
                a2 = alpha if isinstance(alpha, Fraction) else alpha.as_rational()
                out.append((r2, _as_scalar_in(r2, a2), beta))
            continue
        out.extend(_merge_extension(ring, g, u, v))
    return out


# ---------------------------------------------------------------------------
# top-level singular point location
# ---------------------------------------------------------------------------

def singular_points(F: Polynomial) -> List[Branch]:
    """All common zeros of (F, dF), grouped into extension-ring branches.

    Coordinates are returned in the order of ``F.used_variables()``.
    """
    names = F.used_variables()
    if len(names) > 3:
        raise ClassificationError("more than 3 variables")
    if F.is_zero():
        raise ClassificationError("zero polynomial")
    if len(names) == 0:
        return []
    if len(names) == 1:
        u = names[0]
        g = gcd_univariate(F, F.diff(u))
        if g.total_degree() < 1:
            return []
        out = []
        for ring, val in _root_branches_q(g, u):
            out.append((ring, (val,)))
        return out
    if len(names) == 2:
        u, v = names
        return [(ring, (a, b)) for ring, a, b in _solve_bivariate(F, u, v)]
    return _solve_trivariate(F, names)


def _solve_trivariate(F: Polynomial, names: Tuple[str, str, str]) -> List[Branch]:
    # split form c*u*v + P(w): gradient forces u = v = 0
    split = _detect_split_form(F, names)
    if split is not None:
        (iu, iv, iw), P = split
        u, v, w = names[iu], names[iv], names[iw]
        Pw = P
        dP = Pw.diff(w) if w in Pw.variables else Polynomial.zero()
        if Pw.is_zero():
            raise ClassificationError("non-isolated singular locus")
        g = gcd_univariate(Pw, dP) if not dP.is_zero() else None
        if g is None or g.total_degree() < 1:
            # P and P' share no root: singular points need P(w)=P'(w)=0
            return []
        out = []
        for ring, val in _root_branches_q(g, w):
            zero = _as_scalar_in(ring, Fraction(0)) if ring is not RATIONAL_RING else Fraction(0)
            coords = [zero, zero, zero]
            coords[iw] = val
            out.append((ring, tuple(coords)))
        return out
    # quadratic variable with constant leading coefficient
    quad = _detect_quadratic_var(F, names)
    if quad is None:
        raise ClassificationError(
            "unsupported equation shape for singular-point elimination")
    w, A, B, C = quad
    rest = tuple(n for n in names if n != w)
    D = Polynomial.constant(Fraction(4)) * A * C - B * B
    D = D.drop_unused()
    if D.is_zero():
        raise ClassificationError("degenerate quadratic: non-isolated singular locus")
    if D.is_constant():
        return []
    u, v = rest
    Du = align(D, rest)
    sols = _solve_bivariate(Du, u, v)
    out = []
    a_const = A.constant_value()
    for ring, aval, bval in sols:
        # w = -B(u0,v0) / (2A)
        bv = B.evaluate({u: aval, v: bval}) if not B.is_zero() else Fraction(0)
        wval = -bv * invert(2 * a_const) if bv else (
            _as_scalar_in(ring, Fraction(0)) if ring is not RATIONAL_RING else Fraction(0))
        coords = {u: aval, v: bval, w: wval}
        out.append((ring, tuple(coords[n] for n in names)))
    return out


def _detect_split_form(F: Polynomial, names):
    """Match F = c*u*v + P(w) exactly; returns ((iu,iv,iw), P) or None."""
    idx = {n: F.variables.index(n) for n in names}
    cross = None
    wvar = None
    for e, c in F.terms.items():
        active = [n for n in names if e[idx[n]] > 0]
        if len(active) == 0:
            continue
        if len(active) == 1:
            n = active[0]
            if wvar is None:
                wvar = n
            elif wvar != n:
                return None
        elif len(active) == 2:
            a, b = active
            if e[idx[a]] == 1 and e[idx[b]] == 1 and cross is None:
                cross = (a, b)
            else:
                return None
        else:
            return None
    if cross is None or wvar is None or wvar in cross:
        return None
    iu = names.index(cross[0])
    iv = names.index(cross[1])
    iw = names.index(wvar)
    keep = [e for e in F.terms if all(e[idx[n]] == 0 for n in cross)]
    P = Polynomial(F.variables, {e: F.terms[e] for e in keep})
    if not P.is_zero():
        P = align(P.drop_unused(), (wvar,))
    return (iu, iv, iw), P


def _detect_quadratic_var(F: Polynomial, names):
    """First variable w with deg_w F = 2 and constant w^2 coefficient."""
    for w in names:
        if F.degree_in(w) != 2:
            continue
        cs = F.coefficients_in(w)
        A = cs[2].drop_unused()
        if not A.is_constant():
            continue
        B = cs[1].drop_unused() if len(cs) > 1 else Polynomial.zero()
        C = cs[0].drop_unused()
        return w, A, B, C
    return None


# ---------------------------------------------------------------------------
# Milnor number, Hessian corank, classification
# ---------------------------------------------------------------------------

def _translate(F: Polynomial, names: Sequence[str], point: Point) -> Polynomial:
    subs = {}
    for n, p in zip(names, point):
        subs[n] = Polynomial.var(n) + Polynomial.constant(p)
    return F.subs(subs)


def _lead_key(e: Tuple[int, ...]):
    return (sum(e), e)


def _sparse_rank(rows: List[Dict[Tuple[int, ...], Scalar]]) -> int:
    """Rank of sparse rows over a scalar ring; may raise SplitEvent."""
    pivots: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Scalar]] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = max(row, key=_lead_key)
            piv = pivots.get(lead)
            if piv is None:
                inv = invert(row[lead])
                row = {e: c * inv for e, c in row.items()}
                pivots[lead] = row
                break
            f = row[lead]
            for e, c in piv.items():
                s = row.get(e, 0) - f * c
                if not s:
                    row.pop(e, None)
                else:
                    row[e] = s
        # empty row contributes nothing
    return len(pivots)


def _monomials_below(n_vars: int, deg: int) -> List[Tuple[int, ...]]:
    """All exponent tuples of total degree < deg, ordered by degree."""
    out = []

    def rec(prefix, remaining, left):
        if remaining == 1:
            out.append(prefix + (left,))
            return
        for k in range(left + 1):
            rec(prefix + (k,), remaining - 1, left - k)

    for d in range(deg):
        rec((), n_vars, d)
    return out


def milnor_number(F: Polynomial, point: Point, cap: int = 16) -> int:
    """Milnor number at an isolated singular point via degree truncation.

    Builds the space of polynomials of degree < N modulo the span of the
    truncated Jacobian-ideal generators and all monomials of degree >= N,
    returning the dimension once it agrees for two consecutive N.
    """
    names = F.used_variables()
    G = _translate(F, names, point)
    return _milnor_translated(G, names, cap)


def _milnor_translated(G: Polynomial, names, cap: int = 16) -> int:
    parts = [G.diff(n).drop_unused() for n in names]
    parts = [align(p, names) for p in parts if not p.is_zero()]
    if not parts:
        raise ClassificationError("zero gradient: not an isolated singularity")
    nv = len(names)
    prev = None
    for N in range(4, cap + 1):
        rows = []
        for g in parts:
            low = g.lowest_degree()
            for m in _monomials_below(nv, max(N - low, 1)):
                row: Dict[Tuple[int, ...], Scalar] = {}
                for e, c in g.terms.items():
                    ee = tuple(a + b for a, b in zip(e, m))
                    if sum(ee) < N:
                        s = row.get(ee, 0) + c
                        if not s:
                            row.pop(ee, None)
                        else:
                            row[ee] = s
                if row:
                    rows.append(row)
        rank = _sparse_rank(rows)
        total = len(_monomials_below(nv, N))
        mu = total - rank
        if prev is not None and mu == prev:
            if mu < 1:
                raise ClassificationError("vanishing local algebra: smooth point?")
            return mu
        prev = mu
    raise ClassificationError(f"Milnor truncation did not stabilize by N = {cap}")


def hessian_corank(F: Polynomial, point: Point) -> int:
    """3 - rank of the Hessian at the point (or n - rank in n variables)."""
    names = F.used_variables()
    G = _translate(F, names, point)
    return _hessian_corank_translated(G, names)[0]


def _hessian_corank_translated(G: Polynomial, names):
    n = len(names)
    H = []
    zero_exp = (0,) * len(G.variables)
    for a in names:
        row = []
        for b in names:
            d = G.diff(a).diff(b)
            row.append(d.terms.get(zero_exp, Fraction(0)))
        H.append(row)
    rank, rows, pivots = row_reduce_ring(H)
    return n - rank, rows, pivots, H


def row_reduce_ring(matrix):
    from .exact import row_reduce as rr
    return rr(matrix)


def _hessian_kernel(rows, pivots, n) -> List[List[Scalar]]:
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        vec: List[Scalar] = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


def classify_point(F: Polynomial, point: Point, ring: ExtensionRing = RATIONAL_RING,
                   orbit_size: Optional[int] = None) -> SingularPointRecord:
    """ADE label of an isolated singular point from (mu, corank, cubic shape)."""
    names = F.used_variables()
    if len(names) != 3:
        raise ClassificationError("classification needs a 3-variable equation")
    G = _translate(F, names, point)
    zero_exp = (0,) * len(G.variables)
    if G.terms.get(zero_exp):
        raise ClassificationError("point is not on the surface")
    for nvar in names:
        d = G.diff(nvar)
        if d.terms.get((0,) * len(d.variables)):
            raise ClassificationError("point is not singular")
    mu = _milnor_translated(G, names)
    if mu > 8:
        raise ClassificationError(f"mu = {mu} > 8: outside the ADE range")
    corank, rows, pivots, H = _hessian_corank_translated(G, names)
    shape = None
    if corank <= 1:
        ade = f"A{mu}"
        if corank == 0 and mu != 1:
            raise ClassificationError("nondegenerate Hessian forces mu = 1")
    elif corank == 2:
        kern = _hessian_kernel(rows, pivots, len(names))
        cubic = G.homogeneous_part(3)
        s, t = Polynomial.var("_s"), Polynomial.var("_t")
        subs = {}
        for i, nvar in enumerate(names):
            subs[nvar] = s * Polynomial.constant(kern[0][i]) + t * Polynomial.constant(kern[1][i])
        restricted = cubic.subs(subs).drop_unused()
        from .poly import binary_cubic_shape
        shape = binary_cubic_shape(restricted)
        if shape == "three-distinct":
            if mu != 4:
                raise ClassificationError("three distinct tangent lines force mu = 4")
            ade = "D4"
        elif shape == "one-double":
            if mu < 5:
                raise ClassificationError("double tangent line forces mu >= 5")
            ade = f"D{mu}"
        elif shape == "triple":
            if mu not in (6, 7, 8):
                raise ClassificationError(f"triple line with mu = {mu} is not ADE")
            ade = f"E{mu}"
        else:
            raise ClassificationError("zero cubic on the kernel plane: not ADE")
    else:
        raise ClassificationError("corank 3: not ADE")
    if orbit_size is None:
        orbit_size = ring.degree
    return SingularPointRecord(ring, tuple(point), mu, corank, shape, ade, orbit_size)


def split_branch(ring: ExtensionRing, coords: Point, event: SplitEvent) -> List[Branch]:
    """Map a branch into the two factor rings revealed by a SplitEvent."""
    out: List[Branch] = []
    for fac in (event.factor_a, event.factor_b):
        sub = ExtensionRing(fac, ring.gen)
        mapped = tuple(map_to_factor(c, sub) if isinstance(c, AlgebraicScalar) else c
                       for c in coords)
        if upoly_deg(fac) == 1:
            mapped = tuple(c.as_rational() if isinstance(c, AlgebraicScalar) else c
                           for c in mapped)
            out.append((RATIONAL_RING, mapped))
        else:
            out.append((sub, mapped))
    return out


def fiber_configuration(F: Polynomial) -> FiberConfiguration:
    """Locate and classify every singular point of F = 0."""
    queue: List[Branch] = list(singular_points(F))
    records: List[SingularPointRecord] = []
    while queue:
        ring, coords = queue.pop()
        try:
            rec = classify_point(F, coords, ring)
        except SplitEvent as e:
            queue.extend(split_branch(ring, coords, e))
            continue
        records.append(rec)
    labels: List[str] = []
    for rec in records:
        labels.extend([rec.ade_type] * rec.orbit_size)
    records.sort(key=lambda r: (r.ade_type, -r.orbit_size))
    return FiberConfiguration(records, canonical_type(labels))
