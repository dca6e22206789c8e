"""The six quotient deformation cases: fiber equations, symmetry actions,
quotient equations, discriminant strata with rational samplers, invariant
charts, and the fixed-point/regularity spot checks.

Stratum membership uses a finest-first ordered list: a parameter point
belongs to the first stratum whose equations vanish and whose inequations
do not.  Samplers emit exact rational points on each stratum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exact import RATIONAL_RING, AlgebraicScalar, Scalar, SplitEvent, upoly_deg
from .poly import Polynomial, align, parse
from .rootsys import CASE_IDS, CaseMeta, case_meta
from .singclass import (Branch, FiberConfiguration, classify_point,
                        fiber_configuration, singular_points, split_branch)
from .subsys import format_type

Subst = Dict[str, Polynomial]


@dataclass(frozen=True)
class Stratum:
    stratum_id: str
    description: str
    equations: Tuple[Polynomial, ...]
    inequations: Tuple[Polynomial, ...]
    quotient_config: str
    fiber_sing: Optional[Tuple[Tuple[str, int], ...]]  # (type, orbit size)
    fiber_fixed_smooth: Optional[int]
    sampler: Callable[[int], Optional[Dict[str, Fraction]]]
    max_samples: Optional[int] = None


@dataclass(frozen=True)
class CaseDescriptor:
    case_id: str
    meta: CaseMeta
    params: Tuple[str, ...]              # surviving flat coordinates t_i
    param_slots: Tuple[str, ...]         # display slots incl. frozen zeros
    weights: Dict[str, int]              # quasi-homogeneous weights
    fiber_vars: Tuple[str, str, str]
    fiber: Polynomial
    quotient_vars: Tuple[str, str, str]
    quotient: Polynomial
    omega_gens: Dict[str, Subst]         # generator name -> substitution map
    omega_order: int
    embedding: Dict[str, Polynomial]     # quotient var (or var+"^2") -> invariant
    strata: Tuple[Stratum, ...]          # finest first; last is "generic"
    fixed_locus: Subst                   # printed fixed locus, free symbol "s"
    fixed_locus_dim: int                 # 0 or 1
    b_fixed: Optional[Tuple[int, int, Polynomial]] = None  # (y sign, square sign, const)

    def stratum(self, stratum_id: str) -> Stratum:
        for s in self.strata:
            if s.stratum_id == stratum_id:
                return s
        raise ValueError(f"unknown stratum {stratum_id!r} in {self.case_id}")

    def group_elements(self) -> Dict[str, Subst]:
        """All elements of the symmetry group as substitution maps."""
        idmap = {v: Polynomial.var(v) for v in self.fiber_vars}
        elems = {"id": idmap}
        frontier = dict(self.omega_gens)
        while frontier:
            new: Dict[str, Subst] = {}
            for gname, g in frontier.items():
                for ename, e in list(elems.items()):
                    comp = compose_subst(g, e, self.fiber_vars)
                    if not any(subst_equal(comp, have, self.fiber_vars)
                               for have in elems.values()) and \
                       not any(subst_equal(comp, have, self.fiber_vars)
                               for have in new.values()):
                        name = gname + "*" + ename if ename != "id" else gname
                        new[name] = comp
            elems.update(new)
            frontier = new
        if len(elems) != self.omega_order:
            raise AssertionError(
                f"{self.case_id}: generated group of order {len(elems)}, "
                f"expected {self.omega_order}")
        return elems


def compose_subst(g: Subst, h: Subst, variables: Sequence[str]) -> Subst:
    """(g*h)(p) = g(h(p)): substitute h's expressions into g's."""
    return {v: g[v].subs(h) for v in variables}


def subst_equal(a: Subst, b: Subst, variables: Sequence[str]) -> bool:
    return all(a[v] == b[v] for v in variables)


# ---------------------------------------------------------------------------
# deterministic sweep helpers for samplers
# ---------------------------------------------------------------------------

def _sval(k: int) -> Fraction:
    """1, -1, 2, -2, 3, -3, ..."""
    n = k // 2 + 1
    return Fraction(n if k % 2 == 0 else -n)


def _pair(k: int) -> Tuple[Fraction, Fraction]:
    # Cantor-style diagonal over the sweep sequence
    d = 0
    while (d + 1) * (d + 2) // 2 <= k:
        d += 1
    i = k - d * (d + 1) // 2
    return _sval(i), _sval(d - i)


def _triple(k: int) -> Tuple[Fraction, Fraction, Fraction]:
    a, rest = _sval(k % 5), k // 5
    b, c = _pair(rest)
    return b, c, a


def _quad(k: int) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    a, b = _pair(k % 21)
    c, d = _pair(k // 21)
    return a, b, c, d


# ---------------------------------------------------------------------------
# case construction
# ---------------------------------------------------------------------------

_FIBERS = {
    "A3B2D4": "z^4 + t2*z^2 + t4 + t2^2/8 - x*y",
    "A5B3D5": "z^6 + t2*z^4 + (t4 + t2^2/4)*z^2 + t6 + t2*t4/6 + t2^3/108 - x*y",
    "D4C3D6": "x*y*(x+y) - t2/2*x*y - t4/4*x + 1/4*(t6 + t2*t4/6 + t2^3/108) - z^2",
    "D4G2E6": "x*y*(x+y) - t2/2*x*y + 1/4*(t6 + t2^3/108) - z^2",
    "D4G2E7": "x*y*(x+y) - t2/2*x*y + 1/4*(t6 + t2^3/108) - z^2",
    "E6F4E7": ("-1/4*x^4 + y^3 + z^2 - t2/4*x^2*y + 1/48*(t6 - t2^3/8)*x^2"
               " + 1/48*(-t8 + t6*t2/4 - t2^4/192)*y"
               " + 1/576*(t12 - t8*t2^2/8 - t6^2/8 + t6*t2^3/96)"),
}

_QUOTIENTS = {
    "A3B2D4": "Z*(X^2 - 4*Z^2) + W^2 - 4*t2*Z^2 - 4*(t4 + t2^2/8)*Z",
    "A5B3D5": ("Z*(X^2 + 4*Z^3) + W^2 + 4*t2*Z^3 + 4*(t4 + t2^2/4)*Z^2"
               " + 4*(t6 + t2*t4/6 + t2^3/108)*Z"),
    "D4C3D6": ("-1/64*X^5 + X*Y^2 - W^2 + t2/32*X^4"
               " + (-3/128*t2^2 - 1/32*t4)*X^3"
               " + (7/192*t2*t4 + 1/32*t6 + 7/864*t2^3)*X^2"
               " + (-1/32*t6*t2 - 5/384*t2^2*t4 - 35/27648*t2^4 - 1/64*t4^2)*X"
               " + (1/4*t6 + 1/24*t2*t4 + 1/432*t2^3)*Y"
               " + 1/128*t6*t2^2 + 1/32*t6*t4 + 11/6912*t2^3*t4"
               " + 1/192*t2*t4^2 + 1/13824*t2^5"),
    "D4G2E6": ("11664*X^4 - Y^3 - Z^2 - 324*t2*X^2*Y - (189*t2^3 + 5832*t6)*X^2"
               " + (81*t2*t6 + 15/16*t2^4)*Y + 11/32*t2^6 + 189/4*t2^3*t6"
               " + 729*t6^2"),
    "D4G2E7": ("X^3*Y - 11664*Y^3 + Z^2 + 324*t2*X*Y^2 + (189*t2^3 + 5832*t6)*Y^2"
               " - (15/16*t2^4 + 81*t2*t6)*X*Y"
               " - (11/32*t2^6 + 189/4*t2^3*t6 + 729*t6^2)*Y"),
    "E6F4E7": ("-1/4*X^3 + X*Y^3 + Z^2 - t2/4*X^2*Y + 1/48*(t6 - t2^3/8)*X^2"
               " + 1/48*(-t8 + t6*t2/4 - t2^4/192)*X*Y"
               " + 1/576*(t12 - t8*t2^2/8 - t6^2/8 + t6*t2^3/96)*X"),
}

# invariant charts: quotient generators as polynomials on the fiber
# (a key "V^2" gives the image of V squared, for generators rational only
# after squaring)
_EMBEDDINGS = {
    "A3B2D4": {"X": "x + y", "Z": "z^2", "W^2": "-(z*(x - y))^2"},
    "A5B3D5": {"X": "x - y", "Z": "z^2", "W^2": "-(z*(x + y))^2"},
    "D4C3D6": {"X": "x",
               "Y": "x*y + y^2 - t2*y/2 + x^2/8 - t2*x/8 + t2^2/32 - t4/8",
               "W^2": "1/4*(z*(x + 2*y - t2/2))^2"},
    "D4G2E6": {"X": "z",
               "Y": "12*(x^2 + x*y + y^2 - t2/2*(x + y) + t2^2/12) - 3/4*t2^2",
               "Z^2": "-432*(3*_v1 + 2*_v2)^2"},
    "D4G2E7": {"X": "12*(x^2 + x*y + y^2 - t2/2*(x + y) + t2^2/12) - 3/4*t2^2",
               "Y": "z^2",
               "Z^2": "-1728*(z*(_v2 + 3/2*_v1))^2"},
    "E6F4E7": {"X": "x^2", "Y": "y", "Z^2": "(x*z)^2"},
}

_OMEGA_GENS = {
    "A3B2D4": {"sigma": {"x": "y", "y": "x", "z": "-z"}},
    "A5B3D5": {"sigma": {"x": "-y", "y": "-x", "z": "-z"}},
    "D4C3D6": {"sigma": {"x": "x", "y": "-x - y + t2/2", "z": "-z"}},
    "D4G2E6": {"rho": {"x": "y", "y": "-x - y + t2/2", "z": "z"}},
    "D4G2E7": {"rho": {"x": "y", "y": "-x - y + t2/2", "z": "z"},
               "sigma": {"x": "x", "y": "-x - y + t2/2", "z": "-z"}},
    "E6F4E7": {"sigma": {"x": "-x", "y": "y", "z": "-z"}},
}

_OMEGA_ORDER = {"Z/2": 2, "Z/3": 3, "S3": 6}

_WEIGHTS = {
    "A3B2D4": {"x": 2, "y": 2, "z": 1, "t2": 2, "t4": 4,
               "X": 2, "W": 3, "Z": 2},
    "A5B3D5": {"x": 3, "y": 3, "z": 1, "t2": 2, "t4": 4, "t6": 6,
               "X": 3, "W": 4, "Z": 2},
    "D4C3D6": {"x": 2, "y": 2, "z": 3, "t2": 2, "t4": 4, "t6": 6,
               "X": 2, "Y": 4, "W": 5},
    "D4G2E6": {"x": 2, "y": 2, "z": 3, "t2": 2, "t6": 6,
               "X": 3, "Y": 4, "Z": 6},
    "D4G2E7": {"x": 2, "y": 2, "z": 3, "t2": 2, "t6": 6,
               "X": 4, "Y": 6, "Z": 9},
    "E6F4E7": {"x": 3, "y": 4, "z": 6, "t2": 2, "t6": 6, "t8": 8, "t12": 12,
               "X": 6, "Y": 4, "Z": 9},
}

_PARAMS = {
    "A3B2D4": (("t2", "t4"), ("t2", "0", "t4")),
    "A5B3D5": (("t2", "t4", "t6"), ("t2", "0", "t4", "0", "t6")),
    "D4C3D6": (("t2", "t4", "t6"), ("t2", "t4", "t6", "0")),
    "D4G2E6": (("t2", "t6"), ("t2", "0", "t6", "0")),
    "D4G2E7": (("t2", "t6"), ("t2", "0", "t6", "0")),
    "E6F4E7": (("t2", "t6", "t8", "t12"), ("t2", "0", "t6", "t8", "0", "t12")),
}

QUOT_VARS = {
    "A3B2D4": ("X", "W", "Z"), "A5B3D5": ("X", "W", "Z"),
    "D4C3D6": ("X", "Y", "W"), "D4G2E6": ("X", "Y", "Z"),
    "D4G2E7": ("X", "Y", "Z"), "E6F4E7": ("X", "Y", "Z"),
}

# fixed locus of the symmetry whose smooth points the configuration rows
# track: the full fixed locus for Z/2 and S3, the rho-fixed locus for Z/3
_FIXED_LOCUS = {
    "A3B2D4": ({"x": "s", "y": "s", "z": "0"}, 1),
    "A5B3D5": ({"x": "s", "y": "-s", "z": "0"}, 1),
    "D4C3D6": ({"x": "s", "y": "t2/4 - s/2", "z": "0"}, 1),
    "D4G2E6": ({"x": "t2/6", "y": "t2/6", "z": "s"}, 1),
    "D4G2E7": ({"x": "t2/6", "y": "t2/6", "z": "0"}, 0),
    "E6F4E7": ({"x": "0", "y": "s", "z": "0"}, 1),
}


def _parse_embedding(text: str) -> Polynomial:
    v1 = parse("(x - t2/6)*(y - t2/6)*(x + y - t2/3)")
    v2 = parse("-(x - t2/6)^3 - 3*(x - t2/6)^2*(y - t2/6) + (y - t2/6)^3")
    p = parse(text.replace("_v1", "V1").replace("_v2", "V2"))
    if "V1" in p.variables or "V2" in p.variables:
        p = p.subs({"V1": v1, "V2": v2})
    return p.drop_unused()


def _fr(x) -> Fraction:
    return Fraction(x)


def _build_strata(case_id: str) -> Tuple[Stratum, ...]:
    P = parse
    if case_id == "A3B2D4":
        return (
            Stratum("origin", "t2 = t4 = 0",
                    (P("t2"), P("t4")), (), "D4", (("A3", 1),), 0,
                    lambda k: {"t2": _fr(0), "t4": _fr(0)}, max_samples=1),
            Stratum("t4=-t2^2/8", "t4 = -t2^2/8, t2 != 0",
                    (P("t4 + t2^2/8"),), (P("t2"),), "A3", (("A1", 1),), 0,
                    lambda k: {"t2": _sval(k), "t4": -_sval(k) ** 2 / 8}),
            Stratum("t4=t2^2/8", "t4 = t2^2/8, t2 != 0",
                    (P("t4 - t2^2/8"),), (P("t2"),), "A1+A1+A1",
                    (("A1", 2),), 2,
                    lambda k: {"t2": _sval(k), "t4": _sval(k) ** 2 / 8}),
            Stratum("generic", "off the discriminant",
                    (), (P("t4 + t2^2/8"), P("t4 - t2^2/8")), "A1+A1", (), 2,
                    lambda k: dict(zip(("t2", "t4"), _pair(k)))),
        )
    if case_id == "A5B3D5":
        c3 = "t6 + t2*t4/6 + t2^3/108"
        h2 = ("-t2^6/432 + t2^4*t4/12 - t2^2*t4^2/4 - 9*t2*t4*t6 + 4*t4^3"
              " + 27*t6^2")

        def on_h1(t2, t4):
            return {"t2": t2, "t4": t4, "t6": -t2 * t4 / 6 - t2 ** 3 / 108}

        return (
            Stratum("origin", "t2 = t4 = t6 = 0",
                    (P("t2"), P("t4"), P("t6")), (), "D5", (("A5", 1),), 0,
                    lambda k: {"t2": _fr(0), "t4": _fr(0), "t6": _fr(0)},
                    max_samples=1),
            Stratum("H1,t4=-t2^2/4", "H1 with t4 = -t2^2/4 != 0",
                    (P(c3), P("t4 + t2^2/4")), (P("t2"),), "D4",
                    (("A3", 1),), 0,
                    lambda k: on_h1(_sval(k), -_sval(k) ** 2 / 4)),
            Stratum("H1,t4=0", "H1 with t4 = 0, t2 != 0",
                    (P(c3), P("t4")), (P("t2"),), "A3+A1",
                    (("A1", 1), ("A1", 2)), 0,
                    lambda k: on_h1(_sval(k), _fr(0))),
            Stratum("H2,t4=t2^2/12", "H2 with t4 = t2^2/12 != 0",
                    (P(h2), P("t4 - t2^2/12"), P("t6 - t2^3/72")),
                    (P("t2"),), "A2+A1+A1", (("A2", 2),), 2,
                    lambda k: {"t2": _sval(k), "t4": _sval(k) ** 2 / 12,
                               "t6": _sval(k) ** 3 / 72}),
            Stratum("H1", "H1, generic",
                    (P(c3),), (P("t4"), P("t4 + t2^2/4")), "A3",
                    (("A1", 1),), 0,
                    lambda k: on_h1(*_pair(k))),
            Stratum("H2", "H2 away from H1, generic",
                    (P(h2),), (P(c3), P("t4 - t2^2/12")), "A1+A1+A1",
                    (("A1", 2),), 2,
                    lambda k: {"t2": _sval(k), "t4": _fr(0),
                               "t6": _sval(k) ** 3 / 108}),
            Stratum("generic", "off the discriminant",
                    (), (P(c3), P(h2)), "A1+A1", (), 2,
                    lambda k: dict(zip(("t2", "t4", "t6"), _triple(k)))),
        )
    if case_id == "D4C3D6":
        c3 = "t6 + t2*t4/6 + t2^3/108"
        h = ("t2^6/6912 - t2^4*t4/192 + t2^2*t4^2/64 + 9/16*t2*t4*t6"
             " - t4^3/4 - 27/16*t6^2")

        def on_l(t2, t4):
            return {"t2": t2, "t4": t4, "t6": -t2 * t4 / 6 - t2 ** 3 / 108}

        return (
            Stratum("origin", "t2 = t4 = t6 = 0",
                    (P("t2"), P("t4"), P("t6")), (), "D6", (("D4", 1),), 0,
                    lambda k: {"t2": _fr(0), "t4": _fr(0), "t6": _fr(0)},
                    max_samples=1),
            Stratum("L,t4=-t2^2/4", "L with t4 = -t2^2/4 != 0",
                    (P(c3), P("t4 + t2^2/4")), (P("t2"),), "D4+A1",
                    (("A3", 1),), 1,
                    lambda k: on_l(_sval(k), -_sval(k) ** 2 / 4)),
            Stratum("H,t4=t2^2/12", "H with t4 = t2^2/12 != 0",
                    (P(h), P("t4 - t2^2/12"), P("t6 - t2^3/72")),
                    (P("t2"),), "A5", (("A2", 1),), 0,
                    lambda k: {"t2": _sval(k), "t4": _sval(k) ** 2 / 12,
                               "t6": _sval(k) ** 3 / 72}),
            Stratum("L&H", "L and H, t4 = 0, t2 != 0",
                    (P(c3), P("t4")), (P("t2"),), "A3+A1+A1",
                    (("A1", 2), ("A1", 1)), 1,
                    lambda k: on_l(_sval(k), _fr(0))),
            Stratum("L", "L, generic",
                    (P(c3),), (P("t4"), P("t4 + t2^2/4")), "A1+A1+A1+A1",
                    (("A1", 2),), 3,
                    lambda k: on_l(*_pair(k))),
            Stratum("H", "H away from L, generic",
                    (P(h),), (P(c3), P("t4 - t2^2/12")), "A3+A1",
                    (("A1", 1),), 1,
                    lambda k: {"t2": _sval(k), "t4": _fr(0),
                               "t6": _sval(k) ** 3 / 108}),
            Stratum("generic", "off the discriminant",
                    (), (P(c3), P(h)), "A1+A1+A1", (), 3,
                    lambda k: dict(zip(("t2", "t4", "t6"), _triple(k)))),
        )
    if case_id in ("D4G2E6", "D4G2E7"):
        e7 = case_id == "D4G2E7"
        confs = {"origin": "E7" if e7 else "E6",
                 "plus": "D5+A1" if e7 else "A5",
                 "minus": "A3+A2+A1" if e7 else "A2+A2+A1",
                 "generic": "A2+A1+A1+A1" if e7 else "A2+A2"}
        fixed = {"origin": 0, "plus": 0, "minus": 0 if e7 else 2,
                 "generic": 0 if e7 else 2}
        return (
            Stratum("origin", "t2 = t6 = 0",
                    (P("t2"), P("t6")), (), confs["origin"], (("D4", 1),),
                    fixed["origin"],
                    lambda k: {"t2": _fr(0), "t6": _fr(0)}, max_samples=1),
            Stratum("t6=t2^3/108", "t6 = t2^3/108 != 0",
                    (P("108*t6 - t2^3"),), (P("t2"),), confs["plus"],
                    (("A1", 1),), fixed["plus"],
                    lambda k: {"t2": _sval(k), "t6": _sval(k) ** 3 / 108}),
            Stratum("t6=-t2^3/108", "t6 = -t2^3/108 != 0",
                    (P("108*t6 + t2^3"),), (P("t2"),), confs["minus"],
                    (("A1", 3),), fixed["minus"],
                    lambda k: {"t2": _sval(k), "t6": -_sval(k) ** 3 / 108}),
            Stratum("generic", "off the discriminant",
                    (), (P("108*t6 - t2^3"), P("108*t6 + t2^3")),
                    confs["generic"], (), fixed["generic"],
                    lambda k: dict(zip(("t2", "t6"), _pair(k)))),
        )
    if case_id == "E6F4E7":
        return _build_f4_strata()
    raise ValueError(case_id)


_F4_H1_TEXT = ("t2^12 - 144*t2^9*t6 + 576*t2^8*t8 + 5184*t2^6*t6^2"
               " - 13824*t2^5*t6*t8 - 138240*t2^4*t8^2 - 69120*t2^3*t6^3"
               " - 331776*t12*t2^3*t6 + 829440*t2^2*t6^2*t8"
               " + 3981312*t12*t2^2*t8 - 5308416*t2*t6*t8^2 - 248832*t6^4"
               " + 3981312*t12*t6^2 + 7077888*t8^3 - 15925248*t12^2")
_F4_H2_TEXT = ("t2^12 + 144*t2^9*t6 + 576*t2^8*t8 + 5184*t2^6*t6^2"
               " + 13824*t2^5*t6*t8 - 138240*t2^4*t8^2 + 69120*t2^3*t6^3"
               " - 331776*t12*t2^3*t6 + 829440*t2^2*t6^2*t8"
               " - 3981312*t12*t2^2*t8 + 5308416*t2*t6*t8^2 - 248832*t6^4"
               " - 3981312*t12*t6^2 + 7077888*t8^3 - 15925248*t12^2")


def _f4_fiber_no_t12(x0: Fraction, y0: Fraction, t2: Fraction, t6: Fraction,
                     t8: Fraction) -> Fraction:
    return (-x0 ** 4 / 4 + y0 ** 3 - t2 / 4 * x0 ** 2 * y0
            + (t6 - t2 ** 3 / 8) / 48 * x0 ** 2
            + (-t8 + t6 * t2 / 4 - t2 ** 4 / 192) / 48 * y0
            + (-t8 * t2 ** 2 / 8 - t6 ** 2 / 8 + t6 * t2 ** 3 / 96) / 576)


def _f4_point(x0, y0, t2, t6, t8) -> Dict[str, Fraction]:
    t12 = -576 * _f4_fiber_no_t12(x0, y0, t2, t6, t8)
    return {"t2": t2, "t6": t6, "t8": t8, "t12": t12}


def _f4_h1_sample(k: int) -> Optional[Dict[str, Fraction]]:
    y1, t2, t6 = _triple(k)
    t8 = 144 * y1 ** 2 + t6 * t2 / 4 - t2 ** 4 / 192
    return _f4_point(_fr(0), y1, t2, t6, t8)


def _f4_h2_sample(k: int) -> Optional[Dict[str, Fraction]]:
    x0, t2, t6 = _triple(k)
    if t2 == 0 or x0 == 0:
        return None
    y0 = 2 * (-x0 ** 2 + (t6 - t2 ** 3 / 8) / 24) / t2
    t8 = 48 * (3 * y0 ** 2 - t2 * x0 ** 2 / 4) + t6 * t2 / 4 - t2 ** 4 / 192
    return _f4_point(x0, y0, t2, t6, t8)


def _f4_d4a1_sample(k: int) -> Optional[Dict[str, Fraction]]:
    t2, t6 = _pair(k)
    if t2 == 0:
        return None
    y0 = (t6 - t2 ** 3 / 8) / (12 * t2)
    t8 = 144 * y0 ** 2 + t6 * t2 / 4 - t2 ** 4 / 192
    return _f4_point(_fr(0), y0, t2, t6, t8)


def _f4_a5row_sample(k: int) -> Optional[Dict[str, Fraction]]:
    t2, t6 = _pair(k)
    t8 = -t2 ** 4 / 192 + t2 * t6 / 4
    return _f4_point(_fr(0), _fr(0), t2, t6, t8)


def _f4_a2a1_sample(k: int) -> Optional[Dict[str, Fraction]]:
    x0, t2 = _pair(k)
    if t2 == 0 or x0 == 0:
        return None
    t6 = 24 * x0 ** 2 - t2 ** 3 / 8
    t8 = -t2 ** 4 / 192 - t2 * t6 / 4
    return _f4_point(x0, -t2 ** 2 / 48, t2, t6, t8)


def _f4_h1h2_sample(k: int) -> Optional[Dict[str, Fraction]]:
    x0, d = _pair(k)
    if x0 == 0 or d == 0:
        return None
    y1 = (d - x0 ** 4 / (4 * d ** 2)) / 3
    y0 = y1 - d
    if y0 ** 2 == y1 ** 2:
        return None
    t2 = 12 * (y0 ** 2 - y1 ** 2) / x0 ** 2
    if t2 == 0:
        return None
    t6 = t2 ** 3 / 8 + 24 * (x0 ** 2 + t2 * y0 / 2)
    t8 = 144 * y1 ** 2 + t6 * t2 / 4 - t2 ** 4 / 192
    return _f4_point(_fr(0), y1, t2, t6, t8)


def _build_f4_strata() -> Tuple[Stratum, ...]:
    P = parse
    H1 = P(_F4_H1_TEXT)
    H2 = P(_F4_H2_TEXT)
    d4cond = P("96*t2^2*t8 - t2^6 - 96*t6^2")
    t8plus = P("192*t8 + t2^4 - 48*t2*t6")    # t8 = -t2^4/192 + t2*t6/4
    t8minus = P("192*t8 + t2^4 + 48*t2*t6")   # t8 = -t2^4/192 - t2*t6/4
    t2v = P("t2")

    def scale6(k):
        t2 = _sval(k)
        return t2

    return (
        Stratum("origin", "t = 0",
                (P("t2"), P("t6"), P("t8"), P("t12")), (), "E7", None, None,
                lambda k: {"t2": _fr(0), "t6": _fr(0), "t8": _fr(0),
                           "t12": _fr(0)}, max_samples=1),
        Stratum("D6", "H1, t8-pinch, t2^3 = 8 t6",
                (H1, d4cond, P("t2^3 - 8*t6")), (t2v,), "D6", None, None,
                lambda k: {"t2": (t2 := scale6(k)), "t6": t2 ** 3 / 8,
                           "t8": 5 * t2 ** 4 / 192, "t12": t2 ** 6 / 256}),
        Stratum("D5+A1", "H1, t8-pinch, t2^3 = -8 t6",
                (H1, d4cond, P("t2^3 + 8*t6")), (t2v,), "D5+A1", None, None,
                lambda k: {"t2": (t2 := scale6(k)), "t6": -t2 ** 3 / 8,
                           "t8": 5 * t2 ** 4 / 192, "t12": -t2 ** 6 / 256}),
        Stratum("A5+A1", "H1 & H2, t8 = -t2^4/192 + t2 t6/4",
                (H1, H2, t8plus), (t2v, P("t2^3 - 8*t6")), "A5+A1", None, None,
                lambda k: {"t2": (t2 := scale6(k)), "t6": t2 ** 3 / 72,
                           "t8": -t2 ** 4 / 576,
                           "t12": -7 * t2 ** 6 / 20736}),
        Stratum("A3+A2+A1", "H1 & H2, t8 = -t2^4/192 - t2 t6/4",
                (H1, H2, t8minus), (t2v, P("t2^3 + 8*t6")), "A3+A2+A1", None,
                None,
                lambda k: {"t2": (t2 := scale6(k)), "t6": -t2 ** 3 / 72,
                           "t8": -t2 ** 4 / 576,
                           "t12": 7 * t2 ** 6 / 20736}),
        # the t8-pinch component of H1 lies inside H1 & H2 as a set, so it
        # must precede the transverse H1 & H2 row
        Stratum("D4+A1", "H1, t8 = (t2^6 + 96 t6^2)/(96 t2^2)",
                (H1, d4cond), (t2v, P("t2^3 - 8*t6"), P("t2^3 + 8*t6")),
                "D4+A1", None, None, _f4_d4a1_sample),
        Stratum("H1&H2", "H1 & H2, generic",
                (H1, H2), (t2v, t8plus, t8minus, d4cond), "A3+A1+A1", None,
                None, _f4_h1h2_sample),
        Stratum("A5", "H1, t8 = -t2^4/192 + t2 t6/4",
                (H1, t8plus), (P("t2^3 - 8*t6"), H2), "A5", None, None,
                _f4_a5row_sample),
        Stratum("H1", "H1, generic",
                (H1,), (), "A3+A1", None, None, _f4_h1_sample),
        Stratum("A2+A1+A1+A1", "H2, t8 = -t2^4/192 - t2 t6/4",
                (H2, t8minus), (t2v, P("t2^3 + 8*t6")), "A2+A1+A1+A1", None,
                None, _f4_a2a1_sample),
        Stratum("H2", "H2, generic (t2 != 0)",
                (H2,), (t2v,), "A1+A1+A1+A1", None, None, _f4_h2_sample),
        Stratum("generic", "off the discriminant",
                (), (H1, H2), "A1+A1+A1", None, None,
                lambda k: dict(zip(("t2", "t6", "t8", "t12"), _quad(k)))),
    )


def _build_case(case_id: str) -> CaseDescriptor:
    meta = case_meta(case_id)
    params, slots = _PARAMS[case_id]
    fiber = parse(_FIBERS[case_id])
    quotient = parse(_QUOTIENTS[case_id])
    gens = {name: {v: parse(expr) for v, expr in sub.items()}
            for name, sub in _OMEGA_GENS[case_id].items()}
    emb = {k: _parse_embedding(v) for k, v in _EMBEDDINGS[case_id].items()}
    floc_raw, fdim = _FIXED_LOCUS[case_id]
    floc = {v: parse(expr) for v, expr in floc_raw.items()}
    b_fixed = None
    if case_id == "A3B2D4":
        b_fixed = (1, 1, parse("t4 + t2^2/8"))
    elif case_id == "A5B3D5":
        b_fixed = (-1, -1, parse("t6 + t2*t4/6 + t2^3/108"))
    return CaseDescriptor(
        case_id=case_id, meta=meta, params=params, param_slots=slots,
        weights=_WEIGHTS[case_id], fiber_vars=("x", "y", "z"), fiber=fiber,
        quotient_vars=QUOT_VARS[case_id], quotient=quotient,
        omega_gens=gens, omega_order=_OMEGA_ORDER[meta.omega],
        embedding=emb, strata=_build_strata(case_id),
        fixed_locus=floc, fixed_locus_dim=fdim, b_fixed=b_fixed)


_case_cache: Dict[str, CaseDescriptor] = {}


def descriptor(case_id: str) -> CaseDescriptor:
    if case_id not in _case_cache:
        if case_id not in CASE_IDS:
            raise ValueError(f"unknown case {case_id!r}")
        _case_cache[case_id] = _build_case(case_id)
    return _case_cache[case_id]


def all_descriptors() -> List[CaseDescriptor]:
    return [descriptor(cid) for cid in CASE_IDS]


# ---------------------------------------------------------------------------
# equivariance
# ---------------------------------------------------------------------------

def verify_equivariance(case_id: str) -> dict:
    """Check F(g(x,y,z)) = +-F for each generator, plus the group relations."""
    case = descriptor(case_id)
    report = {"case": case_id, "generators": {}, "relations": {}, "ok": True}
    for name, g in case.omega_gens.items():
        transformed = case.fiber.subs(g)
        if transformed == case.fiber:
            report["generators"][name] = "+1"
        elif transformed == -case.fiber:
            report["generators"][name] = "-1"
        else:
            report["generators"][name] = "broken"
            report["ok"] = False
    idmap = {v: Polynomial.var(v) for v in case.fiber_vars}

    def power(g, n):
        out = idmap
        for _ in range(n):
            out = compose_subst(g, out, case.fiber_vars)
        return out

    if case.meta.omega == "Z/2":
        s = case.omega_gens["sigma"]
        report["relations"]["sigma^2"] = subst_equal(power(s, 2), idmap,
                                                     case.fiber_vars)
    elif case.meta.omega == "Z/3":
        r = case.omega_gens["rho"]
        report["relations"]["rho^3"] = subst_equal(power(r, 3), idmap,
                                                   case.fiber_vars)
    else:
        r, s = case.omega_gens["rho"], case.omega_gens["sigma"]
        report["relations"]["rho^3"] = subst_equal(power(r, 3), idmap,
                                                   case.fiber_vars)
        report["relations"]["sigma^2"] = subst_equal(power(s, 2), idmap,
                                                     case.fiber_vars)
        srs = compose_subst(s, compose_subst(r, s, case.fiber_vars),
                            case.fiber_vars)
        rr = compose_subst(r, r, case.fiber_vars)
        report["relations"]["sigma*rho*sigma=rho^2"] = subst_equal(
            srs, rr, case.fiber_vars)
        # the full group must close with the right order
        case.group_elements()
    if not all(report["relations"].values()):
        report["ok"] = False
    return report


# ---------------------------------------------------------------------------
# strata: membership and sampling
# ---------------------------------------------------------------------------

def stratum_membership(case_id: str, t: Dict[str, Fraction]) -> str:
    """Finest stratum containing the parameter point (total function)."""
    case = descriptor(case_id)
    vals = {p: Fraction(t[p]) for p in case.params}
    for s in case.strata:
        if all(eq.evaluate(vals) == 0 for eq in s.equations) and \
           all(iq.evaluate(vals) != 0 for iq in s.inequations):
            return s.stratum_id
    return "generic"


def sample_stratum(case_id: str, stratum_id: str, count: int,
                   budget: int = 4000) -> List[Dict[str, Fraction]]:
    """Distinct rational points on the stratum and on no finer one."""
    case = descriptor(case_id)
    strat = case.stratum(stratum_id)
    if strat.max_samples is not None:
        count = min(count, strat.max_samples)
    out: List[Dict[str, Fraction]] = []
    seen = set()
    for k in range(budget):
        if len(out) >= count:
            break
        t = strat.sampler(k)
        if t is None:
            continue
        key = tuple(t[p] for p in case.params)
        if key in seen:
            continue
        seen.add(key)
        if stratum_membership(case_id, t) != stratum_id:
            continue
        out.append(t)
    if len(out) < count:
        raise ValueError(
            f"{case_id}/{stratum_id}: found {len(out)} of {count} samples")
    return out


def quotient_fiber(case_id: str, t: Dict[str, Fraction]) -> Polynomial:
    case = descriptor(case_id)
    return case.quotient.subs({p: Fraction(v) for p, v in t.items()}).drop_unused()


def fiber_at(case_id: str, t: Dict[str, Fraction]) -> Polynomial:
    case = descriptor(case_id)
    return case.fiber.subs({p: Fraction(v) for p, v in t.items()}).drop_unused()


def classify_quotient_fiber(case_id: str, t: Dict[str, Fraction]) -> FiberConfiguration:
    return fiber_configuration(quotient_fiber(case_id, t))


# ---------------------------------------------------------------------------
# the fiber side: orbits and fixed points
# ---------------------------------------------------------------------------

def _instantiate(sub: Subst, t: Dict[str, Fraction], variables) -> Subst:
    vals = {p: Fraction(v) for p, v in t.items()}
    return {v: sub[v].subs(vals) for v in variables}


def _apply_map(sub: Subst, variables, coords) -> Tuple[Scalar, ...]:
    binding = dict(zip(variables, coords))
    return tuple(sub[v].evaluate(binding) for v in variables)


def _fixed_part_degree(ring, coords, image) -> Tuple[int, "object"]:
    """gcd of the modulus with the coordinate differences: the fixed locus
    inside the branch.  Returns (degree of fixed part, fixed-part modulus)."""
    from .exact import upoly_gcd, upoly
    if ring is RATIONAL_RING or ring.degree == 1:
        same = all((a - b) == 0 for a, b in zip(coords, image))
        return (1, None) if same else (0, None)
    g = ring.modulus
    for a, b in zip(coords, image):
        d = a - b
        dv = d.value if isinstance(d, AlgebraicScalar) else upoly((d,))
        if not dv:
            continue
        g = upoly_gcd(g, dv)
        if upoly_deg(g) == 0:
            return 0, None
    return upoly_deg(g), g


def fiber_orbit_configuration(case_id: str, t: Dict[str, Fraction]):
    """Classified singular points of the covering fiber with their orbit
    sizes under the symmetry group, plus the smooth fixed-point count."""
    case = descriptor(case_id)
    F = fiber_at(case_id, t)
    elems = {name: _instantiate(sub, t, case.fiber_vars)
             for name, sub in case.group_elements().items()}
    nontrivial = {n: s for n, s in elems.items() if n != "id"}

    # refine branches so each has a constant stabilizer
    queue: List[Branch] = list(singular_points(F))
    refined: List[Tuple[Branch, int]] = []   # (branch, stabilizer order)
    guard = 0
    while queue:
        guard += 1
        if guard > 10000:
            raise AssertionError("orbit refinement did not terminate")
        ring, coords = queue.pop()
        stab = 1
        split_again = False
        for name, sub in nontrivial.items():
            image = _apply_map(sub, case.fiber_vars, coords)
            deg_fixed, gfix = _fixed_part_degree(ring, coords, image)
            if ring is RATIONAL_RING or ring.degree == 1:
                stab += 1 if deg_fixed else 0
                continue
            if deg_fixed == ring.degree:
                stab += 1
            elif deg_fixed > 0:
                # split into the fixed and the moving part
                from .exact import upoly_divmod, upoly_monic
                cof, rem = upoly_divmod(ring.modulus, gfix)
                assert not rem
                ev = SplitEvent(ring, tuple(gfix), upoly_monic(cof))
                queue.extend(split_branch(ring, coords, ev))
                split_again = True
                break
        if split_again:
            continue
        refined.append(((ring, coords), stab))

    order = case.omega_order
    records = []
    for (ring, coords), stab in refined:
        if order % stab != 0:
            raise AssertionError("stabilizer order does not divide the group order")
        orbit = order // stab
        sub_queue: List[Tuple[Branch, int]] = [((ring, coords), orbit)]
        while sub_queue:
            (r2, c2), orb = sub_queue.pop()
            try:
                rec = classify_point(F, c2, r2)
            except SplitEvent as e:
                sub_queue.extend(((b, orb) for b in split_branch(r2, c2, e)))
                continue
            records.append((rec, orb))

    # group points into orbits: #orbits with a given (type, orbit size)
    counts: Dict[Tuple[str, int], int] = {}
    for rec, orb in records:
        counts[(rec.ade_type, orb)] = counts.get((rec.ade_type, orb), 0) + rec.orbit_size
    orbits: Dict[Tuple[str, int], int] = {}
    for (typ, orb), npts in counts.items():
        if npts % orb != 0:
            raise AssertionError(f"{npts} points of type {typ} do not fill "
                                 f"orbits of size {orb}")
        orbits[(typ, orb)] = npts // orb

    smooth_fixed = _smooth_fixed_count(case, F, t, records)
    return orbits, smooth_fixed, records


def _smooth_fixed_count(case: CaseDescriptor, F: Polynomial,
                        t: Dict[str, Fraction], records) -> int:
    from .poly import gcd_univariate
    vals = {p: Fraction(v) for p, v in t.items()}
    locus = {v: case.fixed_locus[v].subs(vals) for v in case.fiber_vars}
    on_locus = F.subs(locus).drop_unused()
    if case.fixed_locus_dim == 0:
        total = 1 if on_locus.is_zero() else 0
    else:
        if on_locus.is_zero():
            raise AssertionError("fixed locus lies inside the fiber")
        if on_locus.is_constant():
            total = 0
        else:
            g = gcd_univariate(on_locus, on_locus.diff(on_locus.used_variables()[0]))
            total = on_locus.total_degree() - g.total_degree()
    # subtract singular points fixed by the symmetry the locus tracks
    fixed_sing = 0
    full = case.omega_order
    for rec, orb in records:
        stab = full // orb
        if stab == full:
            fixed_sing += rec.orbit_size
    return total - fixed_sing


def check_stratum_point(case_id: str, stratum_id: str,
                        t: Dict[str, Fraction]) -> dict:
    """Classify the quotient fiber (and, where catalogued, the covering
    fiber with orbits) at one parameter point and compare with the stratum."""
    case = descriptor(case_id)
    strat = case.stratum(stratum_id)
    result = {"case": case_id, "stratum": stratum_id,
              "t": {k: str(v) for k, v in t.items()}, "ok": True}
    conf = classify_quotient_fiber(case_id, t)
    result["quotient_config"] = conf.type_string()
    result["quotient_expected"] = strat.quotient_config
    if conf.type_string() != format_type(strat.quotient_config.split("+")):
        result["ok"] = False
    if strat.fiber_sing is not None:
        orbits, smooth_fixed, _ = fiber_orbit_configuration(case_id, t)
        expected: Dict[Tuple[str, int], int] = {}
        for typ, orb in strat.fiber_sing:
            expected[(typ, orb)] = expected.get((typ, orb), 0) + 1
        result["fiber_orbits"] = sorted(
            [f"{typ}(orbit {orb})x{n}" for (typ, orb), n in orbits.items()])
        result["fiber_fixed_smooth"] = smooth_fixed
        if orbits != expected or smooth_fixed != strat.fiber_fixed_smooth:
            result["ok"] = False
    return result


# ---------------------------------------------------------------------------
# fiber regularity spot check
# ---------------------------------------------------------------------------

def theorem_singular_spotcheck(case_id: str, count: int = 10,
                               seed: int = 0) -> dict:
    """Random rational parameter points: the quotient fiber is always
    singular; for the B-type cases the symmetric fixed point is verified
    on the covering fiber whenever its square is rational."""
    case = descriptor(case_id)
    rng = random.Random((seed, case_id).__repr__())
    report = {"case": case_id, "count": count, "ok": True, "failures": []}
    for i in range(count):
        t = {p: Fraction(rng.randint(-24, 24), rng.choice((1, 1, 2, 3)))
             for p in case.params}
        pts = singular_points(quotient_fiber(case_id, t))
        if not pts:
            report["ok"] = False
            report["failures"].append({k: str(v) for k, v in t.items()})
    if case.b_fixed is not None:
        ysign, sqsign, const = case.b_fixed
        for i in range(count):
            s = Fraction(rng.randint(1, 12), rng.choice((1, 2)))
            t = {p: Fraction(rng.randint(-12, 12)) for p in case.params}
            # adjust the last parameter so that the fixed point is rational:
            # sqsign * s^2 = const(t)
            last = case.params[-1]
            c0 = const.subs({last: Fraction(0)}).evaluate(
                {p: v for p, v in t.items() if p != last})
            c0 = c0 if isinstance(c0, Fraction) else Fraction(c0)
            clin = const.coefficients_in(last)
            lin = clin[1].constant_value() if len(clin) > 1 else Fraction(0)
            if lin == 0:
                raise AssertionError("fixed-point constant not linear in the last parameter")
            t[last] = (sqsign * s ** 2 - c0) / lin
            point = {"x": s, "y": ysign * s, "z": Fraction(0)}
            val = fiber_at(case_id, t).evaluate(point)
            if val != 0:
                report["ok"] = False
                report["failures"].append(
                    {"fixed_point": str(s), **{k: str(v) for k, v in t.items()}})
        report["fixed_point_checked"] = count
    return report


# ---------------------------------------------------------------------------
# invariant-theoretic re-derivation of the quotient charts
# ---------------------------------------------------------------------------

def _qdeg(case: CaseDescriptor, p: Polynomial, extra: Dict[str, int] = {}) -> int:
    """Quasi-degree of a quasi-homogeneous polynomial; -1 for the zero one."""
    w = {**case.weights, **extra}
    degs = {sum(w[v] * k for v, k in zip(p.variables, e)) for e in p.terms}
    if not degs:
        return -1
    if len(degs) > 1:
        raise ValueError(f"not quasi-homogeneous: {p}")
    return degs.pop()


def _t_monomials(case: CaseDescriptor, d: int) -> List[Polynomial]:
    """All parameter monomials of quasi-degree exactly d."""
    out = []

    def rec(i: int, left: int, acc: Polynomial):
        if i == len(case.params):
            if left == 0:
                out.append(acc)
            return
        p = case.params[i]
        w = case.weights[p]
        k = 0
        while k * w <= left:
            rec(i + 1, left - k * w, acc * Polynomial.var(p) ** k if k else acc)
            k += 1

    rec(0, d, Polynomial.constant(Fraction(1)))
    return out


def _coeff_vector(p: Polynomial, index: Dict, rows: List, variables) -> List[Fraction]:
    q = align(p, variables) if not p.is_zero() else p
    vec = [Fraction(0)] * len(rows)
    if p.is_zero():
        return vec
    for e, c in q.terms.items():
        if e not in index:
            index[e] = len(rows)
            rows.append(e)
            vec.append(Fraction(0))
        vec[index[e]] = c
    return vec


class _SpanSolver:
    """Incremental membership tests in a span of quasi-homogeneous polys."""

    def __init__(self, variables):
        self.variables = tuple(variables)
        self.index: Dict = {}
        self.rows: List = []
        self.basis: List[List[Fraction]] = []

    def _vec(self, p: Polynomial) -> List[Fraction]:
        v = _coeff_vector(p, self.index, self.rows, self.variables)
        n = len(self.rows)
        for b in self.basis:
            b.extend([Fraction(0)] * (n - len(b)))
        return v + [Fraction(0)] * (n - len(v))

    def add(self, p: Polynomial):
        self.basis.append(self._vec(p))

    def contains(self, p: Polynomial) -> bool:
        from .exact import solve_linear
        target = self._vec(p)
        if not self.basis:
            return not any(target)
        cols = list(zip(*self.basis))
        return solve_linear([list(r) for r in cols], list(target)) is not None


def _algebra_span(case: CaseDescriptor, gens: List[Polynomial], d: int,
                  include_ideal: bool = True) -> List[Polynomial]:
    """Spanning set of quasi-degree-d elements of the generated subalgebra
    (with parameter coefficients), plus fiber-ideal elements."""
    out: List[Polynomial] = []
    qdegs = [_qdeg(case, g) for g in gens]

    def rec(i: int, left: int, acc: Polynomial):
        if i == len(gens):
            for tm in _t_monomials(case, left):
                out.append(acc * tm)
            return
        k = 0
        cur = acc
        while k * qdegs[i] <= left:
            rec(i + 1, left - k * qdegs[i], cur)
            k += 1
            if k * qdegs[i] <= left:
                cur = cur * gens[i]

    rec(0, d, Polynomial.constant(Fraction(1)))
    if include_ideal:
        fdeg = _qdeg(case, case.fiber)
        if d >= fdeg:
            vars_all = tuple(case.fiber_vars) + tuple(case.params)
            for m in _xyz_t_monomials(case, d - fdeg):
                out.append(case.fiber * m)
    return out


def _xyz_t_monomials(case: CaseDescriptor, d: int) -> List[Polynomial]:
    out = []
    names = tuple(case.fiber_vars) + tuple(case.params)

    def rec(i: int, left: int, acc: Polynomial):
        if i == len(names):
            if left == 0:
                out.append(acc)
            return
        w = case.weights[names[i]]
        k = 0
        while k * w <= left:
            rec(i + 1, left - k * w,
                acc * Polynomial.var(names[i]) ** k if k else acc)
            k += 1

    rec(0, d, Polynomial.constant(Fraction(1)))
    return out


def _in_algebra(case: CaseDescriptor, gens: List[Polynomial],
                target: Polynomial) -> bool:
    d = _qdeg(case, target)
    if d < 0:
        return True
    solver = _SpanSolver(tuple(case.fiber_vars) + tuple(case.params))
    for b in _algebra_span(case, gens, d):
        solver.add(b)
    return solver.contains(target)


def _algebra_certificate(case: CaseDescriptor, gens: List[Polynomial],
                         target: Polynomial) -> Optional[Polynomial]:
    """Expression of target in the generators (modulo the fiber ideal), as a
    polynomial in the abstract symbols g1, g2, g3 with parameter
    coefficients; None if target is not in the algebra."""
    from .exact import solve_linear
    d = _qdeg(case, target)
    if d < 0:
        return Polynomial.zero()
    qdegs = [_qdeg(case, g) for g in gens]
    sym = [f"g{i+1}" for i in range(len(gens))]
    cands: List[Tuple[Polynomial, Optional[Polynomial]]] = []

    def rec(i: int, left: int, acc_p: Polynomial, acc_s: Polynomial):
        if i == len(gens):
            for tm in _t_monomials(case, left):
                cands.append((acc_p * tm, acc_s * tm))
            return
        k = 0
        cp, cs = acc_p, acc_s
        while k * qdegs[i] <= left:
            rec(i + 1, left - k * qdegs[i], cp, cs)
            k += 1
            if k * qdegs[i] <= left:
                cp = cp * gens[i]
                cs = cs * Polynomial.var(sym[i])

    rec(0, d, Polynomial.constant(Fraction(1)),
        Polynomial.constant(Fraction(1)))
    fdeg = _qdeg(case, case.fiber)
    if d >= fdeg:
        for m in _xyz_t_monomials(case, d - fdeg):
            cands.append((case.fiber * m, None))
    variables = tuple(case.fiber_vars) + tuple(case.params)
    index: Dict = {}
    rows: List = []
    vecs = [_coeff_vector(p, index, rows, variables) for p, _ in cands]
    tvec = _coeff_vector(target, index, rows, variables)
    n = len(rows)
    matrix = [[v[i] if i < len(v) else Fraction(0) for v in vecs]
              for i in range(n)]
    sol = solve_linear(matrix, [tvec[i] if i < len(tvec) else Fraction(0)
                                for i in range(n)])
    if sol is None:
        return None
    cert = Polynomial.zero()
    for c, (_, s) in zip(sol, cands):
        if c and s is not None:
            cert = cert + s * c
    return cert


def reynolds_average(case: CaseDescriptor, p: Polynomial) -> Polynomial:
    elems = case.group_elements()
    acc = Polynomial.zero()
    for sub in elems.values():
        acc = acc + p.subs(sub)
    return acc / Fraction(len(elems))


def derive_quotient_chart(case_id: str, degree_bound: int = 6) -> dict:
    """Re-derive the quotient chart by Reynolds averaging.

    Averages all coordinate monomials up to the degree bound, reduces the
    resulting invariants to a generating triple modulo the fiber ideal,
    derives the unique quasi-homogeneous relation among the generators, and
    checks that the catalogued chart generates the same invariant algebra
    and satisfies the catalogued quotient equation modulo the fiber ideal.
    """
    if degree_bound < 6:
        raise ValueError("degree bound must be at least 6")
    case = descriptor(case_id)
    invariants: List[Polynomial] = []
    seen = set()
    for d in range(1, degree_bound + 1):
        for mono in sorted(_monomials_of_degree(case.fiber_vars, d)):
            p = Polynomial(case.fiber_vars,
                           {mono: Fraction(1)})
            avg = reynolds_average(case, p).drop_unused()
            if avg.is_zero() or avg.used_variables() == () or \
                    not (set(avg.used_variables()) & set(case.fiber_vars)):
                continue
            key = repr(avg)
            if key not in seen:
                seen.add(key)
                invariants.append(avg)
    # greedy admission then minimization
    gens: List[Polynomial] = []
    for v in invariants:
        if not _in_algebra(case, gens, v):
            gens.append(v)
    changed = True
    while changed:
        changed = False
        for i in range(len(gens) - 1, -1, -1):
            rest = gens[:i] + gens[i + 1:]
            if _in_algebra(case, rest, gens[i]):
                gens.pop(i)
                changed = True
    report = {"case": case_id, "generators": [repr(g) for g in gens],
              "ok": True}
    if len(gens) != 3:
        report["ok"] = False
        report["error"] = f"{len(gens)} generators, expected a triple"
        return report
    # every averaged invariant reduces to the triple
    report["invariants_generated"] = all(_in_algebra(case, gens, v)
                                         for v in invariants)
    # the unique relation among the generators
    rel = _derive_relation(case, gens)
    report["relation"] = repr(rel) if rel is not None else None
    report["relation_found"] = rel is not None
    # certificates: the catalogued chart inside the derived algebra
    certs: Dict[str, Polynomial] = {}
    emb_ok = True
    for key, p in case.embedding.items():
        cert = _algebra_certificate(case, gens, p)
        if cert is None:
            emb_ok = False
        else:
            certs[key] = cert
    report["chart_in_derived_algebra"] = emb_ok
    # the catalogued equation, rewritten through the certificates, must be
    # an exact scalar multiple of the derived relation
    match = None
    if emb_ok and rel is not None:
        match = _match_relation(case, certs, rel)
    report["relation_scalar"] = str(match) if match is not None else None
    report["relation_matches_quotient"] = match is not None
    # ... and the chart satisfies the quotient equation modulo the fiber ideal
    report["quotient_identity"] = _quotient_identity_holds(case)
    report["ok"] = all((report["invariants_generated"], rel is not None,
                        emb_ok, match is not None,
                        report["quotient_identity"]))
    return report


def _match_relation(case: CaseDescriptor, certs: Dict[str, Polynomial],
                    rel: Polynomial) -> Optional[Fraction]:
    """Substitute the chart certificates into the catalogued quotient
    equation; the result must equal lambda * (derived relation) exactly.

    Certificates are only unique modulo the relation ideal; if a particular
    choice telescopes the equation to zero, the squared-generator
    certificate is shifted by the relation itself to expose the scalar.
    """
    squared = {k[:-2]: v for k, v in certs.items() if k.endswith("^2")}
    plain = {k: v for k, v in certs.items() if not k.endswith("^2")}
    r = rel.drop_unused()
    if r.is_zero():
        return None

    def substitute(shift: bool) -> Optional[Polynomial]:
        q = case.quotient
        for var, image in squared.items():
            if shift:
                image = image + r
            cs = q.coefficients_in(var)
            if any(i % 2 == 1 and not c.is_zero() for i, c in enumerate(cs)):
                return None
            acc = Polynomial.zero()
            for i, c in enumerate(cs):
                if not c.is_zero():
                    acc = acc + c * image ** (i // 2)
            q = acc
        return q.subs(plain).drop_unused()

    for shift in (False, True):
        q = substitute(shift)
        if q is None:
            return None
        if q.is_zero():
            continue
        lead = max(r.terms, key=lambda e: (sum(e), e))
        if set(q.used_variables()) - set(r.variables):
            return None
        q_al = align(q, r.variables)
        if lead not in q_al.terms:
            return None
        lam = q_al.terms[lead] * (1 / r.terms[lead])
        return lam if (r * lam) == q_al else None
    return None


def _monomials_of_degree(names, d):
    out = []

    def rec(prefix, remaining, left):
        if remaining == 1:
            out.append(prefix + (left,))
            return
        for k in range(left + 1):
            rec(prefix + (k,), remaining - 1, left - k)

    rec((), len(names), d)
    return out


def _derive_relation(case: CaseDescriptor, gens: List[Polynomial]):
    """The quasi-homogeneous relation among the generator triple, found by
    exact linear algebra at the quasi-degree of the quotient equation."""
    from .exact import nullspace
    qw = {v: case.weights[v] for v in case.quotient_vars}
    target = _qdeg(case, case.quotient, extra=qw)
    qdegs = [_qdeg(case, g) for g in gens]
    sym = ["g1", "g2", "g3"]
    candidates: List[Tuple[Polynomial, Optional[Polynomial]]] = []

    def rec(i: int, left: int, acc_poly: Polynomial, acc_sym: Polynomial):
        if i == len(gens):
            for tm in _t_monomials(case, left):
                candidates.append((acc_poly * tm, acc_sym * tm))
            return
        k = 0
        cp, cs = acc_poly, acc_sym
        while k * qdegs[i] <= left:
            rec(i + 1, left - k * qdegs[i], cp, cs)
            k += 1
            if k * qdegs[i] <= left:
                cp = cp * gens[i]
                cs = cs * Polynomial.var(sym[i])
    rec(0, target, Polynomial.constant(Fraction(1)),
        Polynomial.constant(Fraction(1)))
    fdeg = _qdeg(case, case.fiber)
    ideal_start = len(candidates)
    if target >= fdeg:
        for m in _xyz_t_monomials(case, target - fdeg):
            candidates.append((case.fiber * m, None))
    variables = tuple(case.fiber_vars) + tuple(case.params)
    index: Dict = {}
    rows: List = []
    vecs = [_coeff_vector(p, index, rows, variables) for p, _ in candidates]
    n = len(rows)
    matrix = [[v[i] if i < len(v) else Fraction(0) for v in vecs]
              for i in range(n)]
    kernel = nullspace(matrix)
    best = None
    for vec in kernel:
        if any(vec[i] != 0 for i in range(ideal_start)):
            rel = Polynomial.zero()
            for i in range(ideal_start):
                if vec[i]:
                    rel = rel + candidates[i][1] * vec[i]
            if not rel.is_zero():
                best = rel.drop_unused()
                break
    return best


def _quotient_identity_holds(case: CaseDescriptor) -> bool:
    """The catalogued quotient equation vanishes on the catalogued chart
    modulo the fiber ideal (exact divisibility by the fiber equation)."""
    from .poly import div_exact
    subst: Dict[str, Polynomial] = {}
    squared: Dict[str, Polynomial] = {}
    for key, p in case.embedding.items():
        if key.endswith("^2"):
            squared[key[:-2]] = p
        else:
            subst[key] = p
    q = case.quotient
    for var, image2 in squared.items():
        cs = q.coefficients_in(var)
        if any(i % 2 == 1 and not c.is_zero() for i, c in enumerate(cs)):
            return False
        acc = Polynomial.zero()
        for i, c in enumerate(cs):
            if not c.is_zero():
                acc = acc + c * image2 ** (i // 2)
        q = acc
    q = q.subs(subst)
    try:
        div_exact(q, case.fiber)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# catalogue files
# ---------------------------------------------------------------------------

def verify_catalogue() -> dict:
    """Cross-check the in-code case constants against the shipped data files.

    Each case ships a text file with the fiber and quotient equations, the
    symmetry action and the invariant chart in canonical polynomial syntax;
    a mismatch signals an accidental edit on either side.
    """
    import importlib.resources as res
    report = {"ok": True, "cases": {}}
    for case in all_descriptors():
        entries: Dict[str, Polynomial] = {}
        text = (res.files("singfold") / "data" / f"{case.case_id}.txt").read_text()
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, expr = line.partition("=")
            entries[key.strip()] = parse(expr)
        problems = []
        if entries.get("fiber") != case.fiber:
            problems.append("fiber")
        if entries.get("quotient") != case.quotient:
            problems.append("quotient")
        for name, sub in case.omega_gens.items():
            for v in case.fiber_vars:
                if entries.get(f"action.{name}.{v}") != sub[v]:
                    problems.append(f"action.{name}.{v}")
        for key, p in case.embedding.items():
            if entries.get(f"chart.{key}") != p:
                problems.append(f"chart.{key}")
        report["cases"][case.case_id] = problems
        if problems:
            report["ok"] = False
    return report
