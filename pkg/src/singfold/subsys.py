"""Vanishing-set sub-root systems containing a pinned set of simple roots.

A subsystem here is the full set of roots vanishing on some Cartan point
whose vanishing set contains the pinned roots; enumeration walks the lattice
of subspaces spanned by roots, and every subsystem carries an explicit
rational witness point that realizes it maximally (no other root vanishes).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .exact import nullspace, row_reduce
from .rootsys import (RootSystem, Vector, build_root_system, case_meta, dot,
                      root_from_coefficients, theta_roots, vneg,
                      vanishing_set)

TypeMultiset = Tuple[str, ...]


def canonical_type(labels: Sequence[str]) -> TypeMultiset:
    """Multiset of simple type labels, largest rank first."""
    def key(lab: str):
        return (-int(lab[1:]), lab[0])
    return tuple(sorted(labels, key=key))


def format_type(labels: Sequence[str]) -> str:
    return "+".join(canonical_type(labels))


def parse_type(text: str) -> TypeMultiset:
    return canonical_type(text.split("+"))


def type_rank(labels: Sequence[str]) -> int:
    return sum(int(lab[1:]) for lab in labels)


@dataclass(frozen=True)
class SubRootSystem:
    ambient: str
    roots: FrozenSet[Vector]
    witness: Vector
    type_label: TypeMultiset
    simple_system: Tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.simple_system)

    def type_string(self) -> str:
        return format_type(self.type_label)


# ---------------------------------------------------------------------------
# classification of a reflection-closed root set
# ---------------------------------------------------------------------------

def simple_system_of(rs: RootSystem, roots: FrozenSet[Vector]) -> Tuple[Vector, ...]:
    """Indecomposable positive roots of the subsystem, in ambient positivity."""
    pos = [r for r in roots if rs.is_positive(r)]
    posset = set(pos)
    simple = []
    for a in pos:
        decomposable = any((vsub := tuple(x - y for x, y in zip(a, b))) in posset
                           for b in pos if b != a)
        if not decomposable:
            simple.append(a)
    return tuple(sorted(simple))


def _component_label(rs: RootSystem, comp: List[Vector]) -> str:
    n = len(comp)
    adj = {i: [] for i in range(n)}
    edges = 0
    for i in range(n):
        for j in range(i + 1, n):
            if rs.inner(comp[i], comp[j]) != 0:
                adj[i].append(j)
                adj[j].append(i)
                edges += 1
    if edges != n - 1:
        raise ValueError("simple system is not a tree: not simply-laced ADE")
    degs = sorted(len(v) for v in adj.values())
    branch_nodes = [i for i in range(n) if len(adj[i]) >= 3]
    if any(len(adj[i]) > 3 for i in range(n)):
        raise ValueError("diagram has a node of degree > 3")
    if not branch_nodes:
        return f"A{n}"
    if len(branch_nodes) > 1:
        raise ValueError("diagram has two branch nodes")
    b = branch_nodes[0]
    lengths = []
    for start in adj[b]:
        ln = 1
        prev, cur = b, start
        while True:
            nxt = [k for k in adj[cur] if k != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            ln += 1
        lengths.append(ln)
    lengths.sort()
    if lengths[:2] == [1, 1]:
        return f"D{n}"
    if lengths == [1, 2, 2]:
        return "E6"
    if lengths == [1, 2, 3]:
        return "E7"
    if lengths == [1, 2, 4]:
        return "E8"
    raise ValueError(f"diagram shape {lengths} matches no ADE type")


def classify_subsystem(rs: RootSystem, roots: FrozenSet[Vector]) -> Tuple[TypeMultiset, Tuple[Vector, ...]]:
    """ADE type multiset of a reflection-closed root set, plus its simple system."""
    if not roots:
        return (), ()
    simple = simple_system_of(rs, roots)
    # connected components of the Dynkin graph
    n = len(simple)
    seen = [False] * n
    labels = []
    for i in range(n):
        if seen[i]:
            continue
        comp = [i]
        seen[i] = True
        stack = [i]
        while stack:
            a = stack.pop()
            for j in range(n):
                if not seen[j] and rs.inner(simple[a], simple[j]) != 0:
                    seen[j] = True
                    comp.append(j)
                    stack.append(j)
        labels.append(_component_label(rs, [simple[k] for k in comp]))
    if 2 * sum(_root_count(lab) for lab in labels) != len(roots):
        raise ValueError("root count disagrees with the identified type")
    return canonical_type(labels), simple


def _root_count(label: str) -> int:
    n = int(label[1:])
    if label[0] == "A":
        return n * (n + 1) // 2
    if label[0] == "D":
        return n * (n - 1)
    return {"E6": 36, "E7": 63, "E8": 120}[label]


def reflection_closure(rs: RootSystem, gens: Sequence[Vector]) -> FrozenSet[Vector]:
    """Smallest reflection-closed root set containing the generators."""
    roots = set()
    for g in gens:
        if g not in rs.roots:
            raise ValueError(f"{g} is not a root")
        roots.add(g)
        roots.add(vneg(g))
    frontier = list(roots)
    while frontier:
        nxt = []
        for b in list(roots):
            for a in frontier:
                r = tuple(x - rs.inner(b, a) * y for x, y in zip(b, a))
                if r not in roots:
                    roots.add(r)
                    nxt.append(r)
                r2 = tuple(x - rs.inner(a, b) * y for x, y in zip(a, b))
                if r2 not in roots:
                    roots.add(r2)
                    nxt.append(r2)
        frontier = nxt
    return frozenset(roots)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _rref_rows(vectors: Sequence[Vector]) -> Tuple[Vector, ...]:
    rank, rows, _ = row_reduce([list(v) for v in vectors])
    return tuple(tuple(r) for r in rows[:rank])


def _in_rowspace(rref: Tuple[Vector, ...], v: Vector) -> bool:
    r = list(v)
    for row in rref:
        p = next(i for i, c in enumerate(row) if c)
        if r[p]:
            f = r[p]
            r = [a - f * b for a, b in zip(r, row)]
    return not any(r)


def enumerate_subsystems(rs: RootSystem, theta: Sequence[Vector]) -> List[SubRootSystem]:
    """All vanishing-set subsystems containing theta, with rational witnesses.

    Walks subspaces spanned by theta plus roots, intersects each with the
    root set, and keeps the distinct intersections; each gets a witness on
    which exactly its roots vanish.
    """
    for t in theta:
        if t not in rs.roots:
            raise ValueError("theta must consist of roots")
    pos = list(rs.positive_roots)
    start = _rref_rows(theta)
    seen = {start}
    frontier = [start]
    subsystems: Dict[FrozenSet[Vector], Vector] = {}

    def record(space: Tuple[Vector, ...]):
        inside = frozenset(r for r in rs.roots if _in_rowspace(space, r))
        if inside not in subsystems:
            subsystems[inside] = _find_witness(rs, inside)

    record(start)
    while frontier:
        nxt = []
        for space in frontier:
            d = len(space)
            if d >= rs.rank:
                continue
            for r in pos:
                if _in_rowspace(space, r):
                    continue
                new = _rref_rows(list(space) + [r])
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
                    record(new)
        frontier = nxt

    out = []
    for roots, witness in subsystems.items():
        if vanishing_set(rs, witness) != roots:
            raise AssertionError("witness does not realize its subsystem maximally")
        label, simple = classify_subsystem(rs, roots)
        out.append(SubRootSystem(rs.label, roots, witness, label, simple))
    out.sort(key=lambda s: (s.rank, s.type_label, sorted(s.roots)))
    return out


def _cartan_constraints(rs: RootSystem) -> List[List[Fraction]]:
    if rs.label == "E7":
        row = [Fraction(0)] * 8
        row[6] = Fraction(1)
        row[7] = Fraction(1)
        return [row]
    return []


def _find_witness(rs: RootSystem, roots: FrozenSet[Vector]) -> Vector:
    """A rational Cartan point whose vanishing set is exactly ``roots``."""
    eqs = [list(r) for r in roots if rs.is_positive(r)]
    eqs.extend(_cartan_constraints(rs))
    if not eqs:
        eqs = [[Fraction(0)] * rs.dim]
    basis = nullspace(eqs)
    if not basis:
        h = tuple(Fraction(0) for _ in range(rs.dim))
        if vanishing_set(rs, h) != roots:
            raise AssertionError("zero witness does not realize the full system")
        return h
    # clear denominators for readability
    scaled = []
    for b in basis:
        den = 1
        for c in b:
            den = den * c.denominator // __import__("math").gcd(den, c.denominator)
        scaled.append(tuple(c * den for c in b))
    others = [r for r in rs.positive_roots if r not in roots]
    for radius in range(1, 40):
        for combo in itertools.product(range(-radius, radius + 1), repeat=len(scaled)):
            if max((abs(c) for c in combo), default=0) != radius:
                continue
            h = tuple(sum((Fraction(c) * b[i] for c, b in zip(combo, scaled)),
                          Fraction(0)) for i in range(rs.dim))
            if all(dot(r, h) != 0 for r in others):
                return h
    raise AssertionError("no witness found in search budget")


# ---------------------------------------------------------------------------
# catalogued realizations (generating sets, by simple-root coefficients)
# ---------------------------------------------------------------------------

def _e(n: int, i: int) -> Tuple[int, ...]:
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def _realization_table() -> Dict[str, List[Tuple[str, List[Tuple[Tuple[int, ...], ...]]]]]:
    e4 = lambda i: _e(4, i)
    e5 = lambda i: _e(5, i)
    e6 = lambda i: _e(6, i)
    e7 = lambda i: _e(7, i)
    d4 = [
        ("A1+A1", [(e4(3), e4(4))]),
        ("A1+A1+A1", [(e4(1), e4(3), e4(4)),
                      ((1, 2, 1, 1), e4(3), e4(4))]),
        ("A3", [(e4(2), e4(3), e4(4)),
                ((1, 1, 0, 0), e4(3), e4(4))]),
        ("D4", [(e4(1), e4(2), e4(3), e4(4))]),
    ]
    th5 = (e5(4), e5(5))
    d5 = [
        ("A1+A1", [th5]),
        ("A1+A1+A1", [
            (e5(1),) + th5,
            (e5(2),) + th5,
            ((1, 1, 0, 0, 0),) + th5,
            ((1, 2, 2, 1, 1),) + th5,
            ((1, 1, 2, 1, 1),) + th5,
            ((0, 1, 2, 1, 1),) + th5,
        ]),
        ("A3", [
            (e5(3),) + th5,
            ((0, 1, 1, 0, 0),) + th5,
            ((1, 1, 1, 0, 0),) + th5,
        ]),
        ("A2+A1+A1", [
            (e5(1), e5(2)) + th5,
            (e5(1), (0, 1, 2, 1, 1)) + th5,
            (e5(2), (1, 1, 2, 1, 1)) + th5,
            ((1, 1, 0, 0, 0), (0, 1, 2, 1, 1)) + th5,
        ]),
        ("A3+A1", [
            (e5(1), e5(3)) + th5,
            ((1, 1, 0, 0, 0), (0, 1, 1, 0, 0)) + th5,
            ((1, 2, 2, 1, 1), e5(3)) + th5,
            ((1, 1, 2, 1, 1), (0, 1, 1, 0, 0)) + th5,
            ((1, 1, 1, 0, 0), e5(2)) + th5,
            ((1, 1, 1, 0, 0), (0, 1, 2, 1, 1)) + th5,
        ]),
        ("D4", [
            (e5(2), e5(3)) + th5,
            ((1, 1, 0, 0, 0), e5(3)) + th5,
            (e5(1), (0, 1, 1, 0, 0)) + th5,
        ]),
        ("D5", [(e5(1), e5(2), e5(3), e5(4), e5(5))]),
    ]
    th6 = (e6(1), e6(3), e6(5))
    d6 = [
        ("A1+A1+A1", [th6]),
        ("A1+A1+A1+A1", [
            th6 + (e6(6),),
            th6 + ((1, 2, 2, 2, 1, 1),),
            th6 + ((0, 0, 1, 2, 1, 1),),
        ]),
        ("A3+A1", [
            th6 + (e6(2),),
            th6 + (e6(4),),
            th6 + ((0, 1, 1, 1, 0, 0),),
            th6 + ((0, 1, 1, 1, 0, 1),),
            th6 + ((0, 0, 0, 1, 0, 1),),
            th6 + ((0, 1, 1, 2, 1, 1),),
        ]),
        ("A3+A1+A1", [
            th6 + (e6(2), e6(6)),
            th6 + (e6(4), (1, 2, 2, 2, 1, 1)),
            th6 + ((0, 1, 1, 1, 0, 0), (0, 0, 1, 2, 1, 1)),
            th6 + ((0, 1, 1, 1, 0, 1), (0, 0, 1, 2, 1, 1)),
            th6 + ((0, 0, 0, 1, 0, 1), (1, 2, 2, 2, 1, 1)),
            th6 + ((0, 1, 1, 2, 1, 1), e6(6)),
        ]),
        ("D4+A1", [
            th6 + (e6(2), (0, 0, 1, 2, 1, 1)),
            th6 + (e6(4), e6(6)),
            th6 + ((0, 1, 1, 1, 0, 0), e6(6)),
        ]),
        ("A5", [
            th6 + (e6(2), e6(4)),
            th6 + ((0, 1, 1, 1, 0, 1), e6(4)),
            th6 + (e6(2), (0, 0, 0, 1, 0, 1)),
            th6 + ((0, 0, 0, 1, 0, 1), (0, 1, 1, 1, 0, 0)),
        ]),
        ("D6", [tuple(e6(i) for i in range(1, 7))]),
    ]
    thE6 = (e6(1), e6(3), e6(5), e6(6))
    e6tab = [
        ("A2+A2", [thE6]),
        ("A2+A2+A1", [
            thE6 + (e6(2),),
            thE6 + ((1, 1, 2, 3, 2, 1),),
            thE6 + ((1, 2, 2, 3, 2, 1),),
        ]),
        ("A5", [
            thE6 + (e6(4),),
            thE6 + ((0, 1, 0, 1, 0, 0),),
            thE6 + ((0, 1, 1, 2, 1, 0),),
        ]),
        ("E6", [tuple(e6(i) for i in range(1, 7))]),
    ]
    thE7 = (e7(1), e7(2), e7(3), e7(5), e7(7))
    e7tab = [
        ("A2+A1+A1+A1", [thE7]),
        ("A3+A2+A1", [
            thE7 + (e7(6),),
            thE7 + ((1, 1, 2, 3, 2, 2, 1),),
        ]),
        ("D5+A1", [
            thE7 + (e7(4),),
            thE7 + ((0, 0, 0, 1, 1, 1, 0),),
            thE7 + ((0, 1, 1, 2, 1, 1, 0),),
        ]),
        ("E7", [tuple(e7(i) for i in range(1, 8))]),
    ]
    return {"A3B2D4": d4, "A5B3D5": d5, "D4C3D6": d6,
            "D4G2E6": e6tab, "D4G2E7": e7tab, "E6F4E7": []}


REALIZATIONS = _realization_table()

# total number of vanishing-set subsystems containing theta, per case
EXPECTED_SUBSYSTEM_COUNTS = {
    "A3B2D4": 6, "A5B3D5": 24, "D4C3D6": 24,
    "D4G2E6": 8, "D4G2E7": 8, "E6F4E7": None,
}


@dataclass
class MatchReport:
    case_id: str
    ok: bool
    enumerated: List[SubRootSystem]
    counts: Dict[str, int]
    matches: List[dict]
    errors: List[str]

    def to_json(self) -> dict:
        return {
            "case": self.case_id,
            "ok": self.ok,
            "subsystem_count": len(self.enumerated),
            "counts_by_type": dict(sorted(self.counts.items())),
            "matches": self.matches,
            "errors": self.errors,
        }


_subsystem_cache: Dict[str, List[SubRootSystem]] = {}


def subsystems_for_case(case_id: str) -> List[SubRootSystem]:
    if case_id not in _subsystem_cache:
        meta = case_meta(case_id)
        rs = build_root_system(meta.quotient_type)
        _subsystem_cache[case_id] = enumerate_subsystems(
            rs, theta_roots(case_id))
    return _subsystem_cache[case_id]


def match_realizations(case_id: str) -> MatchReport:
    """Close each catalogued generating set and locate it in the enumeration.

    For E6F4E7 no generating sets are catalogued; the report carries the
    enumeration census only.
    """
    meta = case_meta(case_id)
    rs = build_root_system(meta.quotient_type)
    subs = subsystems_for_case(case_id)
    counts: Dict[str, int] = {}
    for s in subs:
        counts[s.type_string()] = counts.get(s.type_string(), 0) + 1
    matches = []
    errors = []
    used = set()
    for type_str, gen_sets in REALIZATIONS[case_id]:
        for gens in gen_sets:
            vecs = [root_from_coefficients(rs, g) for g in gens]
            closure = reflection_closure(rs, vecs)
            hits = [i for i, s in enumerate(subs) if s.roots == closure]
            entry = {"type": type_str, "generators": [list(g) for g in gens]}
            if len(hits) != 1:
                errors.append(f"{type_str} realization {gens} matched {len(hits)} subsystems")
                entry["match"] = None
            else:
                i = hits[0]
                if i in used:
                    errors.append(f"duplicate match for {gens}")
                used.add(i)
                entry["match"] = i
                if subs[i].type_string() != format_type(parse_type(type_str)):
                    errors.append(
                        f"type mismatch: catalogued {type_str}, enumerated {subs[i].type_string()}")
            matches.append(entry)
    expected = EXPECTED_SUBSYSTEM_COUNTS[case_id]
    if expected is not None and len(subs) != expected:
        errors.append(f"enumerated {len(subs)} subsystems, expected {expected}")
    return MatchReport(case_id, not errors, subs, counts, matches, errors)
