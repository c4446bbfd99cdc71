"""Affine and linear subspace arrangements in C^n (or R^n).

The formality model of the complement places OS_x in total degree r(x)
with zero differential; products between x and y survive only when the
intersection is transversal.  For hyperplanes this recovers the
Orlik-Solomon ring, and over the reals the sum of |mu| counts regions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InvariantViolation, SchemaError
from .exactla import RatMatrix, kernel_basis, rank, to_fraction
from .mvss import CohomologyRing, E1Algebra, build_e1_lattice, cohomology
from .oscomplex import os_algebra
from .poset import GradedPoset, intersection_poset
from .supportcoh import affine_support

__all__ = [
    "AtomCodimViolation",
    "CodimMismatch",
    "MAX_SUBSPACES",
    "SubspaceArrangement",
    "formality_model",
    "zaslavsky_regions",
    "complex_hyperplane_ring",
    "os_dims_by_rank",
    "whitney_numbers",
    "from_coordinates",
    "from_json",
    "generic_lines",
    "lines_with_triple_point",
]

MAX_SUBSPACES = 12


class AtomCodimViolation(InvariantViolation):
    pass


class CodimMismatch(InvariantViolation):
    pass


@dataclass(frozen=True, eq=False)
class SubspaceArrangement:
    n: int
    poset: GradedPoset
    codim: Mapping

    def __post_init__(self):
        L = self.poset
        for x in L.elements:
            c = self.codim.get(x, L.rank[x])
            if c != L.rank[x]:
                raise CodimMismatch(f"{x}: rank {L.rank[x]} but codimension {c}")
        if L.height > self.n:
            raise CodimMismatch(f"rank {L.height} exceeds the ambient dimension {self.n}")
        L.require_locally_geometric()

    @classmethod
    def from_poset(cls, n: int, poset: GradedPoset, codim: Mapping | None = None):
        return cls(n, poset, dict(codim) if codim else {x: poset.rank[x] for x in poset.elements})

    def to_json(self) -> dict:
        return {"ambient_dim": self.n, "poset": self.poset.to_json(),
                "codim": {x: self.codim[x] for x in self.poset.elements}}


def formality_model(arr: SubspaceArrangement) -> E1Algebra:
    """E1 with affine supports; its differential vanishes identically."""
    L = arr.poset
    e1 = build_e1_lattice(L, os_algebra(L), affine_support(arr.n, L))
    if any(e1.diff):
        raise InvariantViolation("formality model has a nonzero differential")
    return e1


def os_dims_by_rank(L: GradedPoset) -> list:
    """[sum_{r(x)=k} dim OS_x for k = 0..height], straight from the OS algebra."""
    os = os_algebra(L)
    out = [0] * (L.height + 1)
    for x in L.elements:
        out[L.rank[x]] += os.dim(x)
    return out


def whitney_numbers(L: GradedPoset) -> list:
    """Coefficients of sum_x mu(0, x) t^r(x)."""
    out = [0] * (L.height + 1)
    for x in L.elements:
        out[L.rank[x]] += L.moebius(x)
    return out


def zaslavsky_regions(L: GradedPoset) -> int:
    return sum(abs(L.moebius(x)) for x in L.elements)


def complex_hyperplane_ring(arr: SubspaceArrangement) -> CohomologyRing:
    L = arr.poset
    bad = [a for a in L.atoms if arr.codim[a] != 1]
    if bad:
        raise AtomCodimViolation(f"atoms {bad} are not hyperplanes")
    ring = cohomology(formality_model(arr))
    if ring.betti_list(L.height + 1) != os_dims_by_rank(L):
        raise InvariantViolation("cohomology disagrees with the Orlik-Solomon dimensions")
    return ring


# ---------------------------------------------------------------------------
# coordinate front-end

def _equations(n: int, point, directions) -> tuple:
    """Rows (a, b) with a.x = b cutting out point + span(directions)."""
    D = RatMatrix.from_rows(directions, n) if directions else RatMatrix.zeros(0, n)
    normals = kernel_basis(D).basis          # vectors orthogonal to every direction
    return [(v, sum(c * point[k] for k, c in v.items())) for v in normals]


def _canonical(n: int, eqs: list):
    """Reduced row echelon form of the augmented system, or None if inconsistent."""
    rows = [dict(a) | ({n: b} if b else {}) for a, b in eqs]
    rows = [{k: Fraction(c) for k, c in r.items() if c} for r in rows]
    pivots: list = []
    done: list = []
    for r in rows:
        for pc, pr in zip(pivots, done):
            if pc in r:
                f = r[pc]
                for k, c in pr.items():
                    r[k] = r.get(k, 0) - f * c
                r = {k: c for k, c in r.items() if c}
        if not r:
            continue
        pc = min(r)
        if pc == n:
            return None
        f = r[pc]
        r = {k: c / f for k, c in r.items()}
        for i, pr in enumerate(done):
            if pc in pr:
                g = pr[pc]
                for k, c in r.items():
                    pr[k] = pr.get(k, 0) - g * c
                done[i] = {k: c for k, c in pr.items() if c}
        pivots.append(pc)
        done.append(r)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return tuple(tuple(sorted(done[i].items())) for i in order)


def from_coordinates(ambient_dim: int, subspaces: Sequence) -> SubspaceArrangement:
    """Intersection poset of affine subspaces given by a point and direction vectors.

    Elements are named by the set of subspaces containing the intersection,
    e.g. ``{1,3}``; the ambient space is ``{}``.
    """
    n = int(ambient_dim)
    if len(subspaces) > MAX_SUBSPACES:
        raise SchemaError(f"at most {MAX_SUBSPACES} subspaces are supported")
    systems = []
    for i, s in enumerate(subspaces, 1):
        try:
            pt = [to_fraction(c) for c in s["basis_point"]]
            dirs = [[to_fraction(c) for c in v] for v in s.get("directions", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"subspace {i}: {exc}") from exc
        if len(pt) != n or any(len(v) != n for v in dirs):
            raise SchemaError(f"subspace {i}: coordinates must have length {n}")
        if rank(RatMatrix.from_rows(dirs, n) if dirs else RatMatrix.zeros(0, n)) == n:
            raise SchemaError(f"subspace {i} is the whole space")
        systems.append(_equations(n, pt, dirs))
    names = [str(i) for i in range(1, len(systems) + 1)]
    forms: dict = {}
    for k in range(len(names) + 1):
        for sub in itertools.combinations(range(len(names)), k):
            eqs = [e for i in sub for e in systems[i]]
            form = _canonical(n, eqs)
            if form is not None:
                forms[frozenset(sub)] = form
    members: dict = {}
    for sub, form in forms.items():
        members.setdefault(form, set()).update(sub)
    label = {form: "{" + ",".join(names[i] for i in sorted(s)) + "}" for form, s in members.items()}
    strata = {frozenset(names[i] for i in sub): label[f] for sub, f in forms.items()}
    for sub in itertools.chain.from_iterable(itertools.combinations(names, k) for k in range(len(names) + 1)):
        strata.setdefault(frozenset(sub), None)
    if len({label[forms[frozenset([i])]] for i in range(len(names))}) != len(names):
        raise SchemaError("two subspaces coincide")
    try:
        L = intersection_poset(strata, atoms=names)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    codim = {label[f]: len(f) for f in members}
    return SubspaceArrangement(n, L, codim)


def from_json(obj: Mapping) -> SubspaceArrangement:
    if "subspaces" in obj:
        return from_coordinates(obj["ambient_dim"], obj["subspaces"])
    try:
        L = GradedPoset.from_json(obj["poset"])
        n = int(obj.get("ambient_dim", L.height))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad arrangement: {exc}") from exc
    return SubspaceArrangement.from_poset(n, L, obj.get("codim"))


# ---------------------------------------------------------------------------
# a few real line arrangements in the plane

def _line(a, b, c) -> dict:
    """The line a x + b y = c as a point and a direction."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    pt = [c / a, Fraction(0)] if a else [Fraction(0), c / b]
    return {"basis_point": pt, "directions": [[-b, a]]}


def generic_lines(k: int) -> list:
    """k lines in general position: tangent-like lines x*i + y = i^2."""
    return [_line(i, 1, i * i) for i in range(1, k + 1)]


def lines_with_triple_point(k: int) -> list:
    """Three lines through the origin plus k - 3 generic lines."""
    if k < 3:
        raise ValueError("need at least three lines")
    base = [_line(1, 0, 0), _line(0, 1, 0), _line(1, -1, 0)]
    extra = [_line(i, 1, i * i + 7) for i in range(2, k - 1)]
    return base + extra
