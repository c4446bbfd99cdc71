"""Finite graded atomic posets and the lattices used to index arrangements.

Elements are strings.  Constructors attach a structured value to each element
in ``GradedPoset.data`` (a frozenset of atoms, a partition into blocks, ...),
but all order-theoretic queries only look at the ids and the cover relation.

The order of ``GradedPoset.atoms`` is significant: it fixes the sign
convention of every Grassmann monomial built on top of the poset.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from .errors import SchemaError

__all__ = [
    "UnknownElement",
    "NotGradable",
    "NotAtomic",
    "NotLocallyGeometric",
    "GradedPoset",
    "CubicalIndex",
    "Graph",
    "boolean_lattice",
    "partition_lattice",
    "intersection_poset",
    "cubical_lattice",
    "natural_key",
]


class UnknownElement(KeyError):
    pass


class NotGradable(ValueError):
    pass


class NotAtomic(ValueError):
    pass


class NotLocallyGeometric(ValueError):
    pass


def natural_key(s: str):
    """Sort key treating digit runs as integers ("{2}" < "{10}")."""
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s))


@dataclass(frozen=True, eq=False)
class GradedPoset:
    elements: tuple
    covers: frozenset
    rank: Mapping[str, int]
    atoms: tuple
    data: Mapping[str, Hashable] = field(default_factory=dict)

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_covers(cls, elements: Iterable[str], covers: Iterable[tuple],
                    atoms: Iterable[str] | None = None, data: Mapping | None = None,
                    rank: Mapping[str, int] | None = None) -> "GradedPoset":
        """Build a poset from its Hasse diagram, computing the rank function.

        Raises :class:`NotGradable` if two saturated chains from the bottom to
        some element have different lengths.
        """
        elements = list(dict.fromkeys(elements))
        eset = set(elements)
        covers = {(str(a), str(b)) for a, b in covers}
        for a, b in covers:
            if a not in eset or b not in eset:
                raise UnknownElement(a if a not in eset else b)
        has_lower = {b for _, b in covers}
        bottoms = [e for e in elements if e not in has_lower]
        if len(bottoms) != 1:
            raise NotGradable(f"expected a unique minimal element, found {bottoms}")
        bottom = bottoms[0]
        up: dict = {e: [] for e in elements}
        for a, b in covers:
            up[a].append(b)
        r = {bottom: 0}
        queue = deque([bottom])
        while queue:
            x = queue.popleft()
            for y in up[x]:
                if y in r:
                    if r[y] != r[x] + 1:
                        raise NotGradable(f"element {y!r} reached by chains of lengths "
                                          f"{r[y]} and {r[x] + 1}")
                else:
                    r[y] = r[x] + 1
                    queue.append(y)
        # a second pass catches covers whose lower end was ranked later
        for a, b in covers:
            if r.get(b) != r.get(a, -10) + 1:
                raise NotGradable(f"cover {a!r} <: {b!r} does not raise the rank by one")
        if len(r) != len(elements):
            missing = sorted(set(elements) - set(r))
            raise NotGradable(f"elements not reachable from the bottom: {missing}")
        if rank is not None and dict(rank) != r:
            raise NotGradable("supplied rank function is inconsistent with the covers")
        if atoms is None:
            atoms = sorted((e for e in elements if r[e] == 1), key=natural_key)
        atoms = tuple(atoms)
        if set(atoms) != {e for e in elements if r[e] == 1}:
            raise ValueError("atoms must be exactly the rank-one elements")
        order = sorted(elements, key=lambda e: (r[e], natural_key(e)))
        return cls(tuple(order), frozenset(covers), dict(r), atoms, dict(data or {}))

    # -- basic structure ------------------------------------------------------
    def __contains__(self, x) -> bool:
        return x in self.rank

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def _check(self, *xs):
        for x in xs:
            if x not in self.rank:
                raise UnknownElement(x)

    @property
    def bottom(self) -> str:
        return self.elements[0]

    @property
    def height(self) -> int:
        return max(self.rank.values()) if self.rank else 0

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def atom_index(self) -> dict:
        return {a: i for i, a in enumerate(self.atoms)}

    @cached_property
    def lower_covers_map(self) -> dict:
        out = {x: [] for x in self.elements}
        for a, b in self.covers:
            out[b].append(a)
        return {x: tuple(sorted(v, key=self.index.__getitem__)) for x, v in out.items()}

    @cached_property
    def upper_covers_map(self) -> dict:
        out = {x: [] for x in self.elements}
        for a, b in self.covers:
            out[a].append(b)
        return {x: tuple(sorted(v, key=self.index.__getitem__)) for x, v in out.items()}

    def lower_covers(self, x) -> tuple:
        self._check(x)
        return self.lower_covers_map[x]

    def upper_covers(self, x) -> tuple:
        self._check(x)
        return self.upper_covers_map[x]

    @cached_property
    def down_sets(self) -> dict:
        out: dict = {}
        for x in self.elements:  # rank order
            s = {x}
            for y in self.lower_covers_map[x]:
                s |= out[y]
            out[x] = frozenset(s)
        return out

    @cached_property
    def up_sets(self) -> dict:
        out: dict = {}
        for x in reversed(self.elements):
            s = {x}
            for y in self.upper_covers_map[x]:
                s |= out[y]
            out[x] = frozenset(s)
        return out

    def leq(self, a, b) -> bool:
        self._check(a, b)
        return a in self.down_sets[b]

    def interval(self, a, b) -> tuple:
        self._check(a, b)
        s = self.up_sets[a] & self.down_sets[b]
        return tuple(x for x in self.elements if x in s)

    @cached_property
    def atoms_below_map(self) -> dict:
        aset = set(self.atoms)
        return {x: tuple(a for a in self.atoms if a in self.down_sets[x] and a in aset)
                for x in self.elements}

    def atoms_below(self, x) -> tuple:
        self._check(x)
        return self.atoms_below_map[x]

    # -- bounds ---------------------------------------------------------------
    def _minimal(self, s) -> list:
        return [t for t in self.elements if t in s
                and not any(u != t and u in s for u in self.down_sets[t])]

    def min_upper_bounds(self, s: Iterable) -> frozenset:
        s = list(s)
        self._check(*s)
        ub = set(self.elements)
        for a in s:
            ub &= self.up_sets[a]
        return frozenset(self._minimal(ub))

    def independent_targets(self, x, y) -> tuple:
        """Minimal upper bounds t of {x, y} with r(t) = r(x) + r(y), in element order."""
        cache = self._target_cache
        if (x, y) not in cache:
            rt = self.rank[x] + self.rank[y]
            cache[(x, y)] = tuple(
                t for t in sorted(self.min_upper_bounds((x, y)), key=self.index.__getitem__)
                if self.rank[t] == rt)
        return cache[(x, y)]

    @cached_property
    def _target_cache(self) -> dict:
        return {}

    def join_within(self, top, s: Iterable):
        """The least upper bound of ``s`` inside the interval [0, top], or None."""
        ub = set(self.down_sets[top])
        for a in s:
            ub &= self.up_sets[a]
        mins = self._minimal(ub)
        return mins[0] if len(mins) == 1 else None

    def meet_within(self, top, a, b):
        lb = self.down_sets[a] & self.down_sets[b] & self.down_sets[top]
        maxs = [t for t in lb if not any(u != t and t in self.down_sets[u] for u in lb)]
        return maxs[0] if len(maxs) == 1 else None

    def sup_of_atoms(self, atoms: Iterable, within=None):
        """Label of a set of atoms: its unique minimal upper bound (inside [0, within])."""
        atoms = list(atoms)
        if within is not None:
            return self.join_within(within, atoms)
        mub = self.min_upper_bounds(atoms)
        return next(iter(mub)) if len(mub) == 1 else None

    # -- Moebius ----------------------------------------------------------------
    @cached_property
    def _moebius(self) -> dict:
        mu: dict = {}
        for x in self.elements:
            if x == self.bottom:
                mu[x] = 1
            else:
                mu[x] = -sum(mu[y] for y in self.down_sets[x] if y != x)
        return mu

    def moebius(self, x) -> int:
        """mu(0, x) from mu(0,0) = 1 and sum_{y <= x} mu(0, y) = 0 for x > 0."""
        self._check(x)
        return self._moebius[x]

    # -- lattice properties ---------------------------------------------------
    def is_atomic(self) -> bool:
        for x in self.elements:
            if self.rank[x] == 0:
                continue
            below = self.atoms_below_map[x]
            if not below or x not in self.min_upper_bounds(below):
                return False
        return True

    def is_geometric_interval(self, top) -> bool:
        """Whether [0, top] is a geometric lattice (atomic, semimodular)."""
        elems = [x for x in self.elements if x in self.down_sets[top]]
        for x in elems:
            if self.rank[x] and self.join_within(top, self.atoms_below_map[x]) != x:
                return False
        for x, y in itertools.combinations(elems, 2):
            j = self.join_within(top, (x, y))
            m = self.meet_within(top, x, y)
            if j is None or m is None:
                return False
            if self.rank[j] + self.rank[m] > self.rank[x] + self.rank[y]:
                return False
        return True

    def is_locally_geometric(self) -> bool:
        return all(self.is_geometric_interval(t) for t in self.elements)

    def is_lattice(self) -> bool:
        return all(len(self.min_upper_bounds(p)) == 1
                   for p in itertools.combinations(self.elements, 2))

    def require_locally_geometric(self):
        if not self.is_locally_geometric():
            raise NotLocallyGeometric("poset has an interval [0, t] that is not a geometric lattice")

    # -- automorphisms ----------------------------------------------------------
    def induced_map(self, atom_map: Mapping[str, str]) -> dict:
        """Element map induced by a bijection of atoms (x -> element with the image atom set)."""
        by_atoms: dict = {}
        for x in self.elements:
            key = frozenset(self.atoms_below_map[x])
            if key in by_atoms:
                raise ValueError("elements are not determined by their atoms")
            by_atoms[key] = x
        out = {}
        for x in self.elements:
            img = frozenset(atom_map[a] for a in self.atoms_below_map[x])
            y = by_atoms.get(img)
            if y is None or self.rank[y] != self.rank[x]:
                raise ValueError(f"atom map does not extend to an automorphism at {x!r}")
            out[x] = y
        for a, b in self.covers:
            if (out[a], out[b]) not in self.covers:
                raise ValueError("atom map does not preserve covers")
        return out

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "elements": [{"id": x, "rank": self.rank[x]} for x in sorted(self.elements)],
            "covers": sorted([a, b] for a, b in self.covers),
            "atoms": list(self.atoms),
        }
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "GradedPoset":
        """Elements may be ids or ``{"id", "rank"}`` objects; ranks, if given, are checked."""
        try:
            raw = list(obj["elements"])
            elements = [e["id"] if isinstance(e, Mapping) else str(e) for e in raw]
            rank = {e["id"]: int(e["rank"]) for e in raw if isinstance(e, Mapping) and "rank" in e}
            covers = [tuple(str(v) for v in c) for c in obj["covers"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad poset description: {exc}") from exc
        if len(rank) < len(elements):
            rank = None
        return cls.from_covers(elements, covers, atoms=obj.get("atoms"), rank=rank)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedPoset):
            return NotImplemented
        return (set(self.elements) == set(other.elements) and self.covers == other.covers
                and self.atoms == other.atoms)

    def __hash__(self):
        return hash((frozenset(self.elements), self.covers, self.atoms))

    def __repr__(self) -> str:
        return f"GradedPoset({len(self.elements)} elements, {len(self.atoms)} atoms, height {self.height})"


@dataclass(frozen=True)
class CubicalIndex:
    vertex: str
    atomset: frozenset

    def id(self, atom_order: Mapping[str, int] | None = None) -> str:
        key = (atom_order.__getitem__ if atom_order else natural_key)
        return f"{self.vertex}@[{','.join(sorted(self.atomset, key=key))}]"


# ---------------------------------------------------------------------------
# constructors

def boolean_lattice(n_or_names) -> GradedPoset:
    """The Boolean lattice of subsets; element ids look like ``{1,3}``."""
    names = ([str(i) for i in range(1, n_or_names + 1)] if isinstance(n_or_names, int)
             else [str(a) for a in n_or_names])
    pos = {a: i for i, a in enumerate(names)}

    def ident(sub):
        return "{" + ",".join(sorted(sub, key=pos.__getitem__)) + "}"

    elements, covers, data = [], [], {}
    for k in range(len(names) + 1):
        for sub in itertools.combinations(names, k):
            x = ident(sub)
            elements.append(x)
            data[x] = frozenset(sub)
            for a in sub:
                covers.append((ident([b for b in sub if b != a]), x))
    atoms = [ident([a]) for a in names]
    return GradedPoset.from_covers(elements, covers, atoms=atoms, data=data)


@dataclass(frozen=True)
class Graph:
    """A finite simple graph; vertices are small integers."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        vs = tuple(sorted(set(self.vertices)))
        es = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError("loops are not allowed")
            if a not in vs or b not in vs:
                raise ValueError(f"edge ({a},{b}) uses an unknown vertex")
            es.add((min(a, b), max(a, b)))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(sorted(es)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(tuple(range(1, n + 1)), tuple(itertools.combinations(range(1, n + 1), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(tuple(range(1, n + 1)), tuple((i, i + 1) for i in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(tuple(range(1, n + 1)),
                   tuple((i, i + 1) for i in range(1, n)) + ((1, n),))

    @classmethod
    def edgeless(cls, n: int) -> "Graph":
        return cls(tuple(range(1, n + 1)), ())

    @classmethod
    def parse(cls, spec: str) -> "Graph":
        """``k3``, ``path3``, ``c4``, ``empty2``, or ``n:a-b,c-d``."""
        s = spec.strip().lower()
        for prefix, ctor in (("k", cls.complete), ("path", cls.path), ("p", cls.path),
                             ("c", cls.cycle), ("empty", cls.edgeless), ("e", cls.edgeless)):
            if s.startswith(prefix) and s[len(prefix):].isdigit():
                return ctor(int(s[len(prefix):]))
        if ":" in s:
            n, es = s.split(":", 1)
            edges = [tuple(int(v) for v in e.split("-")) for e in es.split(",") if e]
            return cls(tuple(range(1, int(n) + 1)), tuple(edges))
        raise ValueError(f"cannot parse graph spec {spec!r}")

    def to_json(self) -> dict:
        return {"vertices": len(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Graph":
        v = obj["vertices"]
        vs = tuple(range(1, v + 1)) if isinstance(v, int) else tuple(v)
        return cls(vs, tuple(tuple(e) for e in obj["edges"]))

    def neighbors(self, v) -> list:
        return sorted({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v})


def partition_id(blocks) -> str:
    return "|".join("-".join(str(v) for v in b) for b in blocks)


def canonical_blocks(blocks) -> tuple:
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


def partition_lattice(graph: Graph) -> GradedPoset:
    """Partitions of V(G) into blocks inducing connected subgraphs, ordered by refinement.

    Element ids list the blocks by smallest vertex, e.g. ``1-2|3``.  Atoms
    are the edges, in lexicographic edge order.
    """
    start = canonical_blocks([(v,) for v in graph.vertices])
    seen = {start}
    queue = deque([start])
    covers = set()
    while queue:
        blocks = queue.popleft()
        where = {v: i for i, b in enumerate(blocks) for v in b}
        for a, b in graph.edges:
            i, j = where[a], where[b]
            if i == j:
                continue
            merged = [blk for k, blk in enumerate(blocks) if k not in (i, j)]
            merged.append(blocks[i] + blocks[j])
            nb = canonical_blocks(merged)
            covers.add((partition_id(blocks), partition_id(nb)))
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    data = {partition_id(b): b for b in seen}
    atoms = []
    for a, b in graph.edges:
        blocks = [(v,) for v in graph.vertices if v not in (a, b)] + [(a, b)]
        atoms.append(partition_id(canonical_blocks(blocks)))
    return GradedPoset.from_covers(list(data), covers, atoms=atoms, data=data)


def intersection_poset(strata: Mapping, atoms: Iterable | None = None) -> GradedPoset:
    """Poset of distinct intersections from labels of all atom subsets.

    ``strata`` maps frozensets of atom names to a label of the intersection
    (equal labels meaning equal intersections; ``None`` or a missing key
    meaning empty).  The empty set must map to the ambient space.  Labels
    become element ids, ordered by reverse inclusion of intersections.
    """
    strata = {frozenset(k): v for k, v in strata.items()}
    if atoms is None:
        atoms = sorted({a for k in strata for a in k}, key=lambda a: natural_key(str(a)))
    atoms = list(atoms)
    if strata.get(frozenset()) is None:
        raise ValueError("the empty set of atoms must be labelled by the ambient space")
    span: dict = {}
    for k, lab in strata.items():
        if lab is None:
            continue
        span.setdefault(str(lab), set()).update(k)
    for lab, s in span.items():
        if str(strata.get(frozenset(s))) != lab:
            raise ValueError(f"label {lab!r} is not closed under unions of its generating sets")
    labels = sorted(span, key=lambda l: (len(span[l]), natural_key(l)))
    less = {(a, b) for a in labels for b in labels if a != b and span[a] < span[b]}
    covers = [(a, b) for a, b in less
              if not any((a, c) in less and (c, b) in less for c in labels)]
    atom_ids = [str(strata[frozenset([a])]) for a in atoms]
    if len(set(atom_ids)) != len(atom_ids):
        raise ValueError("two atoms have the same intersection label")
    data = {lab: frozenset(span[lab]) for lab in labels}
    return GradedPoset.from_covers(labels, covers, atoms=atom_ids, data=data)


def cubical_lattice(p: GradedPoset):
    """The locally cubical lattice of pairs (x, I) with x a minimal upper bound of I.

    Returns ``(Q, proj)`` where ``proj`` maps each element id of ``Q`` to its
    vertex in ``p``.  Ranks in ``Q`` are ``|I|``.
    """
    if not p.is_atomic():
        raise NotAtomic("cubical lattice needs an atomic poset")
    pos = p.atom_index
    pairs = []
    for k in range(len(p.atoms) + 1):
        for sub in itertools.combinations(p.atoms, k):
            for x in sorted(p.min_upper_bounds(sub), key=p.index.__getitem__):
                pairs.append(CubicalIndex(x, frozenset(sub)))
    ident = {c: c.id(pos) for c in pairs}
    by_set: dict = {}
    for c in pairs:
        by_set.setdefault(c.atomset, []).append(c)
    covers = []
    for c in pairs:
        for a in p.atoms:
            if a in c.atomset:
                continue
            for d in by_set.get(c.atomset | {a}, ()):
                if p.leq(c.vertex, d.vertex):
                    covers.append((ident[c], ident[d]))
    atoms = [ident[CubicalIndex(a, frozenset([a]))] for a in p.atoms]
    data = {ident[c]: c for c in pairs}
    q = GradedPoset.from_covers([ident[c] for c in pairs], covers, atoms=atoms, data=data)
    proj = {ident[c]: c.vertex for c in pairs}
    return q, proj
