"""Graded rings and cohomology-with-support modules over a poset.

A :class:`SupportModule` attaches to every element x of a poset a graded
vector space (cohomology of X with support in the stratum L_x, indexed by
the ambient degree q), a degree-preserving map g_yx for each cover y <: x,
and products into the independent targets t of a pair (x, y).

Built-in constructors cover linear subspaces of P^n, affine subspaces of
C^n, and diagonal arrangements in M^n.  Gysin maps of diagonals are
computed as adjoints of the restriction maps under the Poincare pairings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping

from .errors import InvariantViolation, SchemaError
from .exactla import RatMatrix, SingularPairing, pairing_adjoint, to_fraction, vec_add, vec_scale
from .poset import Graph, GradedPoset, partition_lattice

__all__ = [
    "SchemaError",
    "InvariantViolation",
    "NoPairing",
    "OddTopDegree",
    "CodimMonotonicityViolation",
    "GradedRing",
    "TensorPower",
    "projective_space",
    "elliptic_curve",
    "point",
    "builtin_ring",
    "SupportModule",
    "projective_support",
    "affine_support",
    "diagonal_support",
    "custom_support",
]


class NoPairing(ValueError):
    pass


class OddTopDegree(ValueError):
    pass


class CodimMonotonicityViolation(ValueError):
    pass


def _fmt(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _vec_json(v: Mapping) -> dict:
    return {str(k): _fmt(c) for k, c in sorted(v.items()) if c}


def _vec_from_json(obj) -> dict:
    try:
        return {int(k): to_fraction(c) for k, c in obj.items() if to_fraction(c)}
    except (TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"bad vector {obj!r}") from exc


# ---------------------------------------------------------------------------
# graded rings

class _RingOps:
    labels: tuple
    degrees: tuple

    def dim(self) -> int:
        return len(self.labels)

    def mul(self, i: int, j: int) -> dict:
        raise NotImplementedError

    def mul_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                vec_add(out, self.mul(i, j), a * b)
        return out

    def integrate(self, v: Mapping) -> Fraction:
        raise NotImplementedError

    @cached_property
    def pairing_matrix(self) -> RatMatrix:
        """P[i][j] = integral of e_i e_j."""
        if self.top_degree is None:
            raise NoPairing(f"ring {self.name!r} has no orientation")
        by_deg: dict = {}
        for i, d in enumerate(self.degrees):
            by_deg.setdefault(d, []).append(i)
        ent = {}
        for i, d in enumerate(self.degrees):
            for j in by_deg.get(self.top_degree - d, ()):
                c = self.integrate(self.mul(i, j))
                if c:
                    ent[(i, j)] = c
        return RatMatrix(self.dim(), self.dim(), ent)

    @property
    def euler_characteristic(self) -> int:
        return sum(-1 if d % 2 else 1 for d in self.degrees)

    def betti(self) -> dict:
        out: dict = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def violations(self) -> list:
        """Failed ring identities (unit, commutativity, associativity, degrees, pairing)."""
        bad = []
        n = self.dim()
        for i in range(n):
            if self.mul(self.unit, i) != {i: 1} or self.mul(i, self.unit) != {i: 1}:
                bad.append(f"unit fails on {self.labels[i]}")
        for i, j in itertools.product(range(n), repeat=2):
            ij = self.mul(i, j)
            for k in ij:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    bad.append(f"product {self.labels[i]}*{self.labels[j]} not degree-additive")
            s = -1 if self.degrees[i] * self.degrees[j] % 2 else 1
            if vec_add(dict(ij), self.mul(j, i), -s):
                bad.append(f"graded commutativity fails on {self.labels[i]}, {self.labels[j]}")
        for i, j, k in itertools.product(range(n), repeat=3):
            left = self.mul_vec(self.mul(i, j), {k: 1})
            right = self.mul_vec({i: 1}, self.mul(j, k))
            if vec_add(left, right, -1):
                bad.append(f"associativity fails on {self.labels[i]}, {self.labels[j]}, {self.labels[k]}")
        if self.top_degree is not None:
            try:
                self.pairing_matrix.inverse()
            except SingularPairing:
                bad.append("Poincare pairing is degenerate")
        return bad


@dataclass(frozen=True, eq=False)
class GradedRing(_RingOps):
    """Finite-dimensional graded-commutative ring given by its multiplication table."""

    name: str
    labels: tuple
    degrees: tuple
    table: Mapping            # (i, j) -> {k: Fraction}
    unit: int = 0
    top_degree: int | None = None
    orientation: Mapping | None = None   # linear functional on the top degree

    def mul(self, i: int, j: int) -> dict:
        return dict(self.table.get((i, j), {}))

    def integrate(self, v: Mapping) -> Fraction:
        if self.orientation is None:
            raise NoPairing(f"ring {self.name!r} has no orientation")
        return sum((c * self.orientation.get(k, 0) for k, c in v.items()), Fraction(0))

    def tensor_power(self, k: int) -> "TensorPower":
        return TensorPower(self, k)

    def to_json(self) -> dict:
        out = {"name": self.name,
               "basis": [{"label": l, "degree": d} for l, d in zip(self.labels, self.degrees)],
               "unit": self.unit,
               "products": [[i, j, _vec_json(v)] for (i, j), v in sorted(self.table.items()) if v]}
        if self.top_degree is not None:
            out["pairing"] = {"top_degree": self.top_degree,
                              "orientation": _vec_json(self.orientation or {})}
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "GradedRing":
        try:
            labels = tuple(str(b["label"]) for b in obj["basis"])
            degrees = tuple(int(b["degree"]) for b in obj["basis"])
            table = {}
            for i, j, v in obj.get("products", []):
                table[(int(i), int(j))] = _vec_from_json(v)
            pairing = obj.get("pairing")
            top = int(pairing["top_degree"]) if pairing else None
            orient = _vec_from_json(pairing["orientation"]) if pairing else None
            ring = cls(str(obj.get("name", "custom")), labels, degrees, table,
                       int(obj.get("unit", 0)), top, orient)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad ring description: {exc}") from exc
        bad = ring.violations()
        if bad:
            raise InvariantViolation(bad[0])
        return ring


@dataclass(frozen=True, eq=False)
class TensorPower(_RingOps):
    """The Kunneth ring H^{(x)k} with the Koszul sign rule; basis in lexicographic order."""

    base: GradedRing
    k: int

    @cached_property
    def basis(self) -> tuple:
        return tuple(itertools.product(range(self.base.dim()), repeat=self.k))

    @cached_property
    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def name(self) -> str:
        return f"{self.base.name}^{self.k}"

    @cached_property
    def labels(self) -> tuple:
        return tuple(".".join(self.base.labels[a] for a in b) or "1" for b in self.basis)

    @cached_property
    def degrees(self) -> tuple:
        d = self.base.degrees
        return tuple(sum(d[a] for a in b) for b in self.basis)

    @property
    def unit(self) -> int:
        return self.index[(self.base.unit,) * self.k]

    @property
    def top_degree(self):
        return None if self.base.top_degree is None else self.base.top_degree * self.k

    @cached_property
    def _cache(self) -> dict:
        return {}

    def mul_tuples(self, u: tuple, v: tuple) -> dict:
        """Product of basis tuples as {tuple: coef}."""
        d = self.base.degrees
        sign = 0
        for i in range(len(u)):
            for j in range(i):
                sign += d[u[i]] * d[v[j]]
        acc = {(): Fraction(-1 if sign % 2 else 1)}
        for a, b in zip(u, v):
            prod = self.base.mul(a, b)
            if not prod:
                return {}
            acc = {t + (c,): x * y for t, x in acc.items() for c, y in prod.items()}
        return {t: x for t, x in acc.items() if x}

    def mul(self, i: int, j: int) -> dict:
        key = (i, j)
        if key not in self._cache:
            idx = self.index
            self._cache[key] = {idx[t]: c for t, c in
                                self.mul_tuples(self.basis[i], self.basis[j]).items()}
        return dict(self._cache[key])

    def integrate(self, v: Mapping) -> Fraction:
        total = Fraction(0)
        for i, c in v.items():
            val = c
            for a in self.basis[i]:
                val *= self.base.integrate({a: 1})
                if not val:
                    break
            total += val
        return total


def projective_space(n: int) -> GradedRing:
    """H*(P^n) = Q[h]/h^(n+1), oriented by h^n."""
    labels = tuple("1" if k == 0 else ("h" if k == 1 else f"h^{k}") for k in range(n + 1))
    table = {(a, b): {a + b: Fraction(1)} for a in range(n + 1) for b in range(n + 1)
             if a + b <= n}
    return GradedRing(f"P{n}", labels, tuple(2 * k for k in range(n + 1)), table, 0,
                      2 * n, {n: Fraction(1)})


def elliptic_curve() -> GradedRing:
    """Cohomology of a genus-one curve: 1, a, b, pt with ab = pt."""
    one, a, b, pt = range(4)
    table = {(one, x): {x: Fraction(1)} for x in range(4)}
    table.update({(x, one): {x: Fraction(1)} for x in range(4)})
    table[(a, b)] = {pt: Fraction(1)}
    table[(b, a)] = {pt: Fraction(-1)}
    return GradedRing("elliptic-curve", ("1", "a", "b", "pt"), (0, 1, 1, 2), table, 0,
                      2, {pt: Fraction(1)})


def point() -> GradedRing:
    return GradedRing("point", ("1",), (0,), {(0, 0): {0: Fraction(1)}}, 0, 0, {0: Fraction(1)})


def builtin_ring(name: str) -> GradedRing:
    key = name.strip().lower()
    if key in ("point", "pt"):
        return point()
    if key in ("elliptic-curve", "elliptic", "genus1", "genus-1", "e"):
        return elliptic_curve()
    if key.startswith("p") and key[1:].isdigit():
        return projective_space(int(key[1:]))
    raise SchemaError(f"unknown space {name!r}")


# ---------------------------------------------------------------------------
# support modules

@dataclass(frozen=True, eq=False)
class SupportModule:
    poset: GradedPoset
    spaces: Mapping          # x -> tuple of (label, degree)
    cover_maps: Mapping      # (y, x) -> RatMatrix  dim(y) x dim(x)
    mult: Callable           # (x, i, y, j, t) -> {k: coef}
    weight_offset: Mapping = field(default_factory=dict)
    kind: str = "custom"
    geometry: object = None  # constructor-specific data (e.g. the diagonal restrictions)

    def dim(self, x) -> int:
        return len(self.spaces[x])

    def degree(self, x, i) -> int:
        return self.spaces[x][i][1]

    def label(self, x, i) -> str:
        return self.spaces[x][i][0]

    def dims_by_degree(self, x) -> dict:
        out: dict = {}
        for _, d in self.spaces[x]:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def g(self, y, x) -> RatMatrix:
        return self.cover_maps[(y, x)]

    @cached_property
    def _cache(self) -> dict:
        return {}

    def product(self, x, i, y, j) -> dict:
        """{t: vector} over the independent targets of (x, y)."""
        key = (x, i, y, j)
        if key not in self._cache:
            out = {}
            for t in self.poset.independent_targets(x, y):
                v = {k: c for k, c in self.mult(x, i, y, j, t).items() if c}
                if v:
                    out[t] = v
            self._cache[key] = out
        return self._cache[key]

    # -- validation -----------------------------------------------------------
    def violations(self) -> list:
        L = self.poset
        bad = []
        for y, x in sorted(L.covers):
            m = self.cover_maps.get((y, x))
            if m is None:
                bad.append(f"missing cover map {y}<:{x}")
                continue
            if (m.rows, m.cols) != (self.dim(y), self.dim(x)):
                bad.append(f"cover map {y}<:{x} has shape {m.rows}x{m.cols}")
                continue
            for (a, b) in m.entries:
                if self.degree(y, a) != self.degree(x, b):
                    bad.append(f"cover map {y}<:{x} is not degree-preserving")
                    break
        if bad:
            return bad
        for x in L.elements:
            for z in L.elements:
                if not (L.rank[z] == L.rank[x] - 2 and L.leq(z, x)):
                    continue
                paths = [self.g(z, y) @ self.g(y, x) for y in L.lower_covers(x) if L.leq(z, y)]
                if any(p != paths[0] for p in paths[1:]):
                    bad.append(f"cover maps do not commute on the square {z} < {x}")
        for x in L.elements:
            for y in L.elements:
                for i in range(self.dim(x)):
                    for j in range(self.dim(y)):
                        for t, v in self.product(x, i, y, j).items():
                            q = self.degree(x, i) + self.degree(y, j)
                            if any(self.degree(t, k) != q for k in v):
                                bad.append(f"product {x}*{y}->{t} is not degree-additive")
        return bad

    def validate(self) -> "SupportModule":
        bad = self.violations()
        if bad:
            raise InvariantViolation(bad[0])
        return self

    # -- serialization --------------------------------------------------------
    def product_table(self) -> dict:
        out = {}
        L = self.poset
        for x in sorted(L.elements):
            for y in sorted(L.elements):
                for t in L.independent_targets(x, y):
                    entries = []
                    for i in range(self.dim(x)):
                        for j in range(self.dim(y)):
                            v = self.product(x, i, y, j).get(t)
                            if v:
                                entries.append([i, j, _vec_json(v)])
                    if entries:
                        out[f"{x}*{y}->{t}"] = entries
        return out

    def to_json(self) -> dict:
        L = self.poset
        return {
            "poset": L.to_json(),
            "spaces": {x: [{"label": l, "degree": d} for l, d in self.spaces[x]]
                       for x in sorted(L.elements)},
            "cover_maps": {f"{y}<:{x}": m.to_json() for (y, x), m in sorted(self.cover_maps.items())},
            "products": self.product_table(),
            "weight_offset": {x: self.weight_offset[x] for x in sorted(self.weight_offset)},
        }


def _table_mult(table: Mapping) -> Callable:
    def mult(x, i, y, j, t):
        return table.get((x, y, t), {}).get((i, j), {})
    return mult


def projective_support(n: int, codims: Mapping, poset: GradedPoset) -> SupportModule:
    """Linear subspaces of P^n: the space at x is t^{c_x} Q[t]/t^{n+1}."""
    L = poset
    for x in L.elements:
        if x not in codims:
            raise SchemaError(f"missing codimension for {x!r}")
        if not 0 <= codims[x] <= n + 1:
            raise SchemaError(f"codimension of {x!r} outside 0..{n + 1}")
    for y, x in L.covers:
        if codims[y] >= codims[x]:
            raise CodimMonotonicityViolation(f"{y} <: {x} but codim {codims[y]} >= {codims[x]}")
    lab = projective_space(n).labels
    spaces = {x: tuple((lab[k], 2 * k) for k in range(codims[x], n + 1)) for x in L.elements}
    maps = {}
    for y, x in L.covers:
        ent = {(k - codims[y], k - codims[x]): 1 for k in range(codims[x], n + 1)}
        maps[(y, x)] = RatMatrix(len(spaces[y]), len(spaces[x]), ent)

    def mult(x, i, y, j, t):
        k = codims[x] + i + codims[y] + j
        if k > n:
            return {}
        return {k - codims[t]: Fraction(1)}

    return SupportModule(L, spaces, maps, mult, {x: 2 * codims[x] for x in L.elements},
                         "projective")


def affine_support(n: int, poset: GradedPoset) -> SupportModule:
    """Affine subspaces of C^n with rank = codimension: Q in degree 2 r(x)."""
    L = poset
    if L.height > n:
        raise SchemaError(f"rank {L.height} exceeds the ambient dimension {n}")
    spaces = {x: (("u" if L.rank[x] else "1", 2 * L.rank[x]),) for x in L.elements}
    maps = {(y, x): RatMatrix.zeros(1, 1) for y, x in L.covers}

    def mult(x, i, y, j, t):
        return {0: Fraction(1)}

    return SupportModule(L, spaces, maps, mult, {x: 2 * L.rank[x] for x in L.elements}, "affine")


class _Diagonal:
    """Restriction and Gysin data for the diagonals of M^n indexed by a graph."""

    def __init__(self, ring: GradedRing, graph: Graph):
        if ring.top_degree is None or ring.orientation is None:
            raise NoPairing(f"ring {ring.name!r} has no Poincare pairing")
        if ring.top_degree % 2:
            raise OddTopDegree("only even-dimensional (complex) manifolds are supported")
        try:
            ring.pairing_matrix.inverse()
        except SingularPairing as exc:
            raise NoPairing(f"ring {ring.name!r} has a degenerate pairing") from exc
        self.ring = ring
        self.graph = graph
        self.lattice = partition_lattice(graph)
        self.powers = {}
        self.cache: dict = {}

    def power(self, k: int) -> TensorPower:
        if k not in self.powers:
            self.powers[k] = TensorPower(self.ring, k)
        return self.powers[k]

    def blocks(self, x) -> tuple:
        return self.lattice.data[x]

    def block_map(self, y, x) -> list:
        where = {v: i for i, b in enumerate(self.blocks(x)) for v in b}
        return [where[b[0]] for b in self.blocks(y)]

    def restrict(self, y, x, i) -> dict:
        """Pull back basis element i of H(Delta_y) to Delta_x (y <= x)."""
        key = (y, x, i)
        if key in self.cache:
            return self.cache[key]
        f = self.block_map(y, x)
        R = self.ring
        u = self.power(len(f)).basis[i]
        order = sorted(range(len(f)), key=lambda a: f[a])
        # Koszul sign of regrouping the factors by target block
        sign = 0
        for a in range(len(order)):
            for b in range(a + 1, len(order)):
                if order[a] > order[b]:
                    sign += R.degrees[u[order[a]]] * R.degrees[u[order[b]]]
        k = len(self.blocks(x))
        groups = [[] for _ in range(k)]
        for a in order:
            groups[f[a]].append(u[a])
        acc = {(): Fraction(-1 if sign % 2 else 1)}
        for grp in groups:
            v = {R.unit: Fraction(1)}
            for a in grp:
                v = R.mul_vec(v, {a: 1})
            acc = {t + (c,): x_ * y_ for t, x_ in acc.items() for c, y_ in v.items()}
        idx = self.power(k).index
        out = {idx[t]: c for t, c in acc.items() if c}
        self.cache[key] = out
        return out

    def restriction_matrix(self, y, x) -> RatMatrix:
        n_y = self.power(len(self.blocks(y))).dim()
        n_x = self.power(len(self.blocks(x))).dim()
        return RatMatrix.from_columns([self.restrict(y, x, i) for i in range(n_y)], n_x)

    def gysin(self, y, x) -> RatMatrix:
        p_x = self.power(len(self.blocks(x))).pairing_matrix
        p_y = self.power(len(self.blocks(y))).pairing_matrix
        return pairing_adjoint(self.restriction_matrix(y, x), p_x, p_y)


def diagonal_support(hM: GradedRing, graph: Graph) -> SupportModule:
    """Diagonals of M^n along the connected partitions of a graph."""
    diag = _Diagonal(hM, graph)
    L = diag.lattice
    shift = hM.top_degree
    spaces = {}
    for x in L.elements:
        P = diag.power(len(diag.blocks(x)))
        spaces[x] = tuple((l, d + shift * L.rank[x]) for l, d in zip(P.labels, P.degrees))
    maps = {(y, x): diag.gysin(y, x) for y, x in L.covers}

    def mult(x, i, y, j, t):
        P = diag.power(len(diag.blocks(t)))
        return P.mul_vec(diag.restrict(x, t, i), diag.restrict(y, t, j))

    return SupportModule(L, spaces, maps, mult, {x: shift * L.rank[x] for x in L.elements},
                         "diagonal", diag)


def custom_support(raw: Mapping) -> SupportModule:
    """Validated SupportModule from its JSON description.

    ``spaces`` maps ids to a list of ``{"label", "degree"}`` or to
    ``{degree: dim}``; ``cover_maps`` maps ``"y<:x"`` to a full matrix or to
    ``{degree: block}``; ``products`` maps ``"x*y->t"`` to ``[i, j, vector]``
    entries.  Missing reversed products are filled in by graded
    commutativity.
    """
    if not isinstance(raw, Mapping):
        raise SchemaError("support module description must be an object")
    for key in ("poset", "spaces"):
        if key not in raw:
            raise SchemaError(f"missing key {key!r}")
    try:
        L = GradedPoset.from_json(raw["poset"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad poset: {exc}") from exc
    spaces = {}
    for x in L.elements:
        s = raw["spaces"].get(x)
        if s is None:
            raise SchemaError(f"missing space for {x!r}")
        if isinstance(s, Mapping):
            basis = []
            for d in sorted(s, key=int):
                basis += [(f"e{d}_{k}", int(d)) for k in range(int(s[d]))]
            spaces[x] = tuple(basis)
        else:
            try:
                spaces[x] = tuple((str(b["label"]), int(b["degree"])) for b in s)
            except (KeyError, TypeError) as exc:
                raise SchemaError(f"bad basis for {x!r}") from exc
    maps = {}
    raw_maps = raw.get("cover_maps", {})
    for y, x in L.covers:
        m = raw_maps.get(f"{y}<:{x}")
        ny, nx = len(spaces[y]), len(spaces[x])
        if m is None:
            raise SchemaError(f"missing cover map {y}<:{x}")
        if isinstance(m, Mapping):
            ent = {}
            for d, block in m.items():
                rows = [a for a, (_, q) in enumerate(spaces[y]) if q == int(d)]
                cols = [b for b, (_, q) in enumerate(spaces[x]) if q == int(d)]
                if len(block) != len(rows) or any(len(r) != len(cols) for r in block):
                    raise SchemaError(f"block of {y}<:{x} in degree {d} has the wrong shape")
                for r, row in zip(rows, block):
                    for c, val in zip(cols, row):
                        ent[(r, c)] = to_fraction(val)
            maps[(y, x)] = RatMatrix(ny, nx, ent)
        else:
            if len(m) != ny or any(len(r) != nx for r in m):
                raise SchemaError(f"cover map {y}<:{x} must be {ny}x{nx}")
            maps[(y, x)] = RatMatrix.from_rows(m, nx) if ny else RatMatrix.zeros(0, nx)
    table: dict = {}
    for key, entries in raw.get("products", {}).items():
        try:
            xy, t = key.split("->")
            x, y = xy.split("*")
        except ValueError as exc:
            raise SchemaError(f"bad product key {key!r}") from exc
        for e in (x, y, t):
            if e not in L:
                raise SchemaError(f"product key {key!r} names unknown element {e!r}")
        if t not in L.independent_targets(x, y):
            raise InvariantViolation(f"product {key} does not land on an independent target")
        blk = table.setdefault((x, y, t), {})
        for i, j, v in entries:
            if not (0 <= i < len(spaces[x]) and 0 <= j < len(spaces[y])):
                raise SchemaError(f"product index out of range in {key}")
            vec = _vec_from_json(v)
            if any(not 0 <= k < len(spaces[t]) for k in vec):
                raise SchemaError(f"product value index out of range in {key}")
            blk[(int(i), int(j))] = vec
    for (x, y, t), blk in list(table.items()):
        if (y, x, t) in table:
            continue
        rev = {}
        for (i, j), v in blk.items():
            s = -1 if spaces[x][i][1] * spaces[y][j][1] % 2 else 1
            rev[(j, i)] = vec_scale(v, s)
        table[(y, x, t)] = rev
    for (x, y, t), blk in table.items():
        if (y, x, t) in table and x != y:
            other = table[(y, x, t)]
            for (i, j), v in blk.items():
                s = -1 if spaces[x][i][1] * spaces[y][j][1] % 2 else 1
                if vec_add(dict(v), other.get((j, i), {}), -s):
                    raise InvariantViolation(f"products {x}*{y} and {y}*{x} are not graded-commutative")
    offs = {x: int(v) for x, v in raw.get("weight_offset", {}).items()}
    mod = SupportModule(L, spaces, maps, _table_mult(table), offs, "custom")
    return mod.validate()
