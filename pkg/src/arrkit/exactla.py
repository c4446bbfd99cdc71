"""Exact sparse linear algebra over the rationals.

Vectors are plain dicts ``{index: Fraction}`` with no zero entries.  Matrices
are :class:`RatMatrix` objects holding a sparse ``(row, col) -> Fraction`` map.

Elimination is fraction-free: rows are scaled to primitive integer vectors
and combined by cross-multiplication, dividing out the row content after each
step (a sparse variant of Bareiss' trick that keeps entries small).  Pivots
are always the leftmost nonzero column of the current row, and rows are
processed in order, so every basis returned here is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ContainmentViolation",
    "SingularPairing",
    "RatMatrix",
    "Subspace",
    "Reducer",
    "rank",
    "kernel_basis",
    "image_basis",
    "quotient_basis",
    "pairing_adjoint",
    "to_fraction",
    "vec_add",
    "vec_scale",
]


class ContainmentViolation(ValueError):
    """A subspace is not contained in the space it was quotiented from."""


class SingularPairing(ValueError):
    """A pairing matrix is not invertible."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def vec_add(u: dict, v: Mapping, c=1) -> dict:
    """u += c*v in place; returns u."""
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)
    return u


def vec_scale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def _primitive(row: dict) -> dict:
    """Scale a rational row to a primitive integer row with positive lead."""
    if not row:
        return {}
    vals = [to_fraction(x) for x in row.values()]
    den = reduce(lcm, (x.denominator for x in vals), 1)
    ints = {k: int(to_fraction(x) * den) for k, x in row.items()}
    g = reduce(gcd, ints.values(), 0)
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    return {k: x // g for k, x in ints.items()}


def _combine(r: dict, p: dict, col: int) -> dict:
    """Eliminate ``col`` from integer row ``r`` using integer pivot row ``p``."""
    a, b = p[col], r[col]
    out = {k: a * x for k, x in r.items()}
    for k, x in p.items():
        y = out.get(k, 0) - b * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    if out:
        g = reduce(gcd, out.values(), 0)
        if g != 1:
            out = {k: x // g for k, x in out.items()}
    return out


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), x in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            x = to_fraction(x)
            if x:
                clean[(i, j)] = x
        object.__setattr__(self, "entries", clean)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, x in enumerate(row):
                if x:
                    ent[(i, j)] = to_fraction(x)
        return cls(len(rows), cols, ent)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping], rows: int) -> "RatMatrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, x in col.items():
                ent[(i, j)] = x
        return cls(rows, len(columns), ent)

    # -- views --------------------------------------------------------------
    @cached_property
    def row_map(self) -> dict:
        out: dict = {}
        for (i, j), x in self.entries.items():
            out.setdefault(i, {})[j] = x
        return out

    @cached_property
    def col_map(self) -> dict:
        out: dict = {}
        for (i, j), x in self.entries.items():
            out.setdefault(j, {})[i] = x
        return out

    def column(self, j: int) -> dict:
        return dict(self.col_map.get(j, {}))

    def to_rows(self) -> list:
        return [[self.entries.get((i, j), Fraction(0)) for j in range(self.cols)]
                for i in range(self.rows)]

    def __getitem__(self, ij) -> Fraction:
        return self.entries.get(ij, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def is_zero(self) -> bool:
        return not self.entries

    # -- arithmetic ---------------------------------------------------------
    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, {(j, i): x for (i, j), x in self.entries.items()})

    def apply(self, v: Mapping) -> dict:
        out: dict = {}
        cm = self.col_map
        for j, x in v.items():
            col = cm.get(j)
            if col:
                vec_add(out, col, x)
        return out

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ent: dict = {}
        rm = other.row_map
        for (i, k), x in self.entries.items():
            for j, y in rm.get(k, {}).items():
                ent[(i, j)] = ent.get((i, j), 0) + x * y
        return RatMatrix(self.rows, other.cols, ent)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        ent = dict(self.entries)
        for k, x in other.entries.items():
            ent[k] = ent.get(k, 0) + x
        return RatMatrix(self.rows, self.cols, ent)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, {k: -x for k, x in self.entries.items()})

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def scale(self, c) -> "RatMatrix":
        c = to_fraction(c)
        return RatMatrix(self.rows, self.cols, {k: c * x for k, x in self.entries.items()})

    def inverse(self) -> "RatMatrix":
        return self._inverse

    @cached_property
    def _inverse(self) -> "RatMatrix":
        if self.rows != self.cols:
            raise SingularPairing("non-square matrix has no inverse")
        n = self.rows
        red = Reducer(n)
        for j in range(n):
            if not red.add(self.column(j)):
                raise SingularPairing("matrix is singular")
        cols = []
        for i in range(n):
            rem, coeffs = red.reduce({i: Fraction(1)})
            cols.append(coeffs)
        return RatMatrix.from_columns(cols, n)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> list:
        return [[_fmt(x) for x in row] for row in self.to_rows()]

    @classmethod
    def from_json(cls, data, rows: int | None = None, cols: int | None = None) -> "RatMatrix":
        if not data:
            return cls(rows or 0, cols or 0, {})
        return cls.from_rows([[to_fraction(x) for x in row] for row in data])


def _fmt(x: Fraction) -> str:
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(
            {k: to_fraction(x) for k, x in v.items() if x} for v in self.basis))
        if rank_of_vectors(self.basis, self.ambient_dim) != len(self.basis):
            raise ValueError("Subspace basis is not linearly independent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> RatMatrix:
        return RatMatrix.from_columns(self.basis, self.ambient_dim)

    def contains(self, v: Mapping) -> bool:
        red = Reducer(self.ambient_dim, self.basis)
        rem, _ = red.reduce(v)
        return not rem


class Reducer:
    """Incremental echelon form of a list of generator vectors.

    Remembers, for each echelon row, its expression in the generators that
    were accepted, so :meth:`reduce` can return coordinates of a vector in the
    span together with the remainder outside it.
    """

    def __init__(self, dim: int, gens: Iterable[Mapping] = ()):
        self.dim = dim
        self.pivots: dict = {}    # pivot col -> (integer row, combo over accepted gens)
        self.accepted: list = []  # accepted generator vectors
        for g in gens:
            self.add(g)

    @property
    def rank(self) -> int:
        return len(self.accepted)

    def _eliminate(self, row: dict, combo: dict):
        while row:
            col = min(row)
            piv = self.pivots.get(col)
            if piv is None:
                return row, combo
            prow, pcombo = piv
            a, b = Fraction(prow[col]), row[col]
            factor = b / a
            row = vec_add(dict(row), prow, -factor)
            combo = vec_add(dict(combo), pcombo, -factor)
        return row, combo

    def add(self, v: Mapping) -> bool:
        """Add a generator; returns False (and ignores it) if dependent."""
        v = {k: to_fraction(x) for k, x in v.items() if x}
        idx = len(self.accepted)
        row, combo = self._eliminate(v, {idx: Fraction(1)})
        if not row:
            return False
        col = min(row)
        lead = row[col]
        row = {k: x / lead for k, x in row.items()}
        combo = {k: x / lead for k, x in combo.items()}
        self.pivots[col] = (row, combo)
        self.accepted.append(v)
        return True

    def reduce(self, v: Mapping):
        """Return ``(remainder, coords)`` with ``v = remainder + sum coords[i]*gen[i]``."""
        row = {k: to_fraction(x) for k, x in v.items() if x}
        coords: dict = {}
        while row:
            col = None
            for c in sorted(row):
                if c in self.pivots:
                    col = c
                    break
            if col is None:
                break
            prow, pcombo = self.pivots[col]
            factor = row[col] / prow[col]
            row = vec_add(row, prow, -factor)
            vec_add(coords, pcombo, factor)
        return row, coords


def rank_of_vectors(vectors: Iterable[Mapping], dim: int | None = None) -> int:
    pivots: dict = {}
    r = 0
    for v in vectors:
        row = _primitive({k: x for k, x in v.items() if x})
        while row:
            col = min(row)
            p = pivots.get(col)
            if p is None:
                pivots[col] = row
                r += 1
                break
            row = _combine(row, p, col)
    return r


def rank(m: RatMatrix) -> int:
    """Rank over Q (fraction-free sparse elimination on the rows)."""
    rm = m.row_map
    return rank_of_vectors((rm[i] for i in sorted(rm)), m.cols)


def _rref_rows(m: RatMatrix) -> dict:
    """Reduced row echelon form as ``{pivot col: row}`` with unit pivots."""
    pivots: dict = {}
    rm = m.row_map
    for i in sorted(rm):
        row = _primitive(rm[i])
        while row:
            col = min(row)
            p = pivots.get(col)
            if p is None:
                pivots[col] = row
                break
            row = _combine(row, p, col)
    # back substitution, highest pivot first
    out: dict = {}
    for col in sorted(pivots, reverse=True):
        row = {k: Fraction(x) for k, x in pivots[col].items()}
        for c in sorted(k for k in row if k != col and k in out):
            if c in row:
                vec_add(row, out[c], -row[c])
        lead = row[col]
        out[col] = {k: x / lead for k, x in row.items()}
    return out


def kernel_basis(m: RatMatrix) -> Subspace:
    """Basis of {v : m v = 0}, one vector per free column."""
    rref = _rref_rows(m)
    basis = []
    for f in range(m.cols):
        if f in rref:
            continue
        v = {f: Fraction(1)}
        for p, row in rref.items():
            x = row.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return Subspace(m.cols, tuple(basis))


def image_basis(m: RatMatrix) -> Subspace:
    """Basis of the column span made of actual columns of ``m`` (greedy, left to right)."""
    red = Reducer(m.rows)
    chosen = []
    for j in range(m.cols):
        col = m.column(j)
        if col and red.add(col):
            chosen.append(col)
    return Subspace(m.rows, tuple(chosen))


def quotient_basis(sub: Subspace, total: Subspace) -> Subspace:
    """Vectors of ``total``'s basis completing ``sub`` to a basis of ``total``."""
    if sub.ambient_dim != total.ambient_dim:
        raise ContainmentViolation("ambient dimensions differ")
    tot = Reducer(total.ambient_dim, total.basis)
    for v in sub.basis:
        rem, _ = tot.reduce(v)
        if rem:
            raise ContainmentViolation("sub is not contained in total")
    red = Reducer(total.ambient_dim, sub.basis)
    chosen = []
    for v in total.basis:
        if red.add(v):
            chosen.append(v)
    return Subspace(total.ambient_dim, tuple(chosen))


def pairing_adjoint(m: RatMatrix, pairing_src: RatMatrix, pairing_dst: RatMatrix) -> RatMatrix:
    """The map ``m!`` adjoint to ``m`` under two perfect pairings.

    With ``<u, v>_P = u^T P v`` the result satisfies
    ``<b, m! a>_dst = <m b, a>_src`` for all ``a`` in the target of ``m``
    and ``b`` in its source, i.e. ``m! = pairing_dst^-1 m^T pairing_src``.
    """
    for p in (pairing_src, pairing_dst):
        if p.rows != p.cols:
            raise SingularPairing("pairing matrix must be square")
    if pairing_src.rows != m.rows or pairing_dst.rows != m.cols:
        raise ValueError("pairing shapes do not match the map")
    pairing_src.inverse()           # raises SingularPairing if degenerate
    return pairing_dst.inverse() @ m.T @ pairing_src
