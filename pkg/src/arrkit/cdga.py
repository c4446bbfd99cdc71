"""Finite-dimensional graded dg-algebras on an explicit basis.

Basis elements carry a total degree and a grading key (a degree, or a
bidegree).  The differential must send each key block into a single key
block; cohomology is computed block by block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .exactla import RatMatrix, Reducer, Subspace, kernel_basis, quotient_basis, vec_add
from .oscomplex import Report, _Checker

__all__ = ["DGAlgebra", "Cohomology", "sign"]


def sign(n: int) -> int:
    return -1 if n % 2 else 1


def _clean(v: Mapping) -> dict:
    return {k: c for k, c in v.items() if c}


class DGAlgebra:
    """Basis-level dg-algebra.

    ``diff`` lists the differential of each basis vector as a sparse dict;
    ``mul(i, j)`` returns the product of two basis vectors as a sparse dict.
    ``shift`` maps a grading key to the key of its differential, ``add``
    adds two keys, ``total`` turns a key into the total degree.
    """

    def __init__(self, keys: Sequence[Hashable], grading: Sequence[Hashable],
                 diff: Sequence[Mapping], mul: Callable[[int, int], Mapping] | None,
                 shift: Callable, add: Callable, total: Callable, unit: int | None = None):
        self.keys = tuple(keys)
        self.grading = tuple(grading)
        self.diff = [_clean(v) for v in diff]
        self._mul = mul
        self.shift = shift
        self.add = add
        self.total = total
        self.unit = unit
        self._cache: dict = {}
        self.index = {k: i for i, k in enumerate(self.keys)}
        blocks: dict = {}
        for i, g in enumerate(self.grading):
            blocks.setdefault(g, []).append(i)
        self.blocks = blocks

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def dim(self) -> int:
        return len(self.keys)

    def degree(self, i: int) -> int:
        return self.total(self.grading[i])

    def d(self, v: Mapping) -> dict:
        out: dict = {}
        for i, c in v.items():
            if c:
                vec_add(out, self.diff[i], c)
        return out

    def mul(self, i: int, j: int) -> dict:
        key = (i, j)
        if key not in self._cache:
            if self._mul is None:
                raise TypeError("this complex carries no product")
            self._cache[key] = _clean(self._mul(i, j))
        return self._cache[key]

    def mul_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            if not a:
                continue
            for j, b in v.items():
                if b:
                    p = self.mul(i, j)
                    if p:
                        vec_add(out, p, a * b)
        return out

    def diff_matrix(self) -> RatMatrix:
        return RatMatrix.from_columns(self.diff, self.dim)

    def dims(self) -> dict:
        return {g: len(ix) for g, ix in sorted(self.blocks.items())}

    def euler_characteristic(self) -> int:
        return sum(sign(self.degree(i)) for i in range(self.dim))

    # -- checks -----------------------------------------------------------------
    def check(self, ck: _Checker | None = None, pairs: Iterable | None = None,
              associativity: bool = False) -> Report:
        """d^2 = 0, d homogeneous, Leibniz and graded commutativity on basis pairs."""
        ck = ck or _Checker()
        for i in range(self.dim):
            dd = self.d(self.diff[i])
            ck.record("d_squared_zero", not dd, f"d^2 e{i} = {dd}")
            target = self.shift(self.grading[i])
            ok = all(self.grading[k] == target for k in self.diff[i])
            ck.record("d_homogeneous", ok, f"d e{i} leaves the block {target}")
        if pairs is None:
            pairs = ((i, j) for i in range(self.dim) for j in range(self.dim))
        for i, j in pairs:
            ab = self.mul(i, j)
            s = sign(self.degree(i) * self.degree(j))
            ba = self.mul(j, i)
            ck.record("graded_commutative", not vec_add(dict(ab), ba, -s),
                      f"e{i} e{j}")
            target = self.add(self.grading[i], self.grading[j])
            ck.record("product_homogeneous", all(self.grading[k] == target for k in ab),
                      f"e{i} e{j}")
            lhs = self.d(ab)
            vec_add(lhs, self.mul_vec(self.diff[i], {j: 1}), -1)
            vec_add(lhs, self.mul_vec({i: 1}, self.diff[j]), -sign(self.degree(i)))
            ck.record("leibniz", not _clean(lhs), f"e{i} e{j}")
        if associativity:
            self.check_associative(ck)
        if self.unit is not None:
            ok = all(self.mul(self.unit, i) == {i: 1} for i in range(self.dim))
            ck.record("unit", ok)
        return ck.report()

    def check_associative(self, ck: _Checker, triples: Iterable | None = None):
        n = self.dim
        if triples is None:
            triples = ((i, j, k) for i in range(n) for j in range(n) for k in range(n))
        for i, j, k in triples:
            left = self.mul_vec(self.mul(i, j), {k: 1})
            right = self.mul_vec({i: 1}, self.mul(j, k))
            ck.record("associative", not _clean(vec_add(left, right, -1)), f"e{i} e{j} e{k}")

    def cohomology(self) -> "Cohomology":
        return Cohomology(self)


@dataclass
class _Block:
    indices: list
    local: dict
    boundaries: Subspace
    cycles: Subspace
    reps: list          # global sparse vectors
    reducer: Reducer
    nb: int


class Cohomology:
    """Cohomology of a :class:`DGAlgebra`, block by block, with chosen representatives."""

    def __init__(self, alg: DGAlgebra):
        self.alg = alg
        sources: dict = {}
        for g in alg.blocks:
            sources.setdefault(alg.shift(g), []).append(g)
        self.blocks: dict = {}
        for g, idx in sorted(alg.blocks.items()):
            local = {i: a for a, i in enumerate(idx)}
            tgt = alg.blocks.get(alg.shift(g), [])
            tloc = {i: a for a, i in enumerate(tgt)}
            cols = [{tloc[k]: c for k, c in alg.diff[i].items()} for i in idx]
            cycles = kernel_basis(RatMatrix.from_columns(cols, len(tgt)))
            red = Reducer(len(idx))
            bvecs = []
            for h in sources.get(g, ()):
                for i in alg.blocks[h]:
                    v = {local[k]: c for k, c in alg.diff[i].items()}
                    if v and red.add(v):
                        bvecs.append(v)
            bnd = Subspace(len(idx), tuple(bvecs))
            reps_local = quotient_basis(bnd, cycles).basis
            reducer = Reducer(len(idx), list(bvecs) + list(reps_local))
            reps = [{idx[a]: c for a, c in v.items()} for v in reps_local]
            self.blocks[g] = _Block(idx, local, bnd, cycles, reps, reducer, len(bvecs))

    def dims(self) -> dict:
        """Nonzero cohomology dimensions per grading key."""
        return {g: len(b.reps) for g, b in self.blocks.items() if b.reps}

    def reps(self, g) -> list:
        return list(self.blocks[g].reps) if g in self.blocks else []

    def betti(self) -> dict:
        out: dict = {}
        for g, n in self.dims().items():
            t = self.alg.total(g)
            out[t] = out.get(t, 0) + n
        return dict(sorted(out.items()))

    def euler_characteristic(self) -> int:
        return sum(sign(n) * b for n, b in self.betti().items())

    def project(self, g, v: Mapping):
        """Coordinates of the class of a cycle in block g; None if v is not a cycle there."""
        blk = self.blocks.get(g)
        if blk is None:
            return {} if not _clean(v) else None
        loc = {}
        for k, c in v.items():
            if c:
                if k not in blk.local:
                    return None
                loc[blk.local[k]] = c
        rem, coords = blk.reducer.reduce(loc)
        if rem:
            return None
        return {i - blk.nb: c for i, c in coords.items() if i >= blk.nb and c}

    def boundary_part(self, g, v: Mapping) -> dict:
        """Boundary component of v in the decomposition B + span(reps)."""
        blk = self.blocks[g]
        loc = {blk.local[k]: c for k, c in v.items() if c}
        _, coords = blk.reducer.reduce(loc)
        out: dict = {}
        for i, c in coords.items():
            if i < blk.nb:
                vec_add(out, blk.boundaries.basis[i], c)
        return {blk.indices[a]: c for a, c in out.items() if c}

    def second_section(self) -> dict:
        """Deterministic alternative representatives: reps plus a fixed boundary."""
        out = {}
        for g, blk in self.blocks.items():
            extra = blk.boundaries.basis[0] if blk.boundaries.basis else {}
            glob = {blk.indices[a]: c for a, c in extra.items()}
            out[g] = [vec_add(dict(r), glob, 1) for r in blk.reps]
        return out

    def multiplication_table(self, section: Mapping | None = None) -> dict:
        """{((g1, i), (g2, j)): {(g, k): coef}} on the chosen representatives."""
        alg = self.alg
        if section is None:
            section = {g: b.reps for g, b in self.blocks.items()}
        table = {}
        keys = [g for g in sorted(self.blocks) if self.blocks[g].reps]
        for g1 in keys:
            for g2 in keys:
                g = alg.add(g1, g2)
                for i, u in enumerate(section[g1]):
                    for j, v in enumerate(section[g2]):
                        prod = alg.mul_vec(u, v)
                        coords = self.project(g, prod)
                        if coords is None:
                            raise ArithmeticError("product of cocycles is not a cocycle")
                        if coords:
                            table[((g1, i), (g2, j))] = {(g, k): c for k, c in sorted(coords.items())}
        return table

    def representative_independent(self) -> bool:
        return self.multiplication_table() == self.multiplication_table(self.second_section())

    def closed_section(self) -> bool:
        """Whether span(reps) is closed under multiplication (a multiplicative section)."""
        alg = self.alg
        keys = [g for g in sorted(self.blocks) if self.blocks[g].reps]
        for g1 in keys:
            for g2 in keys:
                g = alg.add(g1, g2)
                for u in self.blocks[g1].reps:
                    for v in self.blocks[g2].reps:
                        prod = _clean(alg.mul_vec(u, v))
                        if prod and g not in self.blocks:
                            return False
                        if prod and self.boundary_part(g, prod):
                            return False
        return True
