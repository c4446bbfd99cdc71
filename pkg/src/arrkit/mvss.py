"""The Mayer-Vietoris E1 page as a bigraded CDGA, and its cohomology.

Basis elements are tensors alpha (x) a with alpha a basis element of OS_x and
a a basis element of the support space at x.  The bidegree is (-r(x), q)
with q the degree of a; the total degree is q - r(x) and the weight is q.

Sign conventions (OS factor written first):

* d(alpha (x) a) = sum over lower covers y of d_yx(alpha) (x) g_yx(a)
* (alpha (x) a)(beta (x) b) = (-1)^(|a||beta|) m(alpha, beta) (x) ab
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .cdga import Cohomology, DGAlgebra, sign
from .exactla import RatMatrix, rank, vec_add
from .oscomplex import OSAlgebra, Report, _Checker, os_algebra
from .poset import GradedPoset
from .supportcoh import SupportModule

log = logging.getLogger(__name__)

__all__ = [
    "PosetMismatch",
    "NotAutomorphism",
    "E1Algebra",
    "build_e1_lattice",
    "build_e1_cubical",
    "CohomologyRing",
    "cohomology",
    "poincare_polynomial",
    "formality_report",
    "verify_e1",
    "GroupAction",
    "group_action_on_e1",
    "report_json",
    "render_e_table",
]


class PosetMismatch(ValueError):
    pass


class NotAutomorphism(ValueError):
    pass


def _bishift(g):
    return (g[0] + 1, g[1])


def _biadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _bitotal(g):
    return g[0] + g[1]


class E1Algebra(DGAlgebra):
    """Second-quadrant bigraded CDGA; keys are (x, os index, support index)."""

    def __init__(self, poset: GradedPoset, os: OSAlgebra, supp: SupportModule):
        self.poset, self.os, self.supp = poset, os, supp
        keys, grading = [], []
        for x in poset.elements:
            for m in range(os.dim(x)):
                for h in range(supp.dim(x)):
                    keys.append((x, m, h))
                    grading.append((-poset.rank[x], supp.degree(x, h)))
        index = {k: i for i, k in enumerate(keys)}
        diff = []
        for x, m, h in keys:
            col: dict = {}
            for y in poset.lower_covers(x):
                dv = os.boundary[(y, x)].column(m)
                if not dv:
                    continue
                gv = supp.g(y, x).column(h)
                for m2, a in dv.items():
                    for h2, b in gv.items():
                        k = index[(y, m2, h2)]
                        col[k] = col.get(k, 0) + a * b
            diff.append(col)
        unit = index.get((poset.bottom, 0, _unit_index(supp, poset.bottom)))
        super().__init__(keys, grading, diff, self._basis_mul, _bishift, _biadd, _bitotal, unit)

    def _basis_mul(self, i, j) -> dict:
        x, m, h = self.keys[i]
        y, m2, h2 = self.keys[j]
        osp = self.os.product(x, m, y, m2)
        if not osp:
            return {}
        sp = self.supp.product(x, h, y, h2)
        if not sp:
            return {}
        s = sign(self.supp.degree(x, h) * self.poset.rank[y])
        out: dict = {}
        index = self.index
        for t, ov in osp.items():
            sv = sp.get(t)
            if not sv:
                continue
            for a, c in ov.items():
                for b, e in sv.items():
                    k = index[(t, a, b)]
                    out[k] = out.get(k, 0) + s * c * e
        return out

    def bidegree(self, i: int) -> tuple:
        return self.grading[i]

    def weight(self, i: int) -> int:
        return self.grading[i][1]

    def label(self, i: int) -> str:
        x, m, h = self.keys[i]
        mono = ",".join(self.poset.atoms[a] for a in self.os.reps[x][m])
        return f"{x}:[{mono}]:{self.supp.label(x, h)}"

    def d1_blocks(self) -> dict:
        """{(p, q): RatMatrix from block (p, q) to block (p + 1, q)}."""
        out = {}
        for g, idx in sorted(self.blocks.items()):
            tgt = self.blocks.get(_bishift(g), [])
            tloc = {i: a for a, i in enumerate(tgt)}
            cols = [{tloc[k]: c for k, c in self.diff[i].items()} for i in idx]
            out[g] = RatMatrix.from_columns(cols, len(tgt))
        return out

    def nonzero_pairs(self):
        """Basis pairs on which some term of the Leibniz identity can be nonzero.

        A pair over (x, y) matters when (x, y), (x', y) or (x, y') has an
        independent target for lower covers x', y'.
        """
        L = self.poset
        by_x: dict = {}
        for i, (x, _, _) in enumerate(self.keys):
            by_x.setdefault(x, []).append(i)
        for x in L.elements:
            xs = (x,) + L.lower_covers(x)
            for y in L.elements:
                ys = (y,) + L.lower_covers(y)
                if not (any(L.independent_targets(a, y) for a in xs)
                        or any(L.independent_targets(x, b) for b in ys)):
                    continue
                for i in by_x.get(x, ()):
                    for j in by_x.get(y, ()):
                        yield i, j


def _unit_index(supp: SupportModule, x) -> int:
    for h, (_, d) in enumerate(supp.spaces[x]):
        if d == 0:
            return h
    return -1


def build_e1_lattice(L: GradedPoset, os: OSAlgebra | None, supp: SupportModule) -> E1Algebra:
    if os is None:
        os = os_algebra(L)
    if os.poset != L or supp.poset != L:
        raise PosetMismatch("OS algebra, support module and lattice must share one poset")
    e1 = E1Algebra(L, os, supp)
    log.info("E1 page: %d basis elements in %d blocks", e1.dim, len(e1.blocks))
    return e1


def build_e1_cubical(atoms, supp: SupportModule) -> E1Algebra:
    """E1 over the Boolean lattice of the atoms (full Grassmann algebra)."""
    L = supp.poset
    if len(L.atoms) != len(atoms) or len(L) != 2 ** len(atoms):
        raise PosetMismatch("support module is not indexed by all subsets of the atoms")
    if any(len(L.atoms_below(x)) != L.rank[x] for x in L.elements):
        raise PosetMismatch("support module poset is not Boolean")
    return build_e1_lattice(L, os_algebra(L), supp)


# ---------------------------------------------------------------------------

@dataclass
class CohomologyRing:
    e1: E1Algebra
    coh: Cohomology
    dims: dict                 # (p, q) -> dim
    betti: dict                # n -> b_n
    weights: dict              # n -> {q: dim}
    table: dict = field(default_factory=dict)

    def betti_list(self, length: int | None = None) -> list:
        top = max(self.betti, default=0)
        n = max(top + 1, length or 0)
        return [self.betti.get(k, 0) for k in range(n)]

    def euler_characteristic(self) -> int:
        return sum(sign(n) * b for n, b in self.betti.items())


def cohomology(e1: E1Algebra, ring: bool = True) -> CohomologyRing:
    coh = e1.cohomology()
    dims = coh.dims()
    weights: dict = {}
    for (p, q), n in dims.items():
        weights.setdefault(p + q, {})[q] = weights.get(p + q, {}).get(q, 0) + n
    table = coh.multiplication_table() if ring else {}
    return CohomologyRing(e1, coh, dims, coh.betti(), dict(sorted(weights.items())), table)


def poincare_polynomial(ring: CohomologyRing) -> list:
    """Coefficients [b_0, b_1, ...] of sum b_n t^n."""
    return ring.betti_list()


def formality_report(e1: E1Algebra, ring: CohomologyRing) -> dict:
    """Sufficient check: the chosen representatives span a subalgebra."""
    closed = ring.coh.closed_section()
    zero_d = all(not v for v in e1.diff)
    return {"verdict": "formal by section" if closed else "inconclusive",
            "multiplicative_section": closed,
            "zero_differential": zero_d}


def verify_e1(e1: E1Algebra, associativity: bool = False) -> Report:
    """d^2, Leibniz, commutativity, weight preservation and Euler characteristic."""
    ck = _Checker()
    for i in range(e1.dim):
        p, q = e1.grading[i]
        ck.record("second_quadrant", p <= 0 and q >= 0, f"e{i} at {(p, q)}")
        ok = all(e1.grading[k][1] == q for k in e1.diff[i])
        ck.record("d1_preserves_weight", ok, f"e{i}")
    e1.check(ck, pairs=e1.nonzero_pairs(), associativity=associativity)
    if not ck.checks.get("d_squared_zero", True):
        ck.record("euler_characteristic", False, "E2 undefined: d1 does not square to zero")
        return ck.report()
    coh = e1.cohomology()
    ck.record("euler_characteristic", e1.euler_characteristic() == coh.euler_characteristic(),
              f"E1 {e1.euler_characteristic()} vs E2 {coh.euler_characteristic()}")
    return ck.report()


# ---------------------------------------------------------------------------

@dataclass
class GroupAction:
    element_map: dict
    matrix: RatMatrix
    report: Report

    def blocks(self, e1: E1Algebra) -> dict:
        out = {}
        for g, idx in sorted(e1.blocks.items()):
            loc = {i: a for a, i in enumerate(idx)}
            cols = [{loc[k]: c for k, c in self.matrix.column(i).items()} for i in idx]
            out[g] = RatMatrix.from_columns(cols, len(idx))
        return out


def group_action_on_e1(e1: E1Algebra, atom_map: Mapping, support_maps: Mapping | None = None) -> GroupAction:
    """Matrix of the automorphism of E1 induced by an atom permutation.

    ``support_maps`` gives, for each x, the matrix H_x -> H_{sigma(x)}; by
    default the identity (same basis on both sides).
    """
    L, os, supp = e1.poset, e1.os, e1.supp
    if sorted(atom_map) != sorted(L.atoms) or sorted(atom_map.values()) != sorted(L.atoms):
        raise NotAutomorphism("atom map is not a permutation of the atoms")
    try:
        emap = L.induced_map(atom_map)
    except ValueError as exc:
        raise NotAutomorphism(str(exc)) from exc
    smaps = {}
    for x in L.elements:
        sx = emap[x]
        if support_maps is not None:
            smaps[x] = support_maps[x]
        else:
            if supp.spaces[x] != supp.spaces[sx]:
                raise NotAutomorphism(f"support spaces at {x} and {sx} differ")
            smaps[x] = RatMatrix.identity(supp.dim(x))
        m = smaps[x]
        for (a, b) in m.entries:
            if supp.degree(sx, a) != supp.degree(x, b):
                raise NotAutomorphism(f"support map at {x} is not degree-preserving")
    for y, x in L.covers:
        if smaps[y] @ supp.g(y, x) != supp.g(emap[y], emap[x]) @ smaps[x]:
            raise NotAutomorphism(f"support maps do not commute with g on {y}<:{x}")
    aidx = L.atom_index
    perm = {aidx[a]: aidx[b] for a, b in atom_map.items()}
    os_maps = {}
    for x in L.elements:
        cols = []
        for mono in os.reps[x]:
            img = [perm[a] for a in mono]
            s = _perm_sign(img)
            cols.append(os.normal_form(emap[x], {tuple(sorted(img)): s}))
        os_maps[x] = RatMatrix.from_columns(cols, os.dim(emap[x]))
    cols = []
    for x, m, h in e1.keys:
        sx = emap[x]
        col: dict = {}
        for m2, a in os_maps[x].column(m).items():
            for h2, b in smaps[x].column(h).items():
                k = e1.index[(sx, m2, h2)]
                col[k] = col.get(k, 0) + a * b
        cols.append(col)
    phi = RatMatrix.from_columns(cols, e1.dim)
    ck = _Checker()
    D = e1.diff_matrix()
    ck.record("commutes_with_d1", phi @ D == D @ phi)
    ck.record("preserves_bidegree",
              all(e1.grading[i] == e1.grading[j] for (i, j) in phi.entries))
    ck.record("invertible", rank(phi) == e1.dim)
    for i, j in e1.nonzero_pairs():
        lhs = phi.apply(e1.mul(i, j))
        rhs = e1.mul_vec(phi.column(i), phi.column(j))
        ck.record("multiplicative", not {k: c for k, c in vec_add(lhs, rhs, -1).items() if c},
                  f"e{i} e{j}")
    for (a, b), c in supp_product_checks(supp, emap, smaps):
        ck.record("support_products_equivariant", c, f"{a} {b}")
    rep = ck.report()
    if not rep.checks.get("commutes_with_d1", False):
        raise NotAutomorphism("induced map does not commute with d1")
    return GroupAction(emap, phi, rep)


def supp_product_checks(supp, emap, smaps):
    L = supp.poset
    for x in L.elements:
        for y in L.elements:
            if not L.independent_targets(x, y):
                continue
            for i in range(supp.dim(x)):
                for j in range(supp.dim(y)):
                    lhs: dict = {}
                    for t, v in supp.product(x, i, y, j).items():
                        w = smaps[t].apply(v)
                        if w:
                            vec_add(lhs.setdefault(emap[t], {}), w)
                    rhs: dict = {}
                    for a, c in smaps[x].column(i).items():
                        for b, e in smaps[y].column(j).items():
                            for t, v in supp.product(emap[x], a, emap[y], b).items():
                                vec_add(rhs.setdefault(t, {}), v, c * e)
                    ok = all(not {k: c for k, c in vec_add(dict(lhs.get(t, {})), rhs.get(t, {}), -1).items() if c}
                             for t in set(lhs) | set(rhs))
                    yield (x, y), ok


def _perm_sign(seq) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


# ---------------------------------------------------------------------------

def _key(g) -> str:
    return f"({g[0]},{g[1]})"


def report_json(e1: E1Algebra, ring: CohomologyRing, include_ring: bool = True) -> dict:
    weights = {str(n): {str(q): d for q, d in sorted(w.items())} for n, w in ring.weights.items()}
    out = {
        "e1": {_key(g): n for g, n in sorted(e1.dims().items()) if n},
        "e2": {_key(g): n for g, n in sorted(ring.dims.items())},
        "betti": ring.betti_list(),
        "weights": weights,
        "poincare": poincare_polynomial(ring),
    }
    if include_ring:
        table = []
        for ((g1, i), (g2, j)), v in sorted(ring.table.items()):
            table.append({"left": [_key(g1), i], "right": [_key(g2), j],
                          "value": {f"{_key(g)}#{k}": _frac(c) for (g, k), c in sorted(v.items())}})
        out["ring"] = table
    return out


def _frac(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_e_table(page: Mapping, title: str = "") -> str:
    """Second-quadrant grid: rows q descending, columns p ascending, axis labels right and bottom."""
    cells = {tuple(k): v for k, v in page.items() if v}
    ps = [p for p, _ in cells] or [0]
    qs = [q for _, q in cells] or [0]
    pcols = list(range(min(min(ps), 0), max(max(ps), 0) + 1))
    qrows = list(range(max(max(qs), 0), min(min(qs), 0) - 1, -1))
    width = max([len(str(v)) for v in cells.values()] + [len(str(p)) for p in pcols] + [1])
    lines = [title] if title else []
    for q in qrows:
        row = " ".join(str(cells.get((p, q), ".")).rjust(width) for p in pcols)
        lines.append(f"{row} | {q}")
    lines.append("-" * (len(pcols) * (width + 1) - 1) + "-+")
    lines.append(" ".join(str(p).rjust(width) for p in pcols) + "   p\\q")
    return "\n".join(lines)
