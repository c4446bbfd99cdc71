"""Orlik-Solomon algebras of locally geometric posets via the atomic complex.

Monomials are increasing tuples of atom positions (indices into
``poset.atoms``); the atom order of the poset is the sign convention.

For each element x the atomic complex D_x is spanned by the monomials whose
atoms all lie below x and whose least upper bound inside [0, x] is x.  Its
inner differential keeps the Koszul terms whose label is still x; the terms
whose label drops to a lower cover y give the cross maps.  The cohomology of
D_x sits in degree -r(x) and is the Orlik-Solomon component OS_x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .exactla import RatMatrix, Reducer, rank, vec_add
from .poset import GradedPoset, NotLocallyGeometric

__all__ = [
    "AcyclicityFailure",
    "LabelMismatch",
    "NotLocallyGeometric",
    "koszul_partial",
    "shuffle_sign",
    "AtomicComplex",
    "atomic_complex",
    "OSAlgebra",
    "os_algebra",
    "os_normal_form",
    "Report",
    "verify_chain_algebra",
]


class AcyclicityFailure(RuntimeError):
    pass


class LabelMismatch(ValueError):
    pass


def koszul_partial(mono) -> dict:
    """Full Koszul contraction: sum_k (-1)^(k-1) mono without its k-th entry."""
    out = {}
    for k in range(len(mono)):
        out[tuple(mono[:k]) + tuple(mono[k + 1:])] = 1 if k % 2 == 0 else -1
    return out


def shuffle_sign(a, b) -> int:
    """Sign of the permutation sorting the concatenation a + b (0 if they overlap)."""
    if set(a) & set(b):
        return 0
    inv = sum(1 for x in a for y in b if x > y)
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class Report:
    """Named pass/fail checks with a few failure messages each."""

    checks: Mapping[str, bool]
    details: Mapping[str, list] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list:
        return [k for k, v in self.checks.items() if not v]

    def to_json(self) -> dict:
        return {"passed": self.passed,
                "checks": dict(sorted(self.checks.items())),
                "details": {k: list(v) for k, v in sorted(self.details.items()) if v}}

    def __str__(self):
        lines = [f"{'PASS' if ok else 'FAIL'} {k}" for k, ok in self.checks.items()]
        return "\n".join(lines)


class _Checker:
    def __init__(self):
        self.checks: dict = {}
        self.details: dict = {}

    def record(self, name: str, ok: bool, msg: str = ""):
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok and msg:
            lst = self.details.setdefault(name, [])
            if len(lst) < 5:
                lst.append(msg)

    def report(self) -> Report:
        return Report(dict(self.checks), dict(self.details))


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AtomicComplex:
    poset: GradedPoset
    levels: Mapping      # x -> {k: tuple of monomials of size k with label x}

    def inner(self, x, k) -> RatMatrix:
        """Inner differential of D_x from size k to size k-1 (columns: size k)."""
        src = self.levels[x].get(k, ())
        dst = self.levels[x].get(k - 1, ())
        pos = {m: i for i, m in enumerate(dst)}
        cols = []
        for m in src:
            col = {}
            for f, c in koszul_partial(m).items():
                if f in pos:
                    col[pos[f]] = c
            cols.append(col)
        return RatMatrix.from_columns(cols, len(dst))

    def cohomology_dims(self, x) -> dict:
        """{degree: dim} of H(D_x, inner); degrees are -k."""
        lv = self.levels[x]
        ranks = {k: rank(self.inner(x, k)) for k in lv}
        out = {}
        for k, mons in lv.items():
            h = len(mons) - ranks.get(k, 0) - ranks.get(k + 1, 0)
            if h:
                out[-k] = h
        return out


def atomic_complex(L: GradedPoset) -> AtomicComplex:
    """Per-element atomic complexes D_x; raises NotLocallyGeometric."""
    L.require_locally_geometric()
    aidx = L.atom_index
    levels = {}
    for x in L.elements:
        below = [aidx[a] for a in L.atoms_below(x)]
        lv: dict = {}
        for k in range(L.rank[x], len(below) + 1):
            for sub in itertools.combinations(below, k):
                if L.join_within(x, [L.atoms[i] for i in sub]) == x:
                    lv.setdefault(k, []).append(sub)
        levels[x] = {k: tuple(v) for k, v in lv.items()}
    return AtomicComplex(L, levels)


@dataclass(frozen=True, eq=False)
class OSAlgebra:
    poset: GradedPoset
    top: Mapping          # x -> monomials of size r(x) labelled x
    reps: Mapping         # x -> chosen basis monomials of OS_x
    relations: Mapping    # x -> basis of the image of the inner differential
    boundary: Mapping     # (y, x) -> RatMatrix  dim(y) x dim(x)

    def dim(self, x) -> int:
        return len(self.reps[x])

    def degree(self, x) -> int:
        return -self.poset.rank[x]

    @cached_property
    def _reducers(self) -> dict:
        out = {}
        for x in self.poset.elements:
            pos = {m: i for i, m in enumerate(self.top[x])}
            gens = list(self.relations[x]) + [{pos[m]: 1} for m in self.reps[x]]
            red = Reducer(len(pos), gens)
            out[x] = (pos, red, len(self.relations[x]))
        return out

    def normal_form(self, x, vec: Mapping) -> dict:
        """Coordinates in the chosen basis of OS_x of a combination of monomials."""
        pos, red, nrel = self._reducers[x]
        v = {}
        for m, c in vec.items():
            m = tuple(m)
            if m not in pos:
                raise LabelMismatch(f"monomial {m} does not have label {x!r} at top size")
            if c:
                v[pos[m]] = v.get(pos[m], 0) + Fraction(c)
        rem, coords = red.reduce(v)
        if rem:
            raise AcyclicityFailure(f"normal form at {x!r} left a remainder")
        return {i - nrel: c for i, c in coords.items() if i >= nrel and c}

    def lower(self, x) -> tuple:
        return self.poset.lower_covers(x)

    def upper(self, x) -> tuple:
        return self.poset.upper_covers(x)

    def product_targets(self, x, y) -> tuple:
        return self.poset.independent_targets(x, y)

    @cached_property
    def _product_cache(self) -> dict:
        return {}

    def product(self, x, i, y, j) -> dict:
        """Product of basis elements: {t: {k: coef}} over independent targets t."""
        key = (x, i, y, j)
        cache = self._product_cache
        if key in cache:
            return cache[key]
        I, J = self.reps[x][i], self.reps[y][j]
        out = {}
        s = shuffle_sign(I, J)
        if s:
            K = tuple(sorted(I + J))
            L = self.poset
            names = [L.atoms[a] for a in K]
            for t in self.product_targets(x, y):
                if L.join_within(t, names) == t:
                    nf = self.normal_form(t, {K: s})
                    if nf:
                        out[t] = nf
        cache[key] = out
        return out

    def product_vec(self, x, u: Mapping, y, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for t, vec in self.product(x, i, y, j).items():
                    vec_add(out.setdefault(t, {}), vec, a * b)
        return {t: w for t, w in out.items() if w}

    def d(self, x, v: Mapping) -> dict:
        """Total differential of a vector in OS_x: {y: vector in OS_y}."""
        out = {}
        for y in self.lower(x):
            w = self.boundary[(y, x)].apply(v)
            if w:
                out[y] = w
        return out

    def with_boundary(self, cover, matrix: RatMatrix) -> "OSAlgebra":
        b = dict(self.boundary)
        b[cover] = matrix
        return replace(self, boundary=b)

    def to_json(self) -> dict:
        L = self.poset
        el = {x: {"rank": L.rank[x], "dim": self.dim(x),
                  "basis": [[L.atoms[a] for a in m] for m in self.reps[x]]}
              for x in sorted(L.elements)}
        bd = {f"{y}<:{x}": m.to_json() for (y, x), m in sorted(self.boundary.items())}
        prods = {}
        for x in sorted(L.elements):
            for y in sorted(L.elements):
                for t in self.product_targets(x, y):
                    entries = []
                    for i in range(self.dim(x)):
                        for j in range(self.dim(y)):
                            v = self.product(x, i, y, j).get(t)
                            if v:
                                entries.append([i, j, {str(k): _s(c) for k, c in sorted(v.items())}])
                    if entries:
                        prods[f"{x}*{y}->{t}"] = entries
        return {"atoms": list(L.atoms), "elements": el, "boundary": bd, "products": prods}


def _s(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def os_algebra(L: GradedPoset) -> OSAlgebra:
    """OS_x as H^{-r(x)}(D_x) with lexicographically first monomial representatives."""
    ac = atomic_complex(L)
    top, reps, rels = {}, {}, {}
    for x in L.elements:
        r = L.rank[x]
        mons = ac.levels[x].get(r, ())
        top[x] = mons
        img = ac.inner(x, r + 1)
        red = Reducer(len(mons))
        relv = []
        for j in range(img.cols):
            col = img.column(j)
            if col and red.add(col):
                relv.append(col)
        chosen = []
        for i, m in enumerate(mons):
            if red.add({i: 1}):
                chosen.append(m)
        top[x], reps[x], rels[x] = mons, tuple(chosen), tuple(relv)
        mu = abs(L.moebius(x))
        if len(chosen) != mu:
            raise AcyclicityFailure(f"dim OS at {x!r} is {len(chosen)}, expected |mu| = {mu}")
    alg = OSAlgebra(L, top, reps, rels, {})
    boundary = {}
    for x in L.elements:
        for y in L.lower_covers(x):
            cols = []
            for m in reps[x]:
                terms = {}
                for f, c in koszul_partial(m).items():
                    if L.join_within(x, [L.atoms[a] for a in f]) == y:
                        terms[f] = c
                cols.append(alg.normal_form(y, terms) if terms else {})
            boundary[(y, x)] = RatMatrix.from_columns(cols, len(reps[y]))
    return replace(alg, boundary=boundary)


def os_normal_form(alg: OSAlgebra, x, vec: Mapping) -> dict:
    """Coordinates of a monomial combination; monomials may use atom ids or positions."""
    idx = alg.poset.atom_index
    conv = {}
    for m, c in vec.items():
        key = tuple(sorted(idx[a] if not isinstance(a, int) else a for a in m))
        sign = _sort_sign(tuple(idx[a] if not isinstance(a, int) else a for a in m))
        conv[key] = conv.get(key, 0) + sign * Fraction(c)
    return alg.normal_form(x, conv)


def _sort_sign(seq) -> int:
    if len(set(seq)) != len(seq):
        return 0
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def _add_nested(acc: dict, part: Mapping, c=1):
    for t, v in part.items():
        vec_add(acc.setdefault(t, {}), v, c)


def _clean(d: dict) -> dict:
    return {k: {i: c for i, c in v.items() if c} for k, v in d.items()
            if any(c for c in v.values())}


def verify_chain_algebra(alg: OSAlgebra) -> Report:
    """Check d^2 = 0, Leibniz, commutativity, acyclicity and dimensions."""
    L = alg.poset
    ck = _Checker()
    # dimensions
    for x in L.elements:
        ok = alg.dim(x) == abs(L.moebius(x))
        ck.record("dim_equals_abs_moebius", ok, f"{x}: {alg.dim(x)} vs {L.moebius(x)}")
    ck.record("bottom_one_dimensional", alg.dim(L.bottom) == 1)
    # d^2
    for x in L.elements:
        for i in range(alg.dim(x)):
            acc: dict = {}
            for y, v in alg.d(x, {i: 1}).items():
                _add_nested(acc, alg.d(y, v))
            acc = _clean(acc)
            ck.record("d_squared_zero", not acc, f"d^2 of basis {i} at {x}")
    # Leibniz and commutativity
    for x in L.elements:
        for y in L.elements:
            if not alg.product_targets(x, y):
                continue
            sgn_a = -1 if L.rank[x] % 2 else 1
            comm = -1 if (L.rank[x] * L.rank[y]) % 2 else 1
            for i in range(alg.dim(x)):
                for j in range(alg.dim(y)):
                    ab = alg.product(x, i, y, j)
                    ba = alg.product(y, j, x, i)
                    diff = _clean({t: vec_add(dict(ab.get(t, {})), ba.get(t, {}), -comm)
                                   for t in set(ab) | set(ba)})
                    ck.record("graded_commutative", not diff, f"{x}[{i}]*{y}[{j}]")
                    lhs: dict = {}
                    for t, v in ab.items():
                        _add_nested(lhs, alg.d(t, v))
                    rhs: dict = {}
                    for x2, u in alg.d(x, {i: 1}).items():
                        _add_nested(rhs, alg.product_vec(x2, u, y, {j: 1}))
                    for y2, w in alg.d(y, {j: 1}).items():
                        _add_nested(rhs, alg.product_vec(x, {i: 1}, y2, w), sgn_a)
                    _add_nested(lhs, rhs, -1)
                    ck.record("leibniz", not _clean(lhs), f"{x}[{i}]*{y}[{j}]")
    # acyclicity of OS restricted to [0, x]
    for x in L.elements:
        if x == L.bottom:
            continue
        elems = L.interval(L.bottom, x)
        by_rank: dict = {}
        for t in elems:
            by_rank.setdefault(L.rank[t], []).append(t)
        offs, total = {}, {}
        for r_, ts in by_rank.items():
            o = 0
            for t in ts:
                offs[t] = o
                o += alg.dim(t)
            total[r_] = o
        ranks = {}
        for r_ in range(1, L.rank[x] + 1):
            cols = []
            for t in by_rank.get(r_, ()):
                for i in range(alg.dim(t)):
                    col = {}
                    for y, v in alg.d(t, {i: 1}).items():
                        for k, c in v.items():
                            col[offs[y] + k] = c
                    cols.append(col)
            ranks[r_] = rank(RatMatrix.from_columns(cols, total.get(r_ - 1, 0)))
        h = [total[r_] - ranks.get(r_, 0) - ranks.get(r_ + 1, 0) for r_ in total]
        ck.record("interval_acyclic", all(v == 0 for v in h), f"[0,{x}] homology {h}")
    # concentration of the atomic complex
    ac = atomic_complex(L)
    for x in L.elements:
        dims = ac.cohomology_dims(x)
        ok = set(dims) <= {-L.rank[x]} and dims.get(-L.rank[x], 0) == alg.dim(x)
        ck.record("atomic_complex_concentrated", ok, f"{x}: {dims}")
    return ck.report()
