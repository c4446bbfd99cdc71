"""Cubical diagrams of dg-algebras, their Cech complexes and the algebra A-hat.

A cubical diagram over an ordered atom set N assigns a finite-dimensional
(possibly non-unital) dg-algebra A^I to every subset I of N and a map
g_JI: A^I -> A^J to every inclusion I in J.

The algebra A-hat^N has basis elements (dmu_I)^K a for I in K in N and a a
basis element of A^{K - I}, in degree |a| - |I|.  Its differential is

    sum_{p in I} s_p [ (dmu_{I-p})^K g(a) - (dmu_{I-p})^{K-p} a ]
        + (-1)^{|I|} (dmu_I)^K da

with s_p = (-1)^(position of p in I), and the product of (dmu_I)^K a and
(dmu_I')^K' a' is (-1)^(|a||I'|) (dmu_I dmu_I')^{K K'} g(a) g(a') when
(K - I) u (K' - I') = KK' - II', and zero otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cdga import DGAlgebra, sign
from .errors import InvariantViolation, SchemaError
from .exactla import RatMatrix, rank_of_vectors, to_fraction, vec_add
from .oscomplex import Report, _Checker, shuffle_sign

__all__ = [
    "SmallDGA",
    "CubicalDiagram",
    "cech",
    "HatAlgebra",
    "hat",
    "verify_hat",
    "trivial_diagram",
    "single_atom_example",
    "truncated_polynomial_diagram",
    "koszul_diagram",
    "BUILTIN_DIAGRAMS",
]


def _int_shift(g):
    return g + 1


def _int_add(a, b):
    return a + b


def _ident(g):
    return g


@dataclass(frozen=True, eq=False)
class SmallDGA:
    """A finite-dimensional graded-commutative dg-algebra (unit optional)."""

    degrees: tuple
    diff: tuple                      # sparse column per basis element
    table: Mapping                   # (i, j) -> {k: coef}
    unit: int | None = None
    labels: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def mul(self, i, j) -> dict:
        return self.table.get((i, j), {})

    def mul_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                p = self.mul(i, j)
                if p:
                    vec_add(out, p, a * b)
        return {k: c for k, c in out.items() if c}

    def d(self, v: Mapping) -> dict:
        out: dict = {}
        for i, c in v.items():
            vec_add(out, self.diff[i], c)
        return {k: c for k, c in out.items() if c}

    def as_dga(self) -> DGAlgebra:
        return DGAlgebra(range(self.dim), self.degrees, self.diff, self.mul,
                         _int_shift, _int_add, _ident, self.unit)

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees),
                "labels": list(self.labels),
                "differential": [{str(k): _fmt(c) for k, c in sorted(col.items())} for col in self.diff],
                "products": [[i, j, {str(k): _fmt(c) for k, c in sorted(v.items())}]
                             for (i, j), v in sorted(self.table.items()) if v],
                "unit": self.unit}

    @classmethod
    def from_json(cls, obj: Mapping) -> "SmallDGA":
        try:
            degrees = tuple(int(d) for d in obj["degrees"])
            diff = tuple({int(k): to_fraction(c) for k, c in col.items()}
                         for col in obj.get("differential", [{}] * len(degrees)))
            table = {(int(i), int(j)): {int(k): to_fraction(c) for k, c in v.items()}
                     for i, j, v in obj.get("products", [])}
            labels = tuple(obj.get("labels", [])) or tuple(f"e{i}" for i in range(len(degrees)))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad dg-algebra: {exc}") from exc
        if len(diff) != len(degrees):
            raise SchemaError("differential must list one column per basis element")
        return cls(degrees, diff, table, obj.get("unit"), labels)


def _fmt(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _subsets(items: Sequence) -> list:
    return [tuple(s) for k in range(len(items) + 1) for s in itertools.combinations(items, k)]


@dataclass(frozen=True, eq=False)
class CubicalDiagram:
    """Atoms are positions 0..n-1; subsets are increasing tuples of positions."""

    atoms: tuple
    algebras: Mapping       # subset -> SmallDGA
    maps: Mapping           # (I, J) with J = I + one atom -> RatMatrix  A^I -> A^J

    def subsets(self, within: Sequence | None = None) -> list:
        return _subsets(range(len(self.atoms)) if within is None else sorted(within))

    def g(self, J: tuple, I: tuple) -> RatMatrix:
        """Structure map A^I -> A^J for I in J, composed along the increasing chain."""
        I, J = tuple(sorted(I)), tuple(sorted(J))
        if not set(I) <= set(J):
            raise ValueError(f"{I} is not contained in {J}")
        m = RatMatrix.identity(self.algebras[I].dim)
        cur = I
        for p in J:
            if p in cur:
                continue
            nxt = tuple(sorted(cur + (p,)))
            m = self.maps[(cur, nxt)] @ m
            cur = nxt
        return m

    def apply_g(self, J, I, v: Mapping) -> dict:
        if tuple(sorted(I)) == tuple(sorted(J)):
            return dict(v)
        return self.g(J, I).apply(v)

    def name(self, I) -> str:
        return "{" + ",".join(str(self.atoms[p]) for p in I) + "}"

    def violations(self) -> list:
        bad = []
        for I, A in self.algebras.items():
            rep = A.as_dga().check(associativity=True)
            if not rep.passed:
                bad.append(f"A^{self.name(I)} fails {rep.failed()}")
        for (I, J), m in self.maps.items():
            A, B = self.algebras[I], self.algebras[J]
            if (m.rows, m.cols) != (B.dim, A.dim):
                bad.append(f"map {self.name(I)}->{self.name(J)} has the wrong shape")
                continue
            for (r, c) in m.entries:
                if A.degrees[c] != B.degrees[r]:
                    bad.append(f"map {self.name(I)}->{self.name(J)} is not of degree 0")
                    break
            for i in range(A.dim):
                if m.apply(A.diff[i]) != {k: c for k, c in B.d(m.column(i)).items() if c}:
                    bad.append(f"map {self.name(I)}->{self.name(J)} does not commute with d")
                    break
            for i in range(A.dim):
                for j in range(A.dim):
                    lhs = m.apply(A.mul(i, j))
                    rhs = B.mul_vec(m.column(i), m.column(j))
                    if {k: c for k, c in vec_add(lhs, rhs, -1).items() if c}:
                        bad.append(f"map {self.name(I)}->{self.name(J)} is not multiplicative")
                        break
        n = len(self.atoms)
        for I in self.subsets():
            rest = [p for p in range(n) if p not in I]
            for p, q in itertools.combinations(rest, 2):
                Ip, Iq = tuple(sorted(I + (p,))), tuple(sorted(I + (q,)))
                Ipq = tuple(sorted(I + (p, q)))
                a = self.maps[(Ip, Ipq)] @ self.maps[(I, Ip)]
                b = self.maps[(Iq, Ipq)] @ self.maps[(I, Iq)]
                if a != b:
                    bad.append(f"square at {self.name(I)} with {self.atoms[p]}, {self.atoms[q]} does not commute")
        return bad

    def validate(self) -> "CubicalDiagram":
        bad = self.violations()
        if bad:
            raise InvariantViolation(bad[0])
        return self

    def restrict(self, J: Sequence) -> "CubicalDiagram":
        """The sub-diagram on the atoms at positions J (renumbered from 0)."""
        J = sorted(J)
        ren = {p: i for i, p in enumerate(J)}
        algs = {tuple(ren[p] for p in I): self.algebras[I] for I in _subsets(J)}
        maps = {(tuple(ren[p] for p in I), tuple(ren[p] for p in K)): m
                for (I, K), m in self.maps.items() if set(K) <= set(J)}
        return CubicalDiagram(tuple(self.atoms[p] for p in J), algs, maps)

    def to_json(self) -> dict:
        return {"atoms": list(self.atoms),
                "algebras": {self.name(I): A.to_json() for I, A in sorted(self.algebras.items())},
                "maps": {f"{self.name(I)}->{self.name(J)}": m.to_json()
                         for (I, J), m in sorted(self.maps.items())}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "CubicalDiagram":
        try:
            atoms = tuple(str(a) for a in obj["atoms"])
            pos = {a: i for i, a in enumerate(atoms)}

            def parse(name):
                body = name.strip()
                if not (body.startswith("{") and body.endswith("}")):
                    raise SchemaError(f"bad subset name {name!r}")
                parts = [s.strip() for s in body[1:-1].split(",") if s.strip()]
                return tuple(sorted(pos[s] for s in parts))

            algs = {parse(k): SmallDGA.from_json(v) for k, v in obj["algebras"].items()}
            maps = {}
            for k, v in obj["maps"].items():
                a, b = k.split("->")
                I, J = parse(a), parse(b)
                rows, cols = algs[J].dim, algs[I].dim
                m = RatMatrix.from_rows(v, cols) if rows else RatMatrix.zeros(0, cols)
                if (m.rows, m.cols) != (rows, cols):
                    raise SchemaError(f"map {k} must be {rows}x{cols}")
                maps[(I, J)] = m
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"bad cubical diagram: {exc}") from exc
        n = len(atoms)
        for I in _subsets(range(n)):
            if I not in algs:
                raise SchemaError(f"missing algebra for subset {I}")
            for p in range(n):
                if p not in I and (I, tuple(sorted(I + (p,)))) not in maps:
                    raise SchemaError(f"missing structure map for {I} + {atoms[p]}")
        return cls(atoms, algs, maps).validate()


# ---------------------------------------------------------------------------

def cech(diag: CubicalDiagram, I: Sequence) -> DGAlgebra:
    """Cech complex: sum over K in I of dtau^K A^K, degree of dtau^K is |K|.

    delta(dtau^K a) = sum_{k in I - K} dtau^k dtau^K g(a) + (-1)^{|K|} dtau^K da.
    The result carries no product (only the complex is built).
    """
    I = tuple(sorted(I))
    keys, grading = [], []
    for K in _subsets(I):
        A = diag.algebras[K]
        for i in range(A.dim):
            keys.append((K, i))
            grading.append(A.degrees[i] + len(K))
    index = {k: n for n, k in enumerate(keys)}
    diff = []
    for K, i in keys:
        A = diag.algebras[K]
        col: dict = {}
        for k in I:
            if k in K:
                continue
            K2 = tuple(sorted(K + (k,)))
            s = sign(sum(1 for q in K if q < k))
            for j, c in diag.maps[(K, K2)].column(i).items():
                col[index[(K2, j)]] = col.get(index[(K2, j)], 0) + s * c
        for j, c in A.diff[i].items():
            col[index[(K, j)]] = col.get(index[(K, j)], 0) + sign(len(K)) * c
        diff.append(col)
    return DGAlgebra(keys, grading, diff, None, _int_shift, _int_add, _ident)


class HatAlgebra(DGAlgebra):
    """A-hat over a subset of the atoms; keys are (I, K, basis index of A^{K - I})."""

    def __init__(self, diag: CubicalDiagram, nset: Sequence, flips: frozenset = frozenset()):
        self.diag = diag
        self.nset = tuple(sorted(nset))
        self.flips = frozenset(flips)
        keys, grading = [], []
        for K in _subsets(self.nset):
            for I in _subsets(K):
                C = tuple(p for p in K if p not in I)
                A = diag.algebras[C]
                for i in range(A.dim):
                    keys.append((I, K, i))
                    grading.append(A.degrees[i] - len(I))
        index = {k: n for n, k in enumerate(keys)}
        diff = []
        for I, K, i in keys:
            C = tuple(p for p in K if p not in I)
            A = diag.algebras[C]
            col: dict = {}

            def put(key, c):
                n = index[key]
                col[n] = col.get(n, 0) + c

            for pos, p in enumerate(I):
                s = sign(pos)
                I2 = tuple(q for q in I if q != p)
                C2 = tuple(sorted(C + (p,)))
                s_g = -s if ("g", p) in self.flips else s
                s_f = s if ("forget", p) in self.flips else -s
                for j, c in diag.maps[(C, C2)].column(i).items():
                    put((I2, K, j), s_g * c)
                K2 = tuple(q for q in K if q != p)
                put((I2, K2, i), s_f)
            s_d = -sign(len(I)) if ("d", None) in self.flips else sign(len(I))
            for j, c in A.diff[i].items():
                put((I, K, j), s_d * c)
            diff.append(col)
        super().__init__(keys, grading, diff, self._basis_mul, _int_shift, _int_add, _ident)

    def _basis_mul(self, a, b) -> dict:
        I, K, i = self.keys[a]
        J, L, j = self.keys[b]
        if set(I) & set(J):
            return {}
        C1 = tuple(p for p in K if p not in I)
        C2 = tuple(p for p in L if p not in J)
        if set(C1) & set(J) or set(C2) & set(I):
            return {}
        U = tuple(sorted(set(K) | set(L)))
        V = tuple(sorted(set(I) | set(J)))
        C = tuple(p for p in U if p not in V)
        A1 = self.diag.algebras[C1]
        s = shuffle_sign(I, J) * sign(A1.degrees[i] * len(J))
        if ("m", None) in self.flips:
            s = -s if len(I) + len(J) == 1 else s
        u = self.diag.apply_g(C, C1, {i: 1})
        v = self.diag.apply_g(C, C2, {j: 1})
        prod = self.diag.algebras[C].mul_vec(u, v)
        return {self.index[(V, U, k)]: s * c for k, c in prod.items() if c}

    def wprime(self, n: int) -> int:
        """Rank filtration index |K| of a basis element."""
        return len(self.keys[n][1])


def hat(diag: CubicalDiagram, nset: Sequence | None = None) -> HatAlgebra:
    return HatAlgebra(diag, range(len(diag.atoms)) if nset is None else nset)


def constant_diagram(A: SmallDGA, n: int) -> CubicalDiagram:
    subs = _subsets(range(n))
    ident = RatMatrix.identity(A.dim)
    maps = {(I, tuple(sorted(I + (p,)))): ident for I in subs for p in range(n) if p not in I}
    return CubicalDiagram(tuple(range(n)), {I: A for I in subs}, maps)


def _chain_map_ok(f: RatMatrix, src: DGAlgebra, dst: DGAlgebra) -> bool:
    return f @ src.diff_matrix() == dst.diff_matrix() @ f


def _quasi_iso(f: RatMatrix, src: DGAlgebra, dst: DGAlgebra) -> bool:
    hs, ht = src.cohomology(), dst.cohomology()
    if hs.dims() != ht.dims():
        return False
    for g, n in hs.dims().items():
        images = []
        for r in hs.reps(g):
            coords = ht.project(g, f.apply(r))
            if coords is None:
                return False
            images.append(coords)
        if rank_of_vectors(images, n) != n:
            return False
    return True


def _nonzero_pairs(alg: DGAlgebra) -> list:
    return [(i, j) for i in range(alg.dim) for j in range(alg.dim) if alg.mul(i, j)]


def verify_hat(diag: CubicalDiagram, nset: Sequence | None = None,
               flips: frozenset = frozenset()) -> Report:
    """Algebra axioms of A-hat, W' multiplicativity, the zig-zag and restrictions."""
    nset = tuple(range(len(diag.atoms))) if nset is None else tuple(sorted(nset))
    H = HatAlgebra(diag, nset, flips)
    ck = _Checker()
    H.check(ck)
    nz = _nonzero_pairs(H)
    left = {}
    for i, j in nz:
        left.setdefault(i, []).append(j)
    triples = set()
    for i, j in nz:
        for k in range(H.dim):
            triples.add((i, j, k))
            triples.add((k, i, j))
    H.check_associative(ck, sorted(triples))
    for i, j in nz:
        bound = len(set(H.keys[i][1]) | set(H.keys[j][1]))
        ok = all(H.wprime(k) == bound for k in H.mul(i, j))
        ck.record("wprime_multiplicative", ok, f"e{i} e{j}")
    for J in _subsets(nset):
        _zigzag(diag, H, J, flips, ck)
    return ck.report()


def _zigzag(diag: CubicalDiagram, H: HatAlgebra, J: tuple, flips, ck: _Checker):
    name = diag.name(J)
    HJ = HatAlgebra(diag, J, flips)
    AJ = diag.algebras[J]
    const = HatAlgebra(constant_diagram(AJ, len(diag.atoms)), J)
    # alpha: (dmu_I)^K a -> (dmu_I)^K g_{J, K-I}(a)
    cols = []
    for I, K, i in HJ.keys:
        C = tuple(p for p in K if p not in I)
        v = diag.apply_g(J, C, {i: 1})
        cols.append({const.index[(I, K, k)]: c for k, c in v.items()})
    alpha = RatMatrix.from_columns(cols, const.dim)
    beta = RatMatrix.from_columns([{const.index[((), (), i)]: 1} for i in range(AJ.dim)], const.dim)
    A = AJ.as_dga()
    try:
        ok_a = _chain_map_ok(alpha, HJ, const)
        ck.record("alpha_chain_map", ok_a, name)
        ck.record("alpha_quasi_isomorphism", ok_a and _quasi_iso(alpha, HJ, const), name)
        ok_b = _chain_map_ok(beta, A, const)
        ck.record("beta_chain_map", ok_b, name)
        ck.record("beta_quasi_isomorphism", ok_b and _quasi_iso(beta, A, const), name)
        ck.record("cohomology_matches_terminal_vertex",
                  HJ.cohomology().dims() == A.cohomology().dims(), name)
    except (KeyError, ValueError, ArithmeticError) as exc:
        ck.record("alpha_quasi_isomorphism", False, f"{name}: {exc}")
    # the hat over J is the K-in-J part of the hat over the full set
    ok = True
    for n, (I, K, i) in enumerate(HJ.keys):
        m = H.index[(I, K, i)]
        want = {H.index[HJ.keys[k]]: c for k, c in HJ.diff[n].items()}
        if want != H.diff[m]:
            ok = False
            break
    if ok:
        for a in range(HJ.dim):
            for b in range(HJ.dim):
                p = HJ.mul(a, b)
                q = H.mul(H.index[HJ.keys[a]], H.index[HJ.keys[b]])
                if {H.index[HJ.keys[k]]: c for k, c in p.items()} != q:
                    ok = False
                    break
    ck.record("restriction_compatible", ok, name)


# ---------------------------------------------------------------------------
# built-in diagrams

def _poly_ideal(lo: int, k: int, deg: int = 2) -> SmallDGA:
    """t^lo Q[t]/t^k with zero differential; basis t^lo .. t^(k-1)."""
    powers = list(range(lo, k))
    pos = {e: i for i, e in enumerate(powers)}
    table = {}
    for a, ea in enumerate(powers):
        for b, eb in enumerate(powers):
            if ea + eb < k:
                table[(a, b)] = {pos[ea + eb]: Fraction(1)}
    unit = pos.get(0)
    return SmallDGA(tuple(deg * e for e in powers), tuple({} for _ in powers), table, unit,
                    tuple(f"t^{e}" for e in powers))


def _inclusion(src_lo: int, dst_lo: int, k: int) -> RatMatrix:
    return RatMatrix(k - dst_lo, k - src_lo, {(e - dst_lo, e - src_lo): 1 for e in range(src_lo, k)})


def trivial_diagram(n: int) -> CubicalDiagram:
    """All vertices Q, all maps the identity."""
    Q = SmallDGA((0,), ({},), {(0, 0): {0: Fraction(1)}}, 0, ("1",))
    d = constant_diagram(Q, n)
    return CubicalDiagram(tuple(str(i + 1) for i in range(n)), d.algebras, d.maps)


def truncated_polynomial_diagram(n: int, k: int) -> CubicalDiagram:
    """A^I = t^(n - |I|) Q[t]/t^k, structure maps the inclusions of ideals."""
    if k <= n:
        raise ValueError("need k > n so that every vertex is nonzero")
    subs = _subsets(range(n))
    algs = {I: _poly_ideal(n - len(I), k) for I in subs}
    maps = {}
    for I in subs:
        for p in range(n):
            if p not in I:
                J = tuple(sorted(I + (p,)))
                maps[(I, J)] = _inclusion(n - len(I), n - len(J), k)
    return CubicalDiagram(tuple(str(i + 1) for i in range(n)), algs, maps)


def single_atom_example() -> CubicalDiagram:
    """One atom: the ideal tQ[t]/t^3 included in Q[t]/t^3."""
    return truncated_polynomial_diagram(1, 3)


def _koszul_pair() -> SmallDGA:
    """Lambda(x) (x) Q[y]/y^2 with |x| = 1, |y| = 2, dx = y; cohomology Q."""
    # basis 1, x, y, xy
    table = {(0, i): {i: Fraction(1)} for i in range(4)}
    table.update({(i, 0): {i: Fraction(1)} for i in range(4)})
    table[(1, 2)] = {3: Fraction(1)}
    table[(2, 1)] = {3: Fraction(1)}
    diff = ({}, {2: Fraction(1)}, {}, {})
    # d(xy) = y^2 = 0
    return SmallDGA((0, 1, 2, 3), diff, table, 0, ("1", "x", "y", "xy"))


def koszul_diagram() -> CubicalDiagram:
    """Two atoms: A^{} = A^{1} the Koszul pair, A^{2} = A^{12} = Q via the augmentation."""
    K = _koszul_pair()
    Q = SmallDGA((0,), ({},), {(0, 0): {0: Fraction(1)}}, 0, ("1",))
    algs = {(): K, (0,): K, (1,): Q, (0, 1): Q}
    aug = RatMatrix(1, 4, {(0, 0): 1})
    maps = {((), (0,)): RatMatrix.identity(4), ((), (1,)): aug, ((0,), (0, 1)): aug,
            ((1,), (0, 1)): RatMatrix.identity(1)}
    return CubicalDiagram(("1", "2"), algs, maps)


BUILTIN_DIAGRAMS = {
    "single-atom": single_atom_example,
    "trivial-2": lambda: trivial_diagram(2),
    "trivial-3": lambda: trivial_diagram(3),
    "truncated-2": lambda: truncated_polynomial_diagram(2, 4),
    "truncated-3": lambda: truncated_polynomial_diagram(3, 5),
    "koszul-2": koszul_diagram,
}
