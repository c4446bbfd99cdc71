"""Chromatic configuration spaces F(M, G) of a compact complex manifold M.

The model is the E1 page over the connected-partition lattice of G with
diagonal supports.  Alongside it we build the presentation by generators
and relations: H*(M^n) with one odd generator D_ab per edge, degree
2 dim_C M - 1, differential dD_ab = [Delta_ab], subject to the symmetry,
square-zero, cycle and pullback relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .cdga import sign
from .exactla import RatMatrix, rank_of_vectors
from .mvss import E1Algebra, GroupAction, build_e1_lattice, cohomology, group_action_on_e1
from .oscomplex import koszul_partial, os_algebra, shuffle_sign
from .poset import Graph
from .supportcoh import GradedRing, SupportModule, TensorPower, diagonal_support

__all__ = [
    "ChromaticModel",
    "chromatic_model",
    "simple_cycles",
    "chromatic_polynomial",
    "evaluate",
    "chromatic_euler_check",
    "export_presentation",
    "presentation_text",
    "presentation_dims",
    "e1_dims_by_label",
    "graph_automorphisms",
    "automorphism_action",
]

MAX_CYCLE_VERTICES = 8


def simple_cycles(graph: Graph) -> list:
    """Simple cycles up to rotation and reflection.

    Each cycle starts at its smallest vertex and its second vertex is
    smaller than its last.
    """
    if len(graph.vertices) > MAX_CYCLE_VERTICES:
        raise ValueError(f"cycle enumeration is limited to {MAX_CYCLE_VERTICES} vertices")
    adj = {v: graph.neighbors(v) for v in graph.vertices}
    out = []
    for s in graph.vertices:
        stack = [(s, [s])]
        while stack:
            v, path = stack.pop()
            for w in adj[v]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    out.append(tuple(path))
                elif w > s and w not in path:
                    stack.append((w, path + [w]))
    return sorted(out, key=lambda c: (len(c), c))


def chromatic_polynomial(graph: Graph) -> list:
    """Coefficients [c_0, c_1, ...] of p_G(x), by deletion-contraction."""
    memo: dict = {}

    def rec(n: int, edges: frozenset) -> tuple:
        key = (n, edges)
        if key in memo:
            return memo[key]
        if not edges:
            res = tuple([0] * n + [1])
        else:
            e = min(edges)
            a, b = e
            rest = edges - {e}
            deleted = rec(n, rest)
            merged = set()
            for u, v in rest:
                u2 = a if u == b else u
                v2 = a if v == b else v
                if u2 != v2:
                    merged.add((min(u2, v2), max(u2, v2)))
            contracted = rec(n - 1, frozenset(merged))
            size = max(len(deleted), len(contracted))
            res = tuple((deleted[i] if i < len(deleted) else 0)
                        - (contracted[i] if i < len(contracted) else 0) for i in range(size))
        memo[key] = res
        return res

    coeffs = list(rec(len(graph.vertices), frozenset(graph.edges)))
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def evaluate(coeffs, x: int) -> int:
    return sum(c * x ** k for k, c in enumerate(coeffs))


# ---------------------------------------------------------------------------

@dataclass
class ChromaticModel:
    graph: Graph
    hM: GradedRing
    support: SupportModule
    e1: E1Algebra
    cycles: list
    diagonal_classes: dict = field(default_factory=dict)   # edge -> Kunneth vector

    @property
    def generator_degree(self) -> int:
        return self.hM.top_degree - 1

    @property
    def kunneth(self) -> TensorPower:
        return TensorPower(self.hM, len(self.graph.vertices))


def chromatic_model(hM: GradedRing, graph: Graph) -> ChromaticModel:
    supp = diagonal_support(hM, graph)
    L = supp.poset
    e1 = build_e1_lattice(L, os_algebra(L), supp)
    bottom = L.bottom
    classes = {}
    for edge, atom in zip(graph.edges, L.atoms):
        unit = next(h for h, (_, d) in enumerate(supp.spaces[atom]) if d == hM.top_degree)
        classes[edge] = dict(supp.g(bottom, atom).column(unit))
    return ChromaticModel(graph, hM, supp, e1, simple_cycles(graph) if graph.edges else [], classes)


def chromatic_euler_check(model: ChromaticModel) -> tuple:
    ring = cohomology(model.e1, ring=False)
    lhs = ring.euler_characteristic()
    rhs = evaluate(chromatic_polynomial(model.graph), model.hM.euler_characteristic)
    return lhs, rhs, lhs == rhs


# ---------------------------------------------------------------------------
# presentation

def _edge_name(e) -> str:
    return f"D_{e[0]}{e[1]}" if max(e) < 10 else f"D_{e[0]},{e[1]}"


def _cycle_edges(cycle) -> list:
    k = len(cycle)
    return [(cycle[i], cycle[(i + 1) % k]) for i in range(k)]


def _pullback(model: ChromaticModel, v, gamma: int) -> int:
    n = len(model.graph.vertices)
    pos = model.graph.vertices.index(v)
    u = [model.hM.unit] * n
    u[pos] = gamma
    return model.kunneth.index[tuple(u)]


def _fmt_vec(labels, v: Mapping) -> str:
    terms = []
    for k, c in sorted(v.items()):
        c = Fraction(c)
        if not c:
            continue
        s = "-" if c < 0 else "+"
        mag = abs(c)
        coef = "" if mag == 1 else f"{mag}*"
        terms.append(f"{s} {coef}{labels[k]}")
    if not terms:
        return "0"
    text = " ".join(terms)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def export_presentation(model: ChromaticModel) -> dict:
    """Generators, differential and all relation instances over the chosen basis."""
    hM, G = model.hM, model.graph
    K = model.kunneth
    gens = []
    for e in G.edges:
        gens.append({"name": _edge_name(e), "edge": list(e), "degree": model.generator_degree,
                     "d": _fmt_vec(K.labels, model.diagonal_classes[e])})
    relations = []
    for e in G.edges:
        a, b = e
        relations.append({"kind": "symmetry", "text": f"D_{a}{b} = D_{b}{a}"})
    for e in G.edges:
        relations.append({"kind": "square-zero", "text": f"{_edge_name(e)}^2 = 0"})
    for cyc in model.cycles:
        edges = [tuple(sorted(e)) for e in _cycle_edges(cyc)]
        terms = []
        for sub, c in koszul_partial(tuple(range(len(edges)))).items():
            word = " ".join(_edge_name(edges[i]) for i in sub)
            terms.append(("+ " if c > 0 else "- ") + word)
        text = " ".join(terms)
        text = (text[2:] if text.startswith("+ ") else "-" + text[2:]) + " = 0"
        relations.append({"kind": "cycle", "cycle": list(cyc), "text": text})
    vlab = lambda v, g: f"{hM.labels[g]}_{v}"
    for e in G.edges:
        a, b = e
        for g in range(hM.dim()):
            if g == hM.unit:
                continue
            relations.append({"kind": "pullback",
                              "text": f"{vlab(a, g)} {_edge_name(e)} = {vlab(b, g)} {_edge_name(e)}"})
    return {"graph": G.to_json(), "space": hM.name,
            "base": {"ring": f"H*({hM.name})^{len(G.vertices)}",
                     "generators": [vlab(v, g) for v in G.vertices
                                    for g in range(hM.dim()) if g != hM.unit]},
            "generators": gens, "relations": relations}


def presentation_text(pres: Mapping) -> str:
    lines = [f"graph: {pres['graph']}", f"base ring: {pres['base']['ring']}"]
    for g in pres["generators"]:
        lines.append(f"generator {g['name']} of degree {g['degree']}, d{g['name']} = {g['d']}")
    lines.append("relations:")
    for r in pres["relations"]:
        lines.append(f"  [{r['kind']}] {r['text']}")
    return "\n".join(lines)


def _relation_generators(model: ChromaticModel) -> list:
    """Ideal generators as sparse dicts over (kunneth index, edge-index tuple)."""
    G, hM = model.graph, model.hM
    eidx = {e: i for i, e in enumerate(G.edges)}
    gens = []
    for cyc in model.cycles:
        edges = [eidx[tuple(sorted(e))] for e in _cycle_edges(cyc)]
        vec: dict = {}
        for sub, c in koszul_partial(tuple(range(len(edges)))).items():
            mono = [edges[i] for i in sub]
            s = _sort_sign(mono)
            key = (model.kunneth.unit, tuple(sorted(mono)))
            vec[key] = vec.get(key, 0) + c * s
        gens.append(vec)
    for e in G.edges:
        a, b = e
        for g in range(hM.dim()):
            if g == hM.unit:
                continue
            vec = {(_pullback(model, a, g), (eidx[e],)): Fraction(1)}
            key = (_pullback(model, b, g), (eidx[e],))
            vec[key] = vec.get(key, 0) - 1
            gens.append(vec)
    return gens


def _sort_sign(seq) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def _free_mul(model: ChromaticModel, u: tuple, v: tuple) -> dict:
    """Product of basis elements (h, S) of H*(M^n) (x) Lambda[D]."""
    K = model.kunneth
    (h1, s1), (h2, s2) = u, v
    sh = shuffle_sign(s1, s2)
    if not sh:
        return {}
    s = sh * sign(len(s1) * model.generator_degree * K.degrees[h2])
    prod = K.mul(h1, h2)
    mono = tuple(sorted(s1 + s2))
    return {(k, mono): s * c for k, c in prod.items()}


def presentation_dims(model: ChromaticModel) -> dict:
    """{(label, total degree): dim} of the presented algebra, by linear algebra on the ideal."""
    K = model.kunneth
    L = model.support.poset
    G = model.graph
    atoms = L.atoms
    nE = len(G.edges)
    monos = [tuple(s) for k in range(nE + 1) for s in itertools.combinations(range(nE), k)]
    label = {}
    for s in monos:
        t = L.sup_of_atoms([atoms[i] for i in s])
        label[s] = t
    gdeg = model.generator_degree

    def key(b):
        h, s = b
        return (label[s], K.degrees[h] + gdeg * len(s))

    basis = [(h, s) for s in monos for h in range(K.dim())]
    pieces: dict = {}
    for b in basis:
        pieces.setdefault(key(b), []).append(b)
    local = {k: {b: i for i, b in enumerate(v)} for k, v in pieces.items()}
    spans: dict = {k: [] for k in pieces}
    for r in _relation_generators(model):
        for b in basis:
            vec: dict = {}
            for term, c in r.items():
                for t2, c2 in _free_mul(model, b, term).items():
                    vec[t2] = vec.get(t2, 0) + c * c2
            vec = {t: c for t, c in vec.items() if c}
            if not vec:
                continue
            k = key(next(iter(vec)))
            spans[k].append({local[k][t]: c for t, c in vec.items()})
    out = {}
    for k, elems in pieces.items():
        d = len(elems) - rank_of_vectors(spans[k], len(elems))
        if d:
            out[k] = d
    return dict(sorted(out.items(), key=lambda kv: (L.index[kv[0][0]], kv[0][1])))


def e1_dims_by_label(e1: E1Algebra) -> dict:
    out: dict = {}
    for i, (x, _, _) in enumerate(e1.keys):
        k = (x, e1.degree(i))
        out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items(), key=lambda kv: (e1.poset.index[kv[0][0]], kv[0][1])))


# ---------------------------------------------------------------------------
# graph automorphisms

def graph_automorphisms(graph: Graph) -> list:
    vs = graph.vertices
    es = set(graph.edges)
    out = []
    for img in itertools.permutations(vs):
        pi = dict(zip(vs, img))
        if all(tuple(sorted((pi[a], pi[b]))) in es for a, b in graph.edges):
            out.append(pi)
    return out


def automorphism_action(model: ChromaticModel, pi: Mapping) -> GroupAction:
    """Action on E1 of a vertex permutation preserving the edges."""
    L = model.support.poset
    G = model.graph
    hM = model.hM
    atom_map = {}
    for e, atom in zip(G.edges, L.atoms):
        img = tuple(sorted((pi[e[0]], pi[e[1]])))
        atom_map[atom] = L.atoms[G.edges.index(img)]
    emap = L.induced_map(atom_map)
    diag = model.support.geometry
    smaps = {}
    for x in L.elements:
        blocks = diag.blocks(x)
        tblocks = diag.blocks(emap[x])
        where = {v: i for i, b in enumerate(tblocks) for v in b}
        pos = [where[pi[b[0]]] for b in blocks]
        P, Q = diag.power(len(blocks)), diag.power(len(tblocks))
        cols = []
        for u in P.basis:
            v = [None] * len(u)
            for i, a in enumerate(u):
                v[pos[i]] = a
            odd = [pos[i] for i in range(len(u)) if hM.degrees[u[i]] % 2]
            s = _sort_sign(odd)
            cols.append({Q.index[tuple(v)]: Fraction(s)})
        smaps[x] = RatMatrix.from_columns(cols, Q.dim())
    return group_action_on_e1(model.e1, atom_map, smaps)
