"""Built-in arrangements used by the command line and the test corpus."""

from __future__ import annotations

import itertools

from .poset import Graph, GradedPoset, boolean_lattice, intersection_poset, partition_lattice
from .supportcoh import (SupportModule, affine_support, builtin_ring, custom_support,
                         diagonal_support, projective_support)

__all__ = [
    "lines_through_point",
    "lines_p2",
    "quadric_p3_data",
    "quadric_p3",
    "braid",
    "boolean",
    "chromatic_support",
    "REGISTRY",
]


def lines_through_point(n: int) -> GradedPoset:
    """Intersection poset of n >= 2 distinct lines through one point of P^2."""
    if n < 1:
        raise ValueError("need at least one line")
    names = [f"l{i}" for i in range(1, n + 1)]
    strata = {frozenset(): "P2"}
    for k in range(1, n + 1):
        for sub in itertools.combinations(names, k):
            strata[frozenset(sub)] = sub[0] if k == 1 else "p"
    return intersection_poset(strata, atoms=names)


def lines_p2(n: int) -> SupportModule:
    L = lines_through_point(n)
    return projective_support(2, {x: L.rank[x] for x in L.elements}, L)


def quadric_p3_data() -> dict:
    """Smooth quadric Q, a tangent line L_tau and a transversal line L_t in P^3.

    Atoms in order: 1 = L_t, 2 = L_tau, 3 = Q.  L_t meets Q in two points,
    one of them the tangency point of L_tau, which is also L_t cap L_tau.
    """
    L = boolean_lattice(3)

    def pts(label="pt"):
        return [{"label": label, "degree": 6}]

    spaces = {
        "{}": [{"label": l, "degree": d} for l, d in (("1", 0), ("h", 2), ("h^2", 4), ("h^3", 6))],
        "{1}": [{"label": "[L_t]", "degree": 4}, {"label": "pt", "degree": 6}],
        "{2}": [{"label": "[L_tau]", "degree": 4}, {"label": "pt", "degree": 6}],
        "{3}": [{"label": "[Q]", "degree": 2}, {"label": "A", "degree": 4},
                {"label": "B", "degree": 4}, {"label": "pt", "degree": 6}],
        "{1,2}": pts("p_tau"),
        "{1,3}": [{"label": "p_tau", "degree": 6}, {"label": "b_t", "degree": 6}],
        "{2,3}": pts("p_tau"),
        "{1,2,3}": pts("p_tau"),
    }
    line_to_p3 = [[0, 0], [0, 0], [1, 0], [0, 1]]
    cover_maps = {
        "{}<:{1}": line_to_p3,
        "{}<:{2}": line_to_p3,
        "{}<:{3}": [[0, 0, 0, 0], [2, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]],
        "{1}<:{1,2}": [[0], [1]],
        "{2}<:{1,2}": [[0], [1]],
        "{1}<:{1,3}": [[0, 0], [1, 1]],
        "{3}<:{1,3}": [[0, 0], [0, 0], [0, 0], [1, 1]],
        "{2}<:{2,3}": [[0], [1]],
        "{3}<:{2,3}": [[0], [0], [0], [1]],
        "{1,2}<:{1,2,3}": [[1]],
        "{1,3}<:{1,2,3}": [[1], [0]],
        "{2,3}<:{1,2,3}": [[1]],
    }
    products = {
        "{}*{}->{}": [[a, b, {str(a + b): "1"}] for a in range(4) for b in range(4) if a + b <= 3],
        "{}*{1}->{1}": [[0, 0, {"0": "1"}], [0, 1, {"1": "1"}], [1, 0, {"1": "1"}]],
        "{}*{2}->{2}": [[0, 0, {"0": "1"}], [0, 1, {"1": "1"}], [1, 0, {"1": "1"}]],
        "{}*{3}->{3}": [[0, k, {str(k): "1"}] for k in range(4)]
        + [[1, 0, {"1": "1", "2": "1"}], [1, 1, {"3": "1"}], [1, 2, {"3": "1"}], [2, 0, {"3": "2"}]],
        "{1}*{3}->{1,3}": [[0, 0, {"0": "1", "1": "1"}]],
        "{2}*{3}->{2,3}": [[0, 0, {"0": "2"}]],
    }
    for z, n in (("{1,2}", 1), ("{1,3}", 2), ("{2,3}", 1), ("{1,2,3}", 1)):
        products[f"{{}}*{z}->{z}"] = [[0, k, {str(k): "1"}] for k in range(n)]
    return {"poset": L.to_json(), "spaces": spaces, "cover_maps": cover_maps,
            "products": products,
            "weight_offset": {"{}": 0, "{1}": 4, "{2}": 4, "{3}": 2,
                              "{1,2}": 6, "{1,3}": 6, "{2,3}": 6, "{1,2,3}": 6}}


def quadric_p3() -> SupportModule:
    return custom_support(quadric_p3_data())


def braid(n: int) -> SupportModule:
    """Braid arrangement in C^n: partition lattice of K_n with affine supports."""
    return affine_support(n, partition_lattice(Graph.complete(n)))


def boolean(n: int) -> SupportModule:
    """n coordinate hyperplanes in C^n."""
    return affine_support(n, boolean_lattice(n))


def chromatic_support(graph: str | Graph, space: str) -> SupportModule:
    g = graph if isinstance(graph, Graph) else Graph.parse(graph)
    return diagonal_support(builtin_ring(space), g)


# name -> (builder taking keyword options, default options for the golden run)
REGISTRY = {
    "lines-p2": (lambda n=4, **_: lines_p2(n), {"n": 4}),
    "quadric-p3": (lambda **_: quadric_p3(), {}),
    "braid": (lambda n=3, **_: braid(n), {"n": 3}),
    "chromatic": (lambda graph="k3", space="p1", **_: chromatic_support(graph, space),
                  {"graph": "k3", "space": "p1"}),
    "boolean": (lambda n=3, **_: boolean(n), {"n": 3}),
}
