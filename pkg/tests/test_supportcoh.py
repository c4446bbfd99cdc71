import copy
from fractions import Fraction

import pytest

from arrkit.errors import InvariantViolation, SchemaError
from arrkit.examples import lines_p2, lines_through_point, quadric_p3_data
from arrkit.poset import Graph, boolean_lattice
from arrkit.supportcoh import (CodimMonotonicityViolation, GradedRing, NoPairing, OddTopDegree,
                               affine_support, builtin_ring, custom_support, diagonal_support,
                               elliptic_curve, projective_space, projective_support)


def test_rings():
    p2 = projective_space(2)
    assert p2.betti() == {0: 1, 2: 1, 4: 1}
    assert p2.euler_characteristic == 3
    e = elliptic_curve()
    assert e.euler_characteristic == 0
    assert not e.violations()
    a, b = e.labels.index("a"), e.labels.index("b")
    assert e.mul(a, b) == {e.labels.index("pt"): 1}
    assert e.mul(b, a) == {e.labels.index("pt"): -1}
    assert GradedRing.from_json(e.to_json()).to_json() == e.to_json()
    with pytest.raises(SchemaError):
        builtin_ring("p9x")


def test_tensor_power_signs():
    e = elliptic_curve()
    T = e.tensor_power(2)
    i = T.index[(e.labels.index("a"), 0)]
    j = T.index[(0, e.labels.index("b"))]
    # (a x 1)(1 x b) = a x b, (1 x b)(a x 1) = -(a x b)
    assert T.mul(i, j) == {T.index[(1, 2)]: 1}
    assert T.mul(j, i) == {T.index[(1, 2)]: -1}


def test_projective_support_dims():
    S = lines_p2(3)
    assert S.dims_by_degree(S.poset.bottom) == {0: 1, 2: 1, 4: 1}
    assert S.dims_by_degree("p") == {4: 1}
    assert S.dims_by_degree("l1") == {2: 1, 4: 1}
    assert not S.violations()


def test_codim_monotonicity():
    L = lines_through_point(2)
    codims = {x: 1 for x in L.elements}
    codims[L.bottom] = 0
    with pytest.raises(CodimMonotonicityViolation):
        projective_support(2, codims, L)


def test_affine_support():
    B2 = boolean_lattice(2)
    S = affine_support(2, B2)
    assert S.dims_by_degree(B2.bottom) == {0: 1}
    assert S.dims_by_degree("{1}") == {2: 1}
    assert S.product("{1}", 0, "{2}", 0) == {"{1,2}": {0: Fraction(1)}}


def test_diagonal_support_p1_k2():
    S = diagonal_support(projective_space(1), Graph.complete(2))
    assert S.dims_by_degree("1|2") == {0: 1, 2: 2, 4: 1}
    assert S.dims_by_degree("1-2") == {2: 1, 4: 1}
    # the Thom class of the diagonal pushes forward to 1 x pt + pt x 1
    labels = [l for l, _ in S.spaces["1|2"]]
    g = S.g("1|2", "1-2")
    thom = next(i for i, (_, d) in enumerate(S.spaces["1-2"]) if d == 2)
    assert g.column(thom) == {labels.index("1.h"): 1, labels.index("h.1"): 1}
    edgeless = diagonal_support(projective_space(1), Graph.edgeless(3))
    assert len(edgeless.poset) == 1 and edgeless.dim(edgeless.poset.bottom) == 8


def test_diagonal_support_errors():
    odd = GradedRing("s1", ("1", "x"), (0, 1), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
                     0, 1, 1)
    with pytest.raises(OddTopDegree):
        diagonal_support(odd, Graph.complete(2))
    nopair = GradedRing("flat", ("1", "x"), (0, 2), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
                        0, None, None)
    with pytest.raises(NoPairing):
        diagonal_support(nopair, Graph.complete(2))


def test_custom_round_trip():
    S = lines_p2(3)
    again = custom_support(S.to_json())
    assert again.to_json() == S.to_json()


def test_custom_rejects_bad_maps():
    raw = quadric_p3_data()
    bad = copy.deepcopy(raw)
    # send the degree-4 class of L_t to h (degree 2)
    bad["cover_maps"]["{}<:{1}"] = [[0, 0], [1, 0], [0, 0], [0, 1]]
    with pytest.raises(InvariantViolation):
        custom_support(bad)
    broken = copy.deepcopy(raw)
    del broken["spaces"]["{1,2}"]
    with pytest.raises(SchemaError):
        custom_support(broken)


def test_quadric_rows():
    S = custom_support(quadric_p3_data())
    assert S.dims_by_degree("{1,2,3}") == {6: 1}
    assert S.dims_by_degree("{1,3}") == {6: 2}
    assert S.dims_by_degree("{3}") == {2: 1, 4: 2, 6: 1}
    assert not S.violations()
