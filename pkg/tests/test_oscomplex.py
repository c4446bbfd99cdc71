import pytest

from arrkit.examples import lines_through_point
from arrkit.oscomplex import (atomic_complex, koszul_partial, os_algebra, os_normal_form,
                              verify_chain_algebra)
from arrkit.poset import Graph, boolean_lattice, partition_lattice


def test_koszul_partial():
    assert koszul_partial(()) == {}
    assert koszul_partial((1,)) == {(): 1}
    assert koszul_partial((1, 2)) == {(2,): 1, (1,): -1}


def test_atomic_complex_b2_and_pi3():
    B2 = boolean_lattice(2)
    ac = atomic_complex(B2)
    assert ac.levels["{1,2}"].get(2) == ((0, 1),)
    P3 = partition_lattice(Graph.complete(3))
    ac = atomic_complex(P3)
    top = "1-2-3"
    assert len(ac.levels[top][2]) == 3 and len(ac.levels[top][3]) == 1
    assert ac.cohomology_dims(top) == {-2: 2}
    single = boolean_lattice(1)
    assert atomic_complex(single).cohomology_dims("{1}") == {-1: 1}


def test_os_dims():
    B4 = boolean_lattice(4)
    os = os_algebra(B4)
    assert all(os.dim(x) == 1 for x in B4.elements)
    P3 = partition_lattice(Graph.complete(3))
    os = os_algebra(P3)
    by_rank = [sum(os.dim(x) for x in P3.elements if P3.rank[x] == k) for k in range(3)]
    assert by_rank == [1, 3, 2]
    L = lines_through_point(6)
    assert os_algebra(L).dim("p") == 5


def test_arnold_relation():
    P3 = partition_lattice(Graph.complete(3))
    os = os_algebra(P3)
    e12, e13, e23 = P3.atoms
    rel = {(e12, e23): 1, (e23, e13): 1, (e13, e12): 1}
    assert os_normal_form(os, "1-2-3", rel) == {}
    # a chosen representative maps to a unit vector
    rep = os.reps["1-2-3"][0]
    assert os.normal_form("1-2-3", {rep: 1}) == {0: 1}


@pytest.mark.parametrize("L", [boolean_lattice(3), partition_lattice(Graph.complete(4)),
                               partition_lattice(Graph.cycle(4)), lines_through_point(4)])
def test_verify_chain_algebra_passes(L):
    rep = verify_chain_algebra(os_algebra(L))
    assert rep.passed, rep.failed()


def test_negated_structure_map_is_detected():
    L = boolean_lattice(3)
    os = os_algebra(L)
    cover = ("{1}", "{1,2}")
    bad = os.with_boundary(cover, os.boundary[cover].scale(-1))
    rep = verify_chain_algebra(bad)
    assert not rep.passed
    assert "d_squared_zero" in rep.failed()


def test_products_respect_rank():
    L = partition_lattice(Graph.complete(4))
    os = os_algebra(L)
    for x in L.elements:
        for y in L.elements:
            for t in os.product_targets(x, y):
                assert L.rank[t] == L.rank[x] + L.rank[y]
