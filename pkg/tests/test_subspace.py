import pytest

from arrkit.mvss import cohomology, formality_report, verify_e1
from arrkit.poset import Graph, NotLocallyGeometric, boolean_lattice, partition_lattice
from arrkit.errors import SchemaError
from arrkit.examples import lines_through_point
from arrkit.subspace import (AtomCodimViolation, CodimMismatch, SubspaceArrangement,
                             complex_hyperplane_ring, formality_model, from_coordinates, from_json,
                             generic_lines, lines_with_triple_point, os_dims_by_rank,
                             whitney_numbers, zaslavsky_regions)
from oracles import count_regions
from test_poset import duplicated_point_poset


def _abc(sub):
    # point + direction of a line back to a x + b y = c
    (px, py), ((dx, dy),) = sub["basis_point"], sub["directions"]
    a, b = dy, -dx
    return (a, b, a * px + b * py)


def test_formality_model_braid():
    arr = SubspaceArrangement.from_poset(3, partition_lattice(Graph.complete(3)))
    e1 = formality_model(arr)
    assert not any(e1.diff)
    ring = cohomology(e1)
    assert ring.betti_list() == [1, 3, 2]
    assert verify_e1(e1).passed
    assert formality_report(e1, ring)["verdict"] == "formal by section"


def test_single_hyperplane():
    arr = SubspaceArrangement.from_poset(1, boolean_lattice(1))
    assert cohomology(formality_model(arr)).betti_list() == [1, 1]


def test_generic_rank_two_truncation():
    # four lines through the origin of C^2
    arr = SubspaceArrangement.from_poset(2, lines_through_point(4))
    ring = complex_hyperplane_ring(arr)
    assert ring.betti_list() == os_dims_by_rank(arr.poset) == [1, 4, 3]


def test_boolean_ring_is_exterior():
    arr = SubspaceArrangement.from_poset(4, boolean_lattice(4))
    assert complex_hyperplane_ring(arr).betti_list() == [1, 4, 6, 4, 1]


def test_zaslavsky_small():
    assert zaslavsky_regions(boolean_lattice(1)) == 2
    assert zaslavsky_regions(boolean_lattice(2)) == 4
    arr = from_coordinates(2, generic_lines(3))
    assert zaslavsky_regions(arr.poset) == 7


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_zaslavsky_matches_region_oracle(k):
    for lines in [generic_lines(k)] + ([lines_with_triple_point(k)] if k >= 3 else []):
        arr = from_coordinates(2, lines)
        assert zaslavsky_regions(arr.poset) == count_regions([_abc(s) for s in lines])


def test_parallel_lines():
    lines = [{"basis_point": [0, c], "directions": [[1, 0]]} for c in range(3)]
    arr = from_coordinates(2, lines)
    assert zaslavsky_regions(arr.poset) == 4 == count_regions([_abc(s) for s in lines])


def test_whitney_signs_alternate():
    for L in (boolean_lattice(4), partition_lattice(Graph.complete(4)), lines_through_point(5)):
        w = whitney_numbers(L)
        assert all((-1) ** k * c > 0 for k, c in enumerate(w))


def test_errors():
    with pytest.raises(NotLocallyGeometric):
        SubspaceArrangement.from_poset(3, duplicated_point_poset())
    planes = [{"basis_point": [0, 0, 0, 0], "directions": [[1, 0, 0, 0], [0, 1, 0, 0]]},
              {"basis_point": [0, 0, 0, 0], "directions": [[0, 0, 1, 0], [0, 0, 0, 1]]}]
    with pytest.raises(CodimMismatch):
        from_coordinates(4, planes)
    L = boolean_lattice(2)
    codim = {x: 2 * L.rank[x] for x in L.elements}
    with pytest.raises(CodimMismatch):
        SubspaceArrangement(4, L, codim)
    with pytest.raises(SchemaError):
        from_coordinates(2, [{"basis_point": [0], "directions": []}])
    with pytest.raises(SchemaError):
        from_coordinates(2, generic_lines(2) + generic_lines(1))
    with pytest.raises(SchemaError):
        from_coordinates(1, [{"basis_point": [0], "directions": []}] * 13)


def test_atom_codim_violation():
    # the constructor refuses codim != rank, so build the bad object by hand
    L = boolean_lattice(1)
    arr = SubspaceArrangement.__new__(SubspaceArrangement)
    object.__setattr__(arr, "n", 3)
    object.__setattr__(arr, "poset", L)
    object.__setattr__(arr, "codim", {"{}": 0, "{1}": 2})
    with pytest.raises(AtomCodimViolation):
        complex_hyperplane_ring(arr)


def test_json_front_ends():
    arr = from_json({"ambient_dim": 2, "subspaces": generic_lines(2)})
    assert len(arr.poset) == 4
    again = from_json(arr.to_json())
    assert again.poset == arr.poset
