import pytest

from arrkit.examples import lines_through_point
from arrkit.poset import (Graph, GradedPoset, NotAtomic, NotGradable, NotLocallyGeometric,
                          UnknownElement, boolean_lattice, cubical_lattice, intersection_poset,
                          partition_lattice)


def plane_plane_line_strata():
    # two planes and a line in general position through the origin of C^3
    return {frozenset(): "C3", frozenset("l"): "l", frozenset(["P1"]): "P1",
            frozenset(["P2"]): "P2", frozenset(["P1", "P2"]): "l12",
            frozenset(["l", "P1"]): "p", frozenset(["l", "P2"]): "p",
            frozenset(["l", "P1", "P2"]): "p"}


def duplicated_point_poset():
    els = ["C3", "l", "P1", "P2", "q", "l12", "p"]
    covers = [("C3", "l"), ("C3", "P1"), ("C3", "P2"), ("l", "q"), ("P1", "q"),
              ("P1", "l12"), ("P2", "l12"), ("q", "p"), ("l12", "p")]
    return GradedPoset.from_covers(els, covers)


def test_leq():
    B2 = boolean_lattice(2)
    assert B2.leq("{1}", "{1}")
    assert all(B2.leq(B2.bottom, x) for x in B2.elements)
    assert not B2.leq("{1}", "{2}")
    with pytest.raises(UnknownElement):
        B2.leq("{1}", "nope")


def test_min_upper_bounds():
    B3 = boolean_lattice(3)
    assert B3.min_upper_bounds(["{2}"]) == {"{2}"}
    assert B3.min_upper_bounds([]) == {B3.bottom}
    assert B3.min_upper_bounds(["{1}", "{2}"]) == {"{1,2}"}


def test_moebius():
    B3 = boolean_lattice(3)
    assert B3.moebius(B3.bottom) == 1
    assert B3.moebius("{1,2,3}") == -1
    P3 = partition_lattice(Graph.complete(3))
    assert P3.moebius("1-2-3") == 2


@pytest.mark.parametrize("L", [boolean_lattice(4), partition_lattice(Graph.complete(4)),
                               partition_lattice(Graph.cycle(4)), lines_through_point(5)])
def test_moebius_sums_vanish(L):
    for x in L.elements:
        if x != L.bottom:
            assert sum(L.moebius(y) for y in L.elements if L.leq(y, x)) == 0


def test_locally_geometric():
    assert boolean_lattice(3).is_locally_geometric()
    for n in (2, 3, 4):
        assert partition_lattice(Graph.complete(n)).is_locally_geometric()
    bad = duplicated_point_poset()
    assert bad.rank["p"] == 3
    assert not bad.is_locally_geometric()
    with pytest.raises(NotLocallyGeometric):
        bad.require_locally_geometric()


def test_not_gradable():
    with pytest.raises(NotGradable):
        intersection_poset(plane_plane_line_strata(), atoms=["l", "P1", "P2"])


def test_cubical_lattice():
    Q, proj = cubical_lattice(boolean_lattice(3))
    assert len(Q) == 8 and Q.is_locally_geometric()
    Q, proj = cubical_lattice(partition_lattice(Graph.complete(3)))
    assert len(Q) == 8
    assert sorted(Q.rank.values()) == [0, 1, 1, 1, 2, 2, 2, 3]
    assert {proj[x] for x in Q.elements if Q.rank[x] >= 2} == {"1-2-3"}
    Q, _ = cubical_lattice(boolean_lattice(1))
    assert len(Q) == 2
    with pytest.raises(NotAtomic):
        cubical_lattice(GradedPoset.from_covers(["0", "a", "b"], [("0", "a"), ("a", "b")]))


def test_partition_lattice_shapes():
    assert len(partition_lattice(Graph.edgeless(3))) == 1
    P3 = partition_lattice(Graph.complete(3))
    assert len(P3) == 5 and sorted(P3.rank.values()) == [0, 1, 1, 1, 2]
    path = partition_lattice(Graph.path(3))
    assert set(path.elements) == {"1|2|3", "1-2|3", "1|2-3", "1-2-3"}
    K4 = partition_lattice(Graph.complete(4))
    assert K4.height == 3 and len(K4.atoms) == 6


def test_intersection_poset_cases():
    B = intersection_poset({frozenset(s): "".join(sorted(s)) or "X"
                            for k in range(4) for s in __import__("itertools").combinations("abc", k)})
    assert len(B) == 8 and B.height == 3
    L = lines_through_point(4)
    assert len(L.atoms) == 4 and L.height == 2
    assert [x for x in L.elements if L.rank[x] == 2] == ["p"]


def test_json_round_trip():
    for L in (boolean_lattice(3), partition_lattice(Graph.cycle(4))):
        assert GradedPoset.from_json(L.to_json()) == L


def test_graph_parse():
    assert Graph.parse("k3") == Graph.complete(3)
    assert Graph.parse("c4").edges == ((1, 2), (1, 4), (2, 3), (3, 4))
    assert Graph.parse("3:1-2,2-3") == Graph.path(3)
    with pytest.raises(ValueError):
        Graph.parse("wheel")
