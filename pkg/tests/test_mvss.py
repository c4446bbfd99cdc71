import pytest

from arrkit.chromatic import chromatic_model
from arrkit.examples import braid, lines_p2, quadric_p3
from arrkit.exactla import RatMatrix, rank
from arrkit.mvss import (NotAutomorphism, PosetMismatch, build_e1_cubical, build_e1_lattice,
                         cohomology, formality_report, group_action_on_e1, poincare_polynomial,
                         render_e_table, verify_e1)
from arrkit.oscomplex import os_algebra
from arrkit.poset import Graph, boolean_lattice
from arrkit.supportcoh import builtin_ring, diagonal_support, projective_space, projective_support
from oracles import kriz_p1_k2_betti


def e1_of(supp):
    return build_e1_lattice(supp.poset, os_algebra(supp.poset), supp)


def nonzero(d):
    return {k: v for k, v in d.items() if v}


def test_lines_e1_table():
    n = 4
    e1 = e1_of(lines_p2(n))
    assert nonzero(e1.dims()) == {(0, 0): 1, (0, 2): 1, (0, 4): 1, (-1, 2): n, (-1, 4): n,
                                  (-2, 4): n - 1}


def test_trivial_poset_gives_ambient_cohomology():
    supp = diagonal_support(projective_space(1), Graph.edgeless(2))
    e1 = e1_of(supp)
    ring = cohomology(e1)
    assert ring.betti_list() == [1, 0, 2, 0, 1]
    assert not any(e1.diff)


def test_quadric_row_and_rank():
    e1 = e1_of(quadric_p3())
    assert [e1.dims().get((p, 6), 0) for p in (-3, -2, -1, 0)] == [1, 4, 3, 1]
    blocks = e1.d1_blocks()
    assert rank(blocks[(-2, 6)]) == 2
    ring = cohomology(e1)
    assert ring.dims == {(0, 0): 1, (-1, 4): 3, (-2, 6): 1}
    assert poincare_polynomial(ring) == [1, 0, 0, 3, 1]


def test_kriz_oracle_p1_k2():
    model = chromatic_model(builtin_ring("p1"), Graph.complete(2))
    assert cohomology(model.e1).betti_list(5) == kriz_p1_k2_betti()


def test_single_divisor_cubical():
    B1 = boolean_lattice(1)
    supp = projective_support(2, {"{}": 0, "{1}": 1}, B1)
    e1 = build_e1_cubical(B1.atoms, supp)
    assert nonzero(e1.dims()) == {(0, 0): 1, (0, 2): 1, (0, 4): 1, (-1, 2): 1, (-1, 4): 1}
    # d1 is the Gysin map: both classes of the line hit h and h^2, leaving C^2
    assert rank(e1.diff_matrix()) == 2
    assert cohomology(e1).betti_list() == [1]


def test_cubical_matches_lattice_route_for_k2():
    supp = diagonal_support(projective_space(1), Graph.complete(2))
    a = e1_of(supp)
    b = build_e1_cubical(supp.poset.atoms, supp)
    assert cohomology(a).dims == cohomology(b).dims


def test_empty_atoms_cubical():
    supp = diagonal_support(projective_space(1), Graph.edgeless(1))
    e1 = build_e1_cubical((), supp)
    assert cohomology(e1).betti_list() == [1, 0, 1]


def test_poset_mismatch():
    supp = lines_p2(3)
    with pytest.raises(PosetMismatch):
        build_e1_lattice(supp.poset, os_algebra(boolean_lattice(2)), supp)
    with pytest.raises(PosetMismatch):
        build_e1_cubical(supp.poset.atoms, supp)


def test_formality_verdicts():
    e1 = e1_of(lines_p2(3))
    assert formality_report(e1, cohomology(e1))["verdict"] == "formal by section"
    e1 = e1_of(braid(3))
    rep = formality_report(e1, cohomology(e1))
    assert rep["verdict"] == "formal by section" and rep["zero_differential"]


def test_representative_independence():
    ring = cohomology(e1_of(quadric_p3()))
    assert ring.coh.representative_independent()


def test_group_actions():
    e1 = e1_of(lines_p2(3))
    L = e1.poset
    ident = group_action_on_e1(e1, {a: a for a in L.atoms})
    assert ident.matrix == RatMatrix.identity(e1.dim)
    swap = group_action_on_e1(e1, {"l1": "l2", "l2": "l1", "l3": "l3"})
    assert swap.report.passed
    assert swap.matrix @ e1.diff_matrix() == e1.diff_matrix() @ swap.matrix
    assert swap.matrix @ swap.matrix == RatMatrix.identity(e1.dim)
    with pytest.raises(NotAutomorphism):
        group_action_on_e1(e1, {"l1": "l1", "l2": "l1", "l3": "l3"})


def test_verify_e1_detects_broken_support():
    supp = lines_p2(3)
    e1 = e1_of(supp)
    assert verify_e1(e1).passed
    L = supp.poset
    os = os_algebra(L)
    bad = os.with_boundary(("l1", "p"), os.boundary[("l1", "p")].scale(-1))
    rep = verify_e1(build_e1_lattice(L, bad, supp))
    assert not rep.passed


def test_render_e_table():
    empty = render_e_table({})
    assert "p\\q" in empty and "| 0" in empty
    ring = cohomology(e1_of(lines_p2(4)))
    text = render_e_table(ring.dims)
    rows = text.splitlines()
    assert rows[0].split() == ["3", ".", "|", "2"]
    assert rows[2].split() == [".", "1", "|", "0"]
    e1 = e1_of(quadric_p3())
    row6 = render_e_table({g: n for g, n in e1.dims().items() if n}).splitlines()[0]
    assert row6.split() == ["1", "4", "3", "1", "|", "6"]
