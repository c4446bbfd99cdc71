import json

import pytest

from arrkit.errors import InvariantViolation, SchemaError
from arrkit.exactla import RatMatrix
from arrkit.mobius_inv import (BUILTIN_DIAGRAMS, CubicalDiagram, HatAlgebra, cech, hat,
                               koszul_diagram, single_atom_example, trivial_diagram,
                               truncated_polynomial_diagram, verify_hat)


def test_cech_shapes():
    d = truncated_polynomial_diagram(2, 4)
    c0 = cech(d, ())
    assert c0.dim == d.algebras[()].dim
    c1 = cech(single_atom_example(), (0,))
    # cone of the ideal inclusion t Q[t]/t^3 -> Q[t]/t^3
    assert c1.dim == 2 + 3
    assert c1.cohomology().betti() == {1: 1}
    c2 = cech(d, (0, 1))
    assert len({k[0] for k in c2.keys}) == 4
    assert not any(c2.d(v) for v in c2.diff)
    with pytest.raises(TypeError):
        c2.mul(0, 0)


def test_hat_of_empty_set_is_the_bottom_algebra():
    d = truncated_polynomial_diagram(2, 4)
    H = hat(d, ())
    assert H.dim == d.algebras[()].dim
    assert H.dims() == d.algebras[()].as_dga().dims()


def test_single_atom_hat_is_a_cone():
    d = single_atom_example()
    H = hat(d)
    A0, A1 = d.algebras[()], d.algebras[(0,)]
    assert H.dim == A1.dim + 2 * A0.dim
    shifted = sorted(g - 1 for g in A0.degrees)
    assert sorted(H.degree(i) for i, k in enumerate(H.keys) if k[0] == (0,)) == shifted
    assert H.cohomology().betti() == A1.as_dga().cohomology().betti()


def test_trivial_two_atoms():
    H = hat(trivial_diagram(2))
    assert H.dim == 9
    assert H.cohomology().betti() == {0: 1}


@pytest.mark.parametrize("name", sorted(BUILTIN_DIAGRAMS))
def test_builtin_diagrams_verify(name):
    rep = verify_hat(BUILTIN_DIAGRAMS[name]())
    assert rep.passed, rep.failed()
    for check in ("leibniz", "associative", "graded_commutative", "alpha_quasi_isomorphism",
                  "beta_quasi_isomorphism", "wprime_multiplicative", "restriction_compatible"):
        assert rep.checks.get(check), check


@pytest.mark.parametrize("flip", [("g", 0), ("forget", 1), ("d", None), ("m", None)])
def test_fault_injection_is_detected(flip):
    d = koszul_diagram() if flip[0] == "d" else truncated_polynomial_diagram(2, 4)
    rep = verify_hat(d, flips=frozenset({flip}))
    assert not rep.passed
    if flip[0] in ("g", "forget"):
        assert "leibniz" in rep.failed() or "d_squared_zero" in rep.failed()
    elif flip[0] == "d":
        # negating every internal differential is still a derivation; the zig-zag notices
        assert "alpha_chain_map" in rep.failed()


def test_sign_flip_in_one_component_breaks_leibniz():
    rep = verify_hat(trivial_diagram(2), flips=frozenset({("g", 0)}))
    assert "leibniz" in rep.failed()


def test_json_round_trip():
    d = koszul_diagram()
    again = CubicalDiagram.from_json(json.loads(json.dumps(d.to_json())))
    assert again.to_json() == d.to_json()
    assert verify_hat(again).passed


def test_json_rejects_noncommuting_square():
    raw = truncated_polynomial_diagram(2, 4).to_json()
    raw["maps"]["{}->{1}"] = RatMatrix.from_rows([[0, 0], [2, 0], [0, 1]]).to_json()
    with pytest.raises(InvariantViolation):
        CubicalDiagram.from_json(raw)
    missing = truncated_polynomial_diagram(2, 4).to_json()
    del missing["maps"]["{}->{1}"]
    with pytest.raises(SchemaError):
        CubicalDiagram.from_json(missing)


def test_restriction_matches_sub_object():
    d = truncated_polynomial_diagram(3, 5)
    full = hat(d)
    part = HatAlgebra(d, (0, 2))
    assert set(part.keys) == {k for k in full.keys if set(k[1]) <= {0, 2}}
