"""End-to-end acceptance checks; each prints one PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest,
which repeats the lines in the terminal summary.
"""

from __future__ import annotations

import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arrkit.chromatic import chromatic_euler_check, chromatic_model
from arrkit.cli import golden_output
from arrkit.examples import REGISTRY, boolean, braid, lines_p2, quadric_p3
from arrkit.exactla import RatMatrix, rank
from arrkit.mobius_inv import (BUILTIN_DIAGRAMS, koszul_diagram, single_atom_example,
                               truncated_polynomial_diagram, verify_hat)
from arrkit.mvss import build_e1_lattice, cohomology, poincare_polynomial, verify_e1
from arrkit.oscomplex import os_algebra, verify_chain_algebra
from arrkit.poset import Graph, boolean_lattice, partition_lattice
from arrkit.subspace import (SubspaceArrangement, formality_model, from_coordinates, generic_lines,
                             lines_with_triple_point, os_dims_by_rank, zaslavsky_regions)
from arrkit.supportcoh import builtin_ring
from oracles import count_regions, kriz_p1_k2_betti

GOLDEN = Path(__file__).parent / "golden"


def _e1(supp):
    return build_e1_lattice(supp.poset, os_algebra(supp.poset), supp)


def _line_abc(sub):
    (px, py), ((dx, dy),) = sub["basis_point"], sub["directions"]
    return (dy, -dx, dy * px - dx * py)


# ---------------------------------------------------------------------------

def lines_through_a_point():
    bad = []
    slowest = 0.0
    for n in range(2, 9):
        t = time.perf_counter()
        ring = cohomology(_e1(lines_p2(n)), ring=False)
        dt = time.perf_counter() - t
        slowest = max(slowest, dt)
        if ring.dims != {(0, 0): 1, (-1, 2): n - 1}:
            bad.append(f"n={n}: {ring.dims}")
        if dt >= 1.0:
            bad.append(f"n={n}: {dt:.2f}s")
    return not bad, "; ".join(bad) or f"n=2..8 exact, slowest {slowest:.3f}s"


def quadric_with_two_lines():
    t = time.perf_counter()
    e1 = _e1(quadric_p3())
    ring = cohomology(e1, ring=False)
    dt = time.perf_counter() - t
    row = [e1.dims().get((p, 6), 0) for p in (-3, -2, -1, 0)]
    printed_f = RatMatrix.from_rows([[0, -1, 0, -1], [-1, 0, -1, 1], [1, 1, 1, 0]])
    checks = {
        "q=6 row": row == [1, 4, 3, 1],
        "rank of printed f": rank(printed_f) == 2,
        "rank of computed d1 at (-2,6)": rank(e1.d1_blocks()[(-2, 6)]) == 2,
        "E2": ring.dims == {(0, 0): 1, (-1, 4): 3, (-2, 6): 1},
        "Betti": poincare_polynomial(ring) == [1, 0, 0, 3, 1],
        "time": dt < 1.0,
    }
    failed = [k for k, ok in checks.items() if not ok]
    return not failed, ("failed: " + ", ".join(failed)) if failed else f"all exact, {dt:.3f}s"


def zaslavsky_regions_check():
    bad = []
    cases = [("generic", k, generic_lines(k)) for k in range(1, 6)]
    cases += [("triple point", k, lines_with_triple_point(k)) for k in range(3, 6)]
    for kind, k, lines in cases:
        arr = from_coordinates(2, lines)
        got, want = zaslavsky_regions(arr.poset), count_regions([_line_abc(s) for s in lines])
        if got != want:
            bad.append(f"{kind} {k}: {got} vs oracle {want}")
    return not bad, "; ".join(bad) or f"{len(cases)} arrangements agree with the planar oracle"


def orlik_solomon_check():
    bad = []
    lattices = [(f"B{n}", n, boolean_lattice(n)) for n in range(1, 6)]
    lattices.append(("Pi3", 3, partition_lattice(Graph.complete(3))))
    for name, n, L in lattices:
        ring = cohomology(formality_model(SubspaceArrangement.from_poset(n, L)), ring=False)
        if ring.betti_list(L.height + 1) != os_dims_by_rank(L):
            bad.append(f"{name}: {ring.betti_list()} vs {os_dims_by_rank(L)}")
        if name == "Pi3" and poincare_polynomial(ring) != [1, 3, 2]:
            bad.append(f"Pi3 Poincare {poincare_polynomial(ring)}")
    return not bad, "; ".join(bad) or "B1..B5 and Pi3 agree; Pi3 gives 1 + 3t + 2t^2"


def chromatic_euler():
    bad = []
    slowest = 0.0
    for space in ("p1", "p2", "elliptic"):
        for g in ("k2", "k3", "path3", "c4"):
            t = time.perf_counter()
            lhs, rhs, ok = chromatic_euler_check(chromatic_model(builtin_ring(space), Graph.parse(g)))
            dt = time.perf_counter() - t
            slowest = max(slowest, dt)
            if not ok or dt >= 5.0:
                bad.append(f"{g}/{space}: ({lhs}, {rhs}) in {dt:.2f}s")
    return not bad, "; ".join(bad) or f"12 pairs exact, slowest {slowest:.3f}s"


def two_points_on_p1():
    got = cohomology(chromatic_model(builtin_ring("p1"), Graph.complete(2)).e1).betti_list(5)
    want = kriz_p1_k2_betti()
    return got == want == [1, 0, 1, 0, 0], f"model {got}, oracle {want}"


def corpus_e1_pages():
    corpus = [(f"lines-p2 n={n}", lines_p2(n)) for n in range(2, 9)]
    corpus += [("quadric-p3", quadric_p3()), ("braid 3", braid(3)), ("braid 4", braid(4))]
    corpus += [(f"boolean {n}", boolean(n)) for n in range(1, 6)]
    e1s = [(name, _e1(s)) for name, s in corpus]
    for space in ("p1", "p2", "elliptic"):
        for g in ("k2", "k3", "path3", "c4"):
            e1s.append((f"{g}/{space}", chromatic_model(builtin_ring(space), Graph.parse(g)).e1))
    bad = []
    for name, e1 in e1s:
        rep = verify_e1(e1)
        if not rep.passed:
            bad.append(f"{name}: {rep.failed()}")
    return not bad, "; ".join(bad) or f"{len(e1s)} E1 pages pass every check"


CONNECTED_GRAPHS = ["path3", "path4", "c4", "c5", "4:1-2,1-3,1-4", "4:1-2,1-3,2-3,3-4"]


def lattice_invariants():
    lattices = [(f"B{n}", boolean_lattice(n)) for n in range(1, 6)]
    lattices += [(f"Pi{n}", partition_lattice(Graph.complete(n))) for n in range(2, 5)]
    lattices += [(g, partition_lattice(Graph.parse(g))) for g in CONNECTED_GRAPHS]
    bad = []
    for name, L in lattices:
        if not L.is_locally_geometric():
            bad.append(f"{name} not locally geometric")
            continue
        rep = verify_chain_algebra(os_algebra(L))
        need = ("dim_equals_abs_moebius", "interval_acyclic", "atomic_complex_concentrated")
        if not all(rep.checks.get(k) for k in need):
            bad.append(f"{name}: {rep.failed()}")
    return not bad, "; ".join(bad) or f"{len(lattices)} lattices pass"


def mobius_inversion_algebra():
    bad = []
    names = sorted(BUILTIN_DIAGRAMS)
    for name in names:
        rep = verify_hat(BUILTIN_DIAGRAMS[name]())
        if not rep.passed:
            bad.append(f"{name}: {rep.failed()}")
    faults = [(single_atom_example(), ("g", 0)), (truncated_polynomial_diagram(2, 4), ("forget", 1)),
              (koszul_diagram(), ("g", 1)), (truncated_polynomial_diagram(2, 4), ("m", None))]
    for diag, flip in faults:
        if verify_hat(diag, flips=frozenset({flip})).passed:
            bad.append(f"fault {flip} not detected")
    return not bad, "; ".join(bad) or f"{len(names)} diagrams pass, {len(faults)} faults detected"


def golden_files():
    bad = []
    for name in sorted(REGISTRY):
        first, second = golden_output(name), golden_output(name)
        stored = (GOLDEN / f"{name}.json").read_text(encoding="utf-8")
        proc = subprocess.run([sys.executable, "-m", "arrkit.cli", "mv", "--example", name,
                               "--format", "json"], capture_output=True, text=True, check=False)
        if not (first == second == stored == proc.stdout):
            bad.append(name)
    return not bad, ("differ: " + ", ".join(bad)) if bad else f"{len(REGISTRY)} examples byte-identical"


CRITERIA = {
    1: lines_through_a_point,
    2: quadric_with_two_lines,
    3: zaslavsky_regions_check,
    4: orlik_solomon_check,
    5: chromatic_euler,
    6: two_points_on_p1,
    7: corpus_e1_pages,
    8: lattice_invariants,
    9: mobius_inversion_algebra,
    10: golden_files,
}


def _line(n, ok, detail) -> str:
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_acceptance(n):
    from conftest import ACCEPTANCE

    ok, detail = CRITERIA[n]()
    ACCEPTANCE[n] = (ok, detail)
    print(_line(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(n, *CRITERIA[n]()) for n in sorted(CRITERIA)]
    for n, ok, detail in results:
        print(_line(n, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
