"""Command line front end: ``arrkit <command> [options]``.

Exit codes: 0 success, 2 bad input, 3 invariant violation or failed
verification, 4 lattice not (locally) geometric, 5 poset not gradable.
On failure a JSON error block is written to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .chromatic import (chromatic_euler_check, chromatic_model, chromatic_polynomial,
                        export_presentation, presentation_text)
from .errors import InvariantViolation, SchemaError
from .examples import REGISTRY
from .exactla import ContainmentViolation, SingularPairing
from .mobius_inv import BUILTIN_DIAGRAMS, CubicalDiagram, hat, verify_hat
from .mvss import (NotAutomorphism, PosetMismatch, build_e1_cubical, build_e1_lattice, cohomology,
                   formality_report, render_e_table, report_json, verify_e1)
from .oscomplex import AcyclicityFailure, LabelMismatch, os_algebra, verify_chain_algebra
from .poset import (Graph, GradedPoset, NotAtomic, NotGradable, NotLocallyGeometric,
                    UnknownElement)
from .subspace import (complex_hyperplane_ring, formality_model, os_dims_by_rank,
                       whitney_numbers, zaslavsky_regions)
from .subspace import from_json as arrangement_from_json
from .supportcoh import (CodimMonotonicityViolation, NoPairing, OddTopDegree, builtin_ring,
                         custom_support)

log = logging.getLogger("arrkit")

COMMANDS = ("os-algebra", "mv", "cubical-mv", "chromatic", "subspace", "verify-mobius", "examples")

EXIT_OK, EXIT_SCHEMA, EXIT_INVARIANT, EXIT_GEOMETRIC, EXIT_GRADABLE = 0, 2, 3, 4, 5

_EXIT_FOR = (
    (NotGradable, EXIT_GRADABLE),
    ((NotLocallyGeometric, NotAtomic), EXIT_GEOMETRIC),
    ((InvariantViolation, CodimMonotonicityViolation, AcyclicityFailure, ContainmentViolation,
      SingularPairing, NotAutomorphism), EXIT_INVARIANT),
    ((SchemaError, UnknownElement, LabelMismatch, PosetMismatch, NoPairing, OddTopDegree,
      json.JSONDecodeError, OSError, KeyError, ValueError, TypeError), EXIT_SCHEMA),
)


class VerificationFailed(InvariantViolation):
    def __init__(self, report):
        super().__init__("verification failed: " + ", ".join(report.failed()))
        self.report = report


def exit_code_for(exc: BaseException) -> int | None:
    for kinds, code in _EXIT_FOR:
        if isinstance(exc, kinds):
            return code
    return None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# commands; each returns (json-able result, text rendering)

def _options(args) -> dict:
    return {k: getattr(args, k) for k in ("n", "graph", "space") if getattr(args, k, None) is not None}


def _support_from_args(args):
    if args.example:
        if args.example not in REGISTRY:
            raise SchemaError(f"unknown example {args.example!r}; try 'arrkit examples'")
        build, defaults = REGISTRY[args.example]
        opts = dict(defaults)
        opts.update(_options(args))
        return build(**opts), {"example": args.example, **opts}
    if not args.input:
        raise SchemaError("give --input PATH or --example NAME")
    return custom_support(_load(args.input)), {"input": Path(args.input).name}


def _e_page_text(e1, ring, verdict) -> str:
    e1_page = {g: n for g, n in e1.dims().items() if n}
    parts = [render_e_table(e1_page, "E1"), "", render_e_table(ring.dims, "E2 = E_infinity"), "",
             "Betti: " + ", ".join(str(b) for b in ring.betti_list())]
    for n, w in ring.weights.items():
        parts.append(f"H^{n} weights: " + ", ".join(f"q={q}: {d}" for q, d in w.items()))
    parts.append(f"formality: {verdict['verdict']}")
    return "\n".join(parts)


def cmd_mv(args, cubical: bool = False):
    supp, source = _support_from_args(args)
    L = supp.poset
    e1 = build_e1_cubical(L.atoms, supp) if cubical else build_e1_lattice(L, os_algebra(L), supp)
    ring = cohomology(e1)
    verdict = formality_report(e1, ring)
    result = {"command": "cubical-mv" if cubical else "mv", "source": source,
              **report_json(e1, ring), "formality": verdict}
    text = _e_page_text(e1, ring, verdict)
    if args.verify:
        rep = verify_e1(e1)
        result["verification"] = rep.to_json()
        text += "\n" + str(rep)
        if not rep.passed:
            return result, text, VerificationFailed(rep)
    return result, text, None


def _poset_from_args(args) -> GradedPoset:
    if args.example:
        supp, _ = _support_from_args(args)
        return supp.poset
    if not args.input:
        raise SchemaError("give --input PATH or --example NAME")
    raw = _load(args.input)
    return GradedPoset.from_json(raw.get("poset", raw))


def cmd_os(args):
    L = _poset_from_args(args)
    L.require_locally_geometric()
    alg = os_algebra(L)
    rep = verify_chain_algebra(alg)
    result = {"command": "os-algebra", "algebra": alg.to_json(), "verification": rep.to_json(),
              "dims_by_rank": os_dims_by_rank(L)}
    lines = [f"{x}: rank {L.rank[x]}, dim {alg.dim(x)}, mu {L.moebius(x)}" for x in L.elements]
    lines.append("dims by rank: " + ", ".join(str(d) for d in os_dims_by_rank(L)))
    lines.append(str(rep))
    return result, "\n".join(lines), None if rep.passed else VerificationFailed(rep)


def cmd_chromatic(args):
    graph = Graph.parse(args.graph or "k3")
    space = args.space or "p1"
    model = chromatic_model(builtin_ring(space), graph)
    lhs, rhs, ok = chromatic_euler_check(model)
    ring = cohomology(model.e1)
    pres = export_presentation(model)
    result = {"command": "chromatic", "graph": graph.to_json(), "space": space,
              "chromatic_polynomial": chromatic_polynomial(graph),
              "euler_check": [lhs, rhs, ok], "betti": ring.betti_list(),
              "e2": report_json(model.e1, ring, include_ring=False)["e2"],
              "formality": formality_report(model.e1, ring), "presentation": pres}
    text = "\n".join([f"Euler check: ({lhs}, {rhs}, {str(ok).lower()})",
                      "Betti: " + ", ".join(str(b) for b in ring.betti_list()),
                      render_e_table(ring.dims, "E2 = E_infinity"),
                      presentation_text(pres)])
    err = None if ok else InvariantViolation(f"Euler characteristic {lhs} != {rhs}")
    if args.verify:
        rep = verify_e1(model.e1)
        result["verification"] = rep.to_json()
        text += "\n" + str(rep)
        if not rep.passed and err is None:
            err = VerificationFailed(rep)
    return result, text, err


def cmd_subspace(args):
    if not args.input:
        raise SchemaError("subspace needs --input PATH")
    arr = arrangement_from_json(_load(args.input))
    L = arr.poset
    e1 = formality_model(arr)
    ring = cohomology(e1)
    result = {"command": "subspace", "ambient_dim": arr.n,
              "poset": L.to_json(), "poincare": ring.betti_list(),
              "regions_if_real": zaslavsky_regions(L), "whitney": whitney_numbers(L)}
    lines = ["Poincare: " + ", ".join(str(b) for b in ring.betti_list()),
             f"regions (real case): {zaslavsky_regions(L)}",
             "Whitney numbers: " + ", ".join(str(w) for w in whitney_numbers(L))]
    if all(arr.codim[a] == 1 for a in L.atoms):
        hr = complex_hyperplane_ring(arr)
        result["hyperplane_ring"] = report_json(hr.e1, hr)
        lines.append("Orlik-Solomon dims: " + ", ".join(str(b) for b in hr.betti_list()))
    return result, "\n".join(lines), None


def cmd_verify_mobius(args):
    if args.example:
        if args.example not in BUILTIN_DIAGRAMS:
            raise SchemaError(f"unknown diagram {args.example!r}; choose from {sorted(BUILTIN_DIAGRAMS)}")
        diag = BUILTIN_DIAGRAMS[args.example]()
    elif args.input:
        diag = CubicalDiagram.from_json(_load(args.input))
    else:
        raise SchemaError("give --input PATH or --example NAME")
    diag.validate()
    H = hat(diag)
    rep = verify_hat(diag)
    coh = {str(k): v for k, v in H.cohomology().betti().items()}
    result = {"command": "verify-mobius", "atoms": list(diag.atoms), "hat_dim": H.dim,
              "hat_cohomology": coh, "verification": rep.to_json()}
    text = f"dim A-hat = {H.dim}\nH(A-hat): {coh}\n{rep}"
    return result, text, None if rep.passed else VerificationFailed(rep)


def cmd_examples(args):
    names = sorted(REGISTRY)
    result = {"command": "examples",
              "examples": {k: REGISTRY[k][1] for k in names},
              "diagrams": sorted(BUILTIN_DIAGRAMS)}
    lines = [f"{k} {json.dumps(REGISTRY[k][1], sort_keys=True)}" for k in names]
    lines.append("diagrams for verify-mobius: " + ", ".join(sorted(BUILTIN_DIAGRAMS)))
    return result, "\n".join(lines), None


def golden_output(name: str) -> str:
    """JSON report of a registry example with its default options."""
    ns = argparse.Namespace(example=name, input=None, n=None, graph=None, space=None, verify=False)
    result, _, _ = cmd_mv(ns)
    return _dump(result)


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(_dump({"error": {"type": "UsageError", "message": message,
                                          "exit_code": EXIT_SCHEMA}}))
        sys.exit(EXIT_SCHEMA)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arrkit", description="Cohomology of arrangement complements.")
    p.add_argument("--version", action="version", version=f"arrkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", metavar="PATH")
        s.add_argument("--format", choices=("text", "json"), default="text")
        s.add_argument("--out", metavar="PATH")
        s.add_argument("--example", metavar="NAME")
        s.add_argument("--n", type=int)
        s.add_argument("--graph", metavar="SPEC")
        s.add_argument("--space", metavar="NAME")
        s.add_argument("--verify", action="store_true", help="also run the algebra checks")
    return p


_DISPATCH = {
    "os-algebra": cmd_os,
    "mv": cmd_mv,
    "cubical-mv": lambda a: cmd_mv(a, cubical=True),
    "chromatic": cmd_chromatic,
    "subspace": cmd_subspace,
    "verify-mobius": cmd_verify_mobius,
    "examples": cmd_examples,
}


def _setup_logging():
    level = os.environ.get("ARRKIT_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _error_block(exc: BaseException, code: int) -> str:
    msg = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
    return _dump({"error": {"type": type(exc).__name__, "message": msg, "exit_code": code}})


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        result, text, failure = _DISPATCH[args.command](args)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes below
        code = exit_code_for(exc)
        if code is None:
            raise
        log.debug("command failed", exc_info=True)
        sys.stderr.write(_error_block(exc, code))
        return code
    out = _dump(result) if args.format == "json" else text + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    if failure is not None:
        code = exit_code_for(failure)
        sys.stderr.write(_error_block(failure, code))
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
