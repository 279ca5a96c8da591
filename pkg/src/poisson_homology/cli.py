"""Command-line interface.

Subcommands load a structure file, run one computation and emit either
an aligned text table or stable machine-readable JSON (schema
``poisson-homology/1``).  Exit codes: 0 success, 1 failed check,
2 parse error, 3 Jacobi failure, 4 module axiom failure, 5 computation
mode violation.  The ``POISSON_HOMOLOGY_WORKERS`` environment variable
(or ``--workers``) sets the slice worker count for the graded engine.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .poly import format_polynomial
from .structure import (PoissonStructure, is_unimodular, jps_potential_3d,
                        modular_derivation)
from .modules import ModuleElement, PoissonModule, modular_twist, regular_module
from .complexes import complex_squared_check
from .duality import verify_duality_square
from .homology import (BettiTable, GradingError, casimirs, duality_table_check,
                       ph_cohomology, ph_homology, top_kernel)
from .specfile import JacobiError, ModuleAxiomError, SpecFileError, load_spec

SCHEMA = "poisson-homology/1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_JACOBI = 3
EXIT_AXIOM = 4
EXIT_MODE = 5


def _fmt_element(m: ModuleElement, names) -> str:
    if m.rank == 1:
        return format_polynomial(m.coords[0], names)
    return "(" + ", ".join(format_polynomial(c, names) for c in m.coords) + ")"


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("degree range must look like LO:HI")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("degree range bounds must be integers") from None
    if hi_i < lo_i:
        raise argparse.ArgumentTypeError("degree range upper bound below lower bound")
    return range(lo_i, hi_i + 1)


def _select_module(module: PoissonModule, choice: str) -> PoissonModule:
    if choice == "file":
        return module
    if choice == "regular":
        return regular_module(module.structure)
    if choice == "twist-modular":
        return modular_twist(module)
    raise ValueError(f"unknown module choice {choice!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-homology",
        description="Exact Poisson (co)homology of polynomial Poisson algebras.")
    parser.add_argument("--format", choices=("table", "json"), default="table",
                        help="output format (default: table)")
    parser.add_argument("--workers", type=int, default=None,
                        help="slice worker count (default: POISSON_HOMOLOGY_WORKERS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("spec", help="structure file")
        return cmd

    check = add("check", "validate Jacobi, module axioms and both squared differentials")
    check.add_argument("--max-degree", type=int, default=3,
                       help="monomial degree bound for the squared-differential guard")

    add("modular", "print the modular derivation and classify unimodularity")
    add("jps-potential", "recover the Jacobian potential of a unimodular 3-variable structure")

    for name in ("homology", "cohomology"):
        cmd = add(name, f"graded Poisson {name} dimensions")
        cmd.add_argument("-p", type=int, action="append", default=None,
                         help="homological degree (repeatable; default: all)")
        cmd.add_argument("--degree-range", type=_parse_range, default=range(0, 7),
                         help="weighted degree range LO:HI (default 0:6)")
        cmd.add_argument("--module", choices=("file", "regular", "twist-modular"),
                         default="file", help="override the module from the file")
        cmd.add_argument("--mode", choices=("exact", "filtered"), default="exact",
                         help="exact graded slices or filtered approximation")

    duality = add("verify-duality", "chain-level duality square plus graded table comparison")
    duality.add_argument("--max-degree", type=int, default=3,
                         help="monomial degree bound for the square check")
    duality.add_argument("--degree-range", type=_parse_range, default=range(0, 5),
                         help="internal degree range LO:HI for the table comparison")
    duality.add_argument("--module", choices=("file", "regular", "twist-modular"),
                         default="file", help="override the module from the file")

    for name, default in (("casimirs", 6), ("top-kernel", 10)):
        cmd = add(name, f"exact truncated {name.replace('-', ' ')} basis")
        cmd.add_argument("--degree-bound", type=int, default=default,
                         help=f"degree truncation (default {default})")
        cmd.add_argument("--module", choices=("file", "regular", "twist-modular"),
                         default="file", help="override the module from the file")

    return parser


# -- command implementations --------------------------------------------


def _cmd_check(structure, module, args):
    failure = complex_squared_check(module, args.max_degree)
    lines = [
        "jacobi identity: pass",
        "module axioms: pass",
    ]
    payload = {"jacobi": "pass", "module_axioms": "pass"}
    if failure is None:
        lines.append(f"squared differentials vanish through degree {args.max_degree}: pass")
        payload["squared_differentials"] = "pass"
        return payload, lines, EXIT_OK
    lines.append(f"squared differential FAILED on {failure.side} basis {failure.basis}")
    payload["squared_differentials"] = {
        "side": failure.side, "degree": failure.degree, "basis": failure.basis}
    return payload, lines, EXIT_FAIL


def _cmd_modular(structure, module, args):
    phi = modular_derivation(structure)
    names = structure.names
    lines = [f"phi({name}) = {format_polynomial(value, names)}"
             for name, value in zip(names, phi.values)]
    unimodular = phi.is_zero()
    lines.append("unimodular" if unimodular
                 else "NOT unimodular (modular derivation is nonzero)")
    payload = {
        "modular_derivation": {name: format_polynomial(value, names)
                               for name, value in zip(names, phi.values)},
        "unimodular": unimodular,
    }
    return payload, lines, EXIT_OK


def _cmd_jps_potential(structure, module, args):
    names = structure.names
    if structure.n != 3:
        raise GradingError("potential recovery needs exactly 3 variables")
    if not is_unimodular(structure):
        raise GradingError("structure is not unimodular; no Jacobian potential exists "
                           "(run 'modular' to inspect the modular derivation)")
    w = jps_potential_3d(structure)
    text = format_polynomial(w, names)
    return {"potential": text}, [f"potential w = {text}"], EXIT_OK


def _betti_lines(table: BettiTable, label: str) -> list[str]:
    ps = sorted({p for p, _ in table.entries})
    ds = sorted({d for _, d in table.entries})
    header = ["p\\d"] + [str(d) for d in ds]
    rows = [[str(p)] + [str(table.entries.get((p, d), "")) for d in ds] for p in ps]
    widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
    lines = [f"{label} ({table.mode})"]
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for row in rows:
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    if table.mode == "filtered-approximate":
        lines.append("note: filtered dimensions are truncation-dependent approximations")
    return lines


def _cmd_graded(structure, module, args, which: str):
    selected = _select_module(module, args.module)
    func = ph_homology if which == "homology" else ph_cohomology
    table = func(selected, args.degree_range, ps=args.p, mode=args.mode,
                 workers=args.workers)
    label = f"PH_{{p}}(R, {selected.label})" if which == "homology" \
        else f"PH^{{p}}(R, {selected.label})"
    payload = {"module": selected.label, "betti": table.to_json_dict()}
    return payload, _betti_lines(table, label), EXIT_OK


def _slice_json(sl):
    return {
        "side": sl.side, "p": sl.p, "d": sl.d,
        "domain": list(sl.domain_labels),
        "codomain": list(sl.codomain_labels),
        "matrix": [[str(v) for v in row] for row in sl.dense()],
    }


def _cmd_verify_duality(structure, module, args):
    selected = _select_module(module, args.module)
    n = structure.n
    lines = []
    payload: dict = {"square_checks": [], "module": selected.label}
    ok = True
    for p in range(n):
        failure = verify_duality_square(structure, selected, p, args.max_degree)
        from .complexes import basis_multiderivations
        checked = sum(1 for _ in basis_multiderivations(selected, p, args.max_degree))
        status = "pass" if failure is None else "FAIL"
        lines.append(f"duality square p={p}: {status} ({checked} basis elements)")
        entry = {"p": p, "basis_checked": checked, "pass": failure is None}
        if failure is not None:
            ok = False
            entry["basis"] = failure.basis
        payload["square_checks"].append(entry)

    report = duality_table_check(selected, args.degree_range, workers=args.workers)
    payload["weight_shift"] = report.weight_total
    payload["cells"] = [
        {"p": c.p, "d": c.d, "cohomology_dim": c.cohomology_dim,
         "homology_dim": c.homology_dim, "match": c.matches}
        for c in report.cells]
    lines.append(f"graded table comparison (chain degree = internal degree + {report.weight_total}):")
    header = ["p", "d", "dim PH^(n-p)(M)", "dim PH_p(M_t)", "match"]
    rows = [[str(c.p), str(c.d), str(c.cohomology_dim), str(c.homology_dim),
             "yes" if c.matches else "NO"] for c in report.cells]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in rows)
    if not report.passed:
        ok = False
        payload["mismatches"] = [
            {"p": mm.cell.p, "d": mm.cell.d,
             "slices": [_slice_json(sl) for sl in mm.slices]}
            for mm in report.mismatches]
        lines.append("MISMATCH: see JSON output for the offending slice matrices")
    else:
        lines.append("duality table: pass")
    payload["passed"] = ok
    return payload, lines, EXIT_OK if ok else EXIT_FAIL


def _cmd_kernel(structure, module, args, which: str):
    selected = _select_module(module, args.module)
    func = casimirs if which == "casimirs" else top_kernel
    basis = func(selected, args.degree_bound)
    names = structure.names
    texts = [_fmt_element(m, names) for m in basis]
    what = "casimir" if which == "casimirs" else "top-degree kernel"
    lines = [f"{what} basis through degree {args.degree_bound} "
             f"({len(texts)} element{'s' if len(texts) != 1 else ''}):"]
    lines.extend(f"  {t}" for t in texts)
    payload = {"module": selected.label, "degree_bound": args.degree_bound,
               "basis": texts}
    return payload, lines, EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "modular": _cmd_modular,
    "jps-potential": _cmd_jps_potential,
    "homology": lambda s, m, a: _cmd_graded(s, m, a, "homology"),
    "cohomology": lambda s, m, a: _cmd_graded(s, m, a, "cohomology"),
    "verify-duality": _cmd_verify_duality,
    "casimirs": lambda s, m, a: _cmd_kernel(s, m, a, "casimirs"),
    "top-kernel": lambda s, m, a: _cmd_kernel(s, m, a, "top-kernel"),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers is None:
        args.workers = int(os.environ.get("POISSON_HOMOLOGY_WORKERS", "1"))

    try:
        structure, module = load_spec(args.spec)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SpecFileError as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except JacobiError as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_JACOBI
    except ModuleAxiomError as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_AXIOM

    try:
        payload, lines, code = _COMMANDS[args.command](structure, module, args)
    except GradingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE

    if args.format == "json":
        document = {"schema": SCHEMA, "command": args.command, **payload}
        print(json.dumps(document, indent=2))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
