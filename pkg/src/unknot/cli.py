"""Command line front end.

Subcommands cover the whole pipeline: decide (the race), prove and refute
(one engine each), invariants (determinant and colorings), rm-trace (move
scripts with labelled equation extraction), and batch (a table of inputs).

Exit codes: 0 unknot, 1 knotted, 2 undecided, 3 error or bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .diagrams import KnotDiagram, ParseError, load_input, serialize_pd
from .invariants import determinant, fox_colorings, smallest_prime_divisor
from .modelfind import format_interpretation
from .moves import MoveError, check_trace_properties, trace_equations
from .presentation import format_prover_input, presentation_of_input
from .prover import ALL_AXIOMS, format_proof
from .runner import batch_decide, decide, prove, refute

EXIT_UNKNOT = 0
EXIT_KNOTTED = 1
EXIT_UNDECIDED = 2
EXIT_ERROR = 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _parse_axioms(text: str) -> tuple[int, ...]:
    try:
        axioms = tuple(sorted({int(tok) for tok in text.split(",") if tok.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad axiom list: {text!r}")
    if not axioms or any(a not in (1, 2, 3) for a in axioms):
        raise argparse.ArgumentTypeError("axioms must be among 1,2,3")
    return axioms


def _emit(data: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _cmd_decide(args: argparse.Namespace) -> int:
    source = load_input(_read(args.input))
    report = decide(source, timeout_s=args.timeout, max_size=args.max_size,
                    axioms=args.axioms)
    pr, fi = report.prover, report.finder
    lines = [f"verdict: {report.verdict}"
             + (f" (by {report.method})" if report.method else ""),
             f"prover: {pr.status}"
             + (f" ({pr.limit})" if pr.limit else "")
             + f", {pr.iterations} iterations, {pr.kept} kept,"
             f" {pr.elapsed_s:.2f}s",
             f"finder: {fi.status}"
             + (f", countermodel of size {fi.size}" if fi.size else "")
             + (f", sizes refuted {list(fi.sizes_refuted)}"
                if fi.sizes_refuted else "")
             + f", {fi.elapsed_s:.2f}s"]
    if report.detail:
        lines.append(f"detail: {report.detail}")
    _emit(report.to_json_dict(), args.json, lines)
    return {"unknot": EXIT_UNKNOT, "knotted": EXIT_KNOTTED,
            "unknown": EXIT_UNDECIDED}.get(report.verdict, EXIT_ERROR)


def _cmd_prove(args: argparse.Namespace) -> int:
    source = load_input(_read(args.input))
    out, err = prove(source, timeout_s=args.timeout, axioms=args.axioms)
    lines = [f"status: {out.status}" + (f" ({out.limit})" if out.limit else ""),
             f"iterations: {out.iterations}, kept: {out.kept}, "
             f"elapsed: {out.elapsed_s:.2f}s"]
    if err:
        lines.append(f"proof verification FAILED: {err}")
    elif out.status == "proved":
        lines.append("proof verified")
        if args.show_proof:
            lines.append(format_proof(out.proof))
    data = out.to_json_dict()
    data["verified"] = out.status == "proved" and err is None
    _emit(data, args.json, lines)
    if err:
        return EXIT_ERROR
    if out.status == "proved":
        return EXIT_UNKNOT
    if out.status == "saturated_without_proof":
        return EXIT_KNOTTED
    return EXIT_UNDECIDED


def _cmd_refute(args: argparse.Namespace) -> int:
    source = load_input(_read(args.input))
    out, err = refute(source, timeout_s=args.timeout, max_size=args.max_size,
                      axioms=args.axioms)
    lines = [f"status: {out.status}"
             + (f", minimal countermodel size {out.size}" if out.size else "")
             + (f", sizes refuted {list(out.sizes_refuted)}"
                if out.sizes_refuted else "")]
    if err:
        lines.append(f"model verification FAILED: {err}")
    elif out.status == "found":
        p = presentation_of_input(source) if not hasattr(source, "goal") else source
        lines.append("model verified")
        lines.append(format_interpretation(out.model,
                                           generator_order=list(p.generators)))
    data = out.to_json_dict()
    data["verified"] = out.status == "found" and err is None
    _emit(data, args.json, lines)
    if err:
        return EXIT_ERROR
    if out.status == "found":
        return EXIT_KNOTTED
    return EXIT_UNDECIDED


def _cmd_invariants(args: argparse.Namespace) -> int:
    source = load_input(_read(args.input))
    p = presentation_of_input(source)
    det = determinant(p)
    moduli = args.colors or sorted({3, 5, 7, 11, 13} | (
        {smallest_prime_divisor(det)} if smallest_prime_divisor(det) else set()))
    reports = [fox_colorings(p, n) for n in moduli]
    lines = [f"generators: {len(p.generators)}, relations: {len(p.relations)}",
             f"determinant: {det}",
             f"smallest prime divisor: {smallest_prime_divisor(det)}"]
    for rep in reports:
        tag = "nonconstant colorings exist" if rep.nonconstant_exists \
            else "only constant colorings"
        lines.append(f"colorings mod {rep.modulus}: {rep.count} ({tag})")
    data = {"generators": list(p.generators), "determinant": det,
            "smallest_prime_divisor": smallest_prime_divisor(det),
            "colorings": [{"modulus": r.modulus, "count": r.count,
                           "nonconstant": r.nonconstant_exists}
                          for r in reports]}
    _emit(data, args.json, lines)
    return EXIT_UNKNOT if det == 1 else EXIT_UNDECIDED


def _cmd_rm_trace(args: argparse.Namespace) -> int:
    source = load_input(_read(args.diagram))
    if not isinstance(source, KnotDiagram):
        print("rm-trace needs a diagram input, not bare relations",
              file=sys.stderr)
        return EXIT_ERROR
    moves_text = _read(args.moves)
    trace = trace_equations(source, moves_text)
    lines = []
    for i, (d, rec) in enumerate(zip(trace.diagrams[1:], trace.records), 1):
        eqs = "; ".join(rec.to_json_dict()["equations"]) or "none"
        lines.append(f"step {i}: {rec.move} -> {len(d.crossings)} crossings, "
                     f"adds {eqs}")
    lines.append(f"final diagram: {serialize_pd(trace.diagrams[-1])}")
    data = trace.to_json_dict()
    code = EXIT_UNKNOT
    if args.check:
        report = check_trace_properties(trace, prover_budget_s=args.budget)
        lines.append(f"checks: structure={report.structure_ok} "
                     f"equations={report.equations_ok} "
                     f"labels={report.labels_ok} "
                     f"relations proved at steps {list(report.steps_proved)}")
        for note in report.details:
            lines.append(f"  {note}")
        data["check"] = report.to_json_dict()
        if not report.ok:
            code = EXIT_ERROR
    _emit(data, args.json, lines)
    return code


def _cmd_batch(args: argparse.Namespace) -> int:
    items = []
    for line in _read(args.table).splitlines():
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split(None, 1)
        if len(parts) != 2:
            print(f"batch line needs a name and an input: {line!r}",
                  file=sys.stderr)
            return EXIT_ERROR
        text = parts[1]
        if text.startswith("@"):
            # indirection for inputs that do not fit on one line
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        items.append((parts[0], text))
    results = batch_decide(items, timeout_s=args.timeout,
                           max_size=args.max_size, axioms=args.axioms,
                           workers=args.workers)
    lines = []
    worst = EXIT_UNKNOT
    for name, data in results:
        verdict = data.get("verdict", "error")
        finder = data.get("finder") or {}
        size = finder.get("size")
        lines.append(f"{name}\t{verdict}"
                     + (f"\tmin countermodel {size}" if size else ""))
        rank = {"unknot": EXIT_UNKNOT, "knotted": EXIT_KNOTTED,
                "unknown": EXIT_UNDECIDED}.get(verdict, EXIT_ERROR)
        worst = max(worst, rank if rank != EXIT_KNOTTED else EXIT_UNKNOT)
    _emit({"results": [{"name": n, **d} for n, d in results]}, args.json, lines)
    return worst


def _cmd_presentation(args: argparse.Namespace) -> int:
    source = load_input(_read(args.input))
    p = presentation_of_input(source)
    print(format_prover_input(p, axioms=args.axioms), end="")
    return EXIT_UNKNOT


class _Parser(argparse.ArgumentParser):
    """Parser whose usage errors exit with the error code, not 2.

    Exit status 2 is reserved for an undecided verdict.
    """

    def error(self, message: str) -> None:  # noqa: A003
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="unknot",
        description="Decide unknottedness by racing an equational prover "
                    "against a finite countermodel search.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, finder: bool = True) -> None:
        sp.add_argument("--timeout", type=float, default=60.0,
                        help="wall clock budget per engine, seconds")
        if finder:
            sp.add_argument("--max-size", type=int, default=24,
                            help="largest model size to search")
        sp.add_argument("--axioms", type=_parse_axioms, default=ALL_AXIOMS,
                        help="comma separated axiom subset, e.g. 2,3")
        sp.add_argument("--json", action="store_true",
                        help="machine readable output")

    sp = sub.add_parser("decide", help="race both engines on one input")
    sp.add_argument("input", help="file with a PD code, Gauss code, or "
                                  "relation lines; - for stdin")
    common(sp)
    sp.set_defaults(fn=_cmd_decide)

    sp = sub.add_parser("prove", help="run only the saturation prover")
    sp.add_argument("input")
    sp.add_argument("--show-proof", action="store_true",
                    help="print the verified derivation")
    common(sp, finder=False)
    sp.set_defaults(fn=_cmd_prove)

    sp = sub.add_parser("refute", help="run only the countermodel search")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(fn=_cmd_refute)

    sp = sub.add_parser("invariants", help="determinant and Fox colorings")
    sp.add_argument("input")
    sp.add_argument("--colors", type=int, action="append",
                    help="coloring modulus; may repeat")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_invariants)

    sp = sub.add_parser("rm-trace", help="run a move script over a diagram")
    sp.add_argument("diagram", help="file with the starting diagram")
    sp.add_argument("moves", help="file with one move per line")
    sp.add_argument("--check", action="store_true",
                    help="verify the trace invariants with the prover")
    sp.add_argument("--budget", type=float, default=2.0,
                    help="prover seconds per relation during --check")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_rm_trace)

    sp = sub.add_parser("batch", help="decide every entry of a name/input table")
    sp.add_argument("table")
    sp.add_argument("--workers", type=int, default=None,
                    help="parallel processes; default UNKNOT_WORKERS or 1")
    common(sp)
    sp.set_defaults(fn=_cmd_batch)

    sp = sub.add_parser("presentation",
                        help="print the generated prover input for a diagram")
    sp.add_argument("input")
    sp.add_argument("--axioms", type=_parse_axioms, default=ALL_AXIOMS)
    sp.set_defaults(fn=_cmd_presentation)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, MoveError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
