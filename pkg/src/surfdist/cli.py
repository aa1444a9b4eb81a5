"""Command line driver.

Exit codes: 0 ok, 1 validation failure, 2 parse failure, 3 precondition
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .document import (
    Document,
    DocumentError,
    build_report,
    export_dot,
    format_report_text,
    parse_cycle,
    parse_input,
    parse_rational,
    parse_trace_config,
    trace_config_to_json,
)
from .model import almost_fiber, validate
from .spirality import governor, lambda_bound, spirality, surface_lambda, vertex_potential
from .witness import (
    InconsistentConfig,
    build_witness,
    period_from_cycle,
    trace_bounds,
    verify_witness,
)

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


class _Precondition(Exception):
    pass


class _Invalid(Exception):
    def __init__(self, violations):
        self.violations = violations


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load(path: str) -> Document:
    return parse_input(Path(path).read_bytes())


def _load_valid(path: str) -> Document:
    doc = _load(path)
    violations = validate(doc.manifold, doc.surface)
    if violations:
        raise _Invalid(violations)
    return doc


def cmd_validate(args) -> int:
    doc = _load(args.file)
    violations = validate(doc.manifold, doc.surface)
    for v in violations:
        print(f"{v.code} {v.id}: {v.message}")
    if violations:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        doc = _load(args.file)
    except DocumentError as exc:
        report, status = {"status": "parse_error", "error": exc.as_dict()}, EXIT_PARSE
    else:
        report, status = build_report(doc)
    if args.format == "json":
        _emit(report)
    else:
        sys.stdout.write(format_report_text(report))
    return status


def cmd_spirality(args) -> int:
    doc = _load_valid(args.file)
    s = doc.surface
    comps = almost_fiber(s)
    if args.component is not None:
        comps = [c for c in comps if args.component in c.pieces]
        if not comps:
            raise _Precondition(f"piece {args.component!r} is not in the almost fiber part")
    out = []
    for c in comps:
        hom = spirality(s, c)
        entry = {
            "pieces": list(c.pieces),
            "curves": list(c.curves),
            "trivial": hom.trivial,
            "basis": [{"cycle": str(g), "weight": str(w)} for g, w in hom.basis],
            "governor": str(governor(s, c)),
            "lambda": None,
            "potential": None,
        }
        if hom.trivial:
            entry["lambda"] = str(lambda_bound(s, c))
            entry["potential"] = {p: str(v) for p, v in vertex_potential(s, c).values.items()}
        out.append(entry)
    _emit({"components": out})
    return EXIT_OK


def cmd_witness(args) -> int:
    doc = _load_valid(args.file)
    s = doc.surface
    try:
        gamma = parse_cycle(args.cycle)
        period = period_from_cycle(s, gamma)
        mu = parse_rational(args.mu, "--mu")
    except (ValueError, DocumentError) as exc:
        raise _Precondition(str(exc)) from None
    if period.weight <= 1:
        raise _Precondition(f"cycle weight {period.weight} is not > 1")
    if args.steps < 1:
        raise _Precondition("--steps must be >= 1")
    ws = build_witness(period, mu, args.steps)
    rep = verify_witness(ws)
    _emit(
        {
            "cycle": str(gamma),
            "period": [str(r) for r in period.ratios],
            "w": str(ws.w),
            "mu": str(ws.mu),
            "A": ws.A,
            "D": ws.D,
            "t": list(ws.t),
            "verification": rep.as_dict(),
        }
    )
    return EXIT_OK


def cmd_trace(args) -> int:
    doc = _load_valid(args.file)
    cfg = parse_trace_config(Path(args.config).read_bytes(), doc)
    s = doc.surface
    comps = almost_fiber(s)
    fill = {}
    if cfg.epsilon is None and comps:
        gov = max(governor(s, c) for c in comps)
        if all(c.xi <= gov for c in cfg.crossings):
            fill["epsilon"] = gov
    if cfg.Lambda is None and all(spirality(s, c).trivial for c in comps):
        fill["Lambda"] = surface_lambda(s, comps)
    if fill:
        cfg = dataclasses.replace(cfg, **fill)
    try:
        rep = trace_bounds(cfg)
    except InconsistentConfig as exc:
        raise _Precondition(str(exc)) from None
    _emit(
        {
            "config": trace_config_to_json(cfg),
            "n": str(rep.n),
            "epsilon": str(rep.epsilon),
            "a": [str(x) for x in rep.a],
            "b": [str(x) for x in rep.b],
            "claim2": [str(x) for x in rep.claim2],
            "claim3": None if rep.claim3 is None else str(rep.claim3),
            "claim2_holds": rep.claim2_holds,
            "claim3_holds": rep.claim3_holds,
            "log_sum": rep.log_sum if rep.b else None,
        }
    )
    return EXIT_OK


def cmd_export_dot(args) -> int:
    doc = _load_valid(args.file)
    sys.stdout.write(export_dot(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surfdist", description="Distortion of clean surfaces in 3-manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="classify the distortion")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("spirality", help="spirality, governor and Lambda per component")
    p.add_argument("file")
    p.add_argument("--component", metavar="PIECE-ID")
    p.set_defaults(func=cmd_spirality)

    p = sub.add_parser("witness", help="witness sequence along a cycle")
    p.add_argument("file")
    p.add_argument("--cycle", required=True, metavar="CURVE[:fwd|rev],...")
    p.add_argument("--mu", default="1", metavar="P/Q")
    p.add_argument("--steps", type=int, default=20)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("trace", help="crossing-bound recurrences")
    p.add_argument("file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("export-dot", help="DOT graph of the surface")
    p.add_argument("file")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _Invalid as exc:
        for v in exc.violations:
            print(f"{v.code} {v.id}: {v.message}", file=sys.stderr)
        return EXIT_INVALID
    except _Precondition as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
