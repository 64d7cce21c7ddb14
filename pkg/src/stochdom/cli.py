"""Command-line front end.

Exit codes for ``check`` and ``witness``: 0 when dominance holds (or the
verdict is confirmed), 1 when it fails (or is refuted), 2 on any input or
usage error. Other subcommands exit 0 on success and 2 on error.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .constructions import (
    ConstructedPair,
    example_counter_pair,
    interval_flip_pair,
    lemma_sequence_pair,
    rescale_pair,
)
from .dist import load_distribution, loads_json, save_distribution
from .dominance import (
    BoundaryViolation,
    MomentMismatch,
    PointwiseViolation,
    Verdict,
    boundary_table,
    check,
    difference_pp,
    iterated_cdf_at,
    verify_verdict,
)
from .dual import UtilityMixture, mixture_eu
from .errors import StochdomError
from .exactalg import RealInterval, format_rational, parse_rational
from .harness import ExperimentConfig, consistency_experiment


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _fmt(q: Fraction, digits: int | None) -> str:
    exact = format_rational(q)
    if digits is None:
        return exact
    with localcontext() as ctx:
        ctx.prec = digits + 40
        approx = Decimal(q.numerator) / Decimal(q.denominator)
        approx = approx.quantize(Decimal(1).scaleb(-digits))
    return f"{exact} (~{approx})"


def _add_scope(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", "-n", type=int, required=True, help="dominance order n >= 1")
    p.add_argument("--mpres", "-m", type=int, default=0, help="number of matched moments m (default 0)")
    scope = p.add_mutually_exclusive_group(required=True)
    scope.add_argument("--real", action="store_true", help="compare on the whole real line")
    scope.add_argument("--interval", nargs=2, type=_rational_arg, metavar=("A", "B"), help="reference interval [A, B]")


def _scope(args: argparse.Namespace) -> RealInterval | None:
    return None if args.real else RealInterval(*args.interval)


def _scope_text(iv: RealInterval | None) -> str:
    return "R" if iv is None else str(iv)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stochdom", description="Exact higher-order stochastic dominance checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="decide whether X dominates Y")
    _add_scope(p)
    p.add_argument("X", type=Path)
    p.add_argument("Y", type=Path)
    p.add_argument("--json", action="store_true", help="print the verdict as JSON")
    p.add_argument("--decimal", type=int, metavar="K", help="annotate rationals with K decimal digits")

    p = sub.add_parser("boundary", help="table of E[(b-X)^(k-1)] vs E[(b-Y)^(k-1)] for k = 1..n")
    p.add_argument("--order", "-n", type=int, required=True)
    p.add_argument("--at", type=_rational_arg, required=True, metavar="B")
    p.add_argument("X", type=Path)
    p.add_argument("Y", type=Path)
    p.add_argument("--json", action="store_true")
    p.add_argument("--decimal", type=int, metavar="K")

    p = sub.add_parser("construct", help="write a constructed pair as X.json, Y.json, params.json")
    csub = p.add_subparsers(dest="family", required=True, parser_class=_Parser)
    c = csub.add_parser("example1", help="the order-4 interval counterexample on [0, 1]")
    c.add_argument("--eps", type=_rational_arg, default=Fraction(1, 100))
    c = csub.add_parser("lemma", help="the lemma sequence pair on [0, 9]")
    c.add_argument("--m", type=_rational_arg, required=True)
    c = csub.add_parser("flip", help="pair ordered on [0, D] but not on [0, C] (9 <= C < D)")
    c.add_argument("--c", type=_rational_arg, required=True)
    c.add_argument("--d", type=_rational_arg, required=True)
    c = csub.add_parser("rescale", help="map an existing pair from [A, B] onto [C, D]")
    c.add_argument("--from", dest="src", nargs=2, type=_rational_arg, required=True, metavar=("A", "B"))
    c.add_argument("--to", dest="dst", nargs=2, type=_rational_arg, required=True, metavar=("C", "D"))
    c.add_argument("X", type=Path)
    c.add_argument("Y", type=Path)
    for c in csub.choices.values():
        c.add_argument("--out", type=Path, default=Path("."), help="output directory")

    p = sub.add_parser("eval", help="exact expected utility, or a CSV of the dominance gap curve")
    p.add_argument("--mixture", type=Path, help="utility mixture JSON")
    p.add_argument("--curve", action="store_true", help="print eta,D(eta) for D = F_Y^[n] - F_X^[n]")
    p.add_argument("--order", "-n", type=int)
    p.add_argument("--from", dest="lo", type=_rational_arg)
    p.add_argument("--to", dest="hi", type=_rational_arg)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("paths", nargs="+", type=Path)
    p.add_argument("--decimal", type=int, metavar="K")

    p = sub.add_parser("scan", help="run a seeded consistency experiment")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path, help="directory for report.json, report.csv and witness pairs")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("witness", help="re-verify a JSON verdict against its pair")
    _add_scope(p)
    p.add_argument("verdict", type=Path)
    p.add_argument("X", type=Path)
    p.add_argument("Y", type=Path)
    return parser


def _describe(verdict: Verdict, n: int, m: int, iv: RealInterval | None, digits: int | None) -> str:
    rel = f"X >=_{n} Y" if m == 0 else f"X >=_({n},{m}) Y"
    head = f"{rel} on {_scope_text(iv)}: {'holds' if verdict.holds else 'fails'}"
    w = verdict.witness
    if isinstance(w, PointwiseViolation):
        return f"{head}\n  pointwise violation at eta = {_fmt(w.eta, digits)}\n  F_Y^[{n}] - F_X^[{n}] = {_fmt(w.gap, digits)}"
    if isinstance(w, BoundaryViolation):
        return (
            f"{head}\n  boundary condition k = {w.k} violated at b = {format_rational(iv.hi)}\n"  # type: ignore[union-attr]
            f"  E[(b-X)^{w.k - 1}] = {_fmt(w.lhs, digits)}\n  E[(b-Y)^{w.k - 1}] = {_fmt(w.rhs, digits)}\n"
            f"  gap = {_fmt(w.gap, digits)}"
        )
    if isinstance(w, MomentMismatch):
        what = f"E[X^{w.k}]" if iv is None else f"E[(b-X)^{w.k}]"
        return f"{head}\n  moment mismatch, order {w.k}: {what} = {_fmt(w.lhs, digits)} vs {_fmt(w.rhs, digits)}"
    return head


def _write_pair(pair: ConstructedPair, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    save_distribution(pair.X, out / "X.json")
    save_distribution(pair.Y, out / "Y.json")
    sidecar = {"provenance": pair.provenance, "params": pair.params_json()}
    (out / "params.json").write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")


def _cmd_check(args: argparse.Namespace) -> int:
    X, Y = load_distribution(args.X), load_distribution(args.Y)
    iv = _scope(args)
    verdict = check(X, Y, args.order, args.mpres, iv)
    if args.json:
        print(json.dumps(verdict.to_json()))
    else:
        print(_describe(verdict, args.order, args.mpres, iv, args.decimal))
    return 0 if verdict.holds else 1


def _cmd_boundary(args: argparse.Namespace) -> int:
    X, Y = load_distribution(args.X), load_distribution(args.Y)
    rows = boundary_table(X, Y, args.order, args.at)
    if args.json:
        print(json.dumps([
            {"k": r.k, "lhs": format_rational(r.lhs), "rhs": format_rational(r.rhs), "gap": format_rational(r.gap)}
            for r in rows
        ]))
        return 0
    print(f"b = {format_rational(args.at)}")
    print("k\tE[(b-X)^(k-1)]\tE[(b-Y)^(k-1)]\tgap")
    for r in rows:
        print(f"{r.k}\t{_fmt(r.lhs, args.decimal)}\t{_fmt(r.rhs, args.decimal)}\t{_fmt(r.gap, args.decimal)}")
    return 0


def _cmd_construct(args: argparse.Namespace) -> int:
    if args.family == "example1":
        pair = example_counter_pair(args.eps)
    elif args.family == "lemma":
        pair = lemma_sequence_pair(args.m)
    elif args.family == "flip":
        pair = interval_flip_pair(args.c, args.d)
    else:
        src = ConstructedPair(load_distribution(args.X), load_distribution(args.Y), {}, "")
        pair = rescale_pair(src, *args.src, *args.dst)
    _write_pair(pair, args.out)
    print(f"wrote {args.out / 'X.json'}, {args.out / 'Y.json'}, {args.out / 'params.json'}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    if args.curve:
        if args.order is None or args.lo is None or args.hi is None or len(args.paths) != 2:
            raise UsageError("eval --curve needs --order, --from, --to and two distribution files")
        if args.steps < 1 or args.lo > args.hi:
            raise UsageError("eval --curve needs --steps >= 1 and --from <= --to")
        X, Y = (load_distribution(p) for p in args.paths)
        step = (args.hi - args.lo) / args.steps
        gap = difference_pp(X, Y, args.order) if args.order >= 2 else None
        print("eta,D")
        for i in range(args.steps + 1):
            eta = args.lo + i * step
            val = gap(eta) if gap is not None else iterated_cdf_at(Y, 1, eta) - iterated_cdf_at(X, 1, eta)
            print(f"{format_rational(eta)},{_fmt(val, args.decimal)}")
        return 0
    if args.mixture is None or len(args.paths) != 1:
        raise UsageError("eval needs --mixture FILE and one distribution file (or --curve)")
    u = UtilityMixture.from_json(loads_json(args.mixture.read_text(encoding="utf-8")))
    d = load_distribution(args.paths[0])
    print(_fmt(mixture_eu(d, u), args.decimal))
    return 0


def _cmd_scan(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig.from_json(loads_json(args.config.read_text(encoding="utf-8")))
    report = consistency_experiment(cfg, workers=args.workers)
    text = report.dumps()
    if args.out is None:
        sys.stdout.write(text)
        return 0
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "report.json").write_text(text, encoding="utf-8")
    (args.out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    for i, w in enumerate(report.discrepancies):
        wdir = args.out / "witnesses" / f"{i:04d}_t{w.trial}_n{w.order}_m{w.degree}"
        wdir.mkdir(parents=True, exist_ok=True)
        save_distribution(w.X, wdir / "X.json")
        save_distribution(w.Y, wdir / "Y.json")
    sys.stdout.write(report.to_csv())
    return 0


def _cmd_witness(args: argparse.Namespace) -> int:
    verdict = Verdict.from_json(loads_json(args.verdict.read_text(encoding="utf-8")))
    X, Y = load_distribution(args.X), load_distribution(args.Y)
    ok = verify_verdict(verdict, X, Y, args.order, args.mpres, _scope(args))
    print("confirmed" if ok else "refuted")
    return 0 if ok else 1


COMMANDS = {
    "check": _cmd_check,
    "boundary": _cmd_boundary,
    "construct": _cmd_construct,
    "eval": _cmd_eval,
    "scan": _cmd_scan,
    "witness": _cmd_witness,
}


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except (StochdomError, OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
