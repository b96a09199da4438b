"""Command-line front end.

    drcr solve      --B 5 --interval 3:8:0.3
    drcr evaluate   --B 5 --interval 3:8:0.3 --dist solution.json
    drcr curve      --B 5 --interval 3:8 --grid 0:1:0.01 --format csv
    drcr critical   --B 5 --interval 3:8 --check
    drcr feasible   --B 5 --interval 3:8 --v 1.2 --delta 0.5
    drcr robustness --B 5

Exit status: 0 on success, 1 for invalid input, 2 when the solver fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import analysis, evaluate, lp, skirental
from .errors import SolverError, ValidationError
from .model import ProblemSpec, PurchaseDistribution

EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(x: float) -> float:
    return float(f"{x:.9g}")


def _interval(text: str) -> tuple[int, int, float | None]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected l:u or l:u:delta, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
        d = float(parts[2]) if len(parts) == 3 else None
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected l:u or l:u:delta, got {text!r}") from None
    return lo, hi, d


def _delta_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="drcr", description="Distributionally-robust ski rental.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p, needs_interval=True):
        p.add_argument("--B", type=int, help="purchase cost (rent is 1 per day)")
        if needs_interval:
            p.add_argument("--interval", type=_interval, action="append", default=[],
                           help="prediction l:u[:delta], innermost first; repeatable")
            p.add_argument("--spec", help="profile JSON file instead of --B/--interval")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("solve", help="optimal randomized algorithm")
    common(p)
    p.add_argument("--dump-lp", help="write the LP in text form ('-' for stderr)")

    p = sub.add_parser("evaluate", help="DRCR of a given purchase distribution")
    common(p)
    p.add_argument("--dist", required=True, help="purchase distribution or solution JSON")

    p = sub.add_parser("curve", help="optimal DRCR over a delta grid")
    common(p)
    p.add_argument("--grid", required=True, help="a:b:step")
    p.add_argument("--axis", type=int, default=1, help="which prediction's delta to sweep (1-based)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("critical", help="critical accuracy of a single interval")
    common(p)
    p.add_argument("--check", action="store_true", help="also run the bisection cross-check")
    p.add_argument("--dump-lp", help="write the LP in text form ('-' for stderr)")

    p = sub.add_parser("feasible", help="is the optimal DRCR at least v for these deltas?")
    common(p)
    p.add_argument("--v", type=float, required=True, help="target DRCR value")
    p.add_argument("--delta", type=_delta_list, action="append", default=[],
                   help="delta values (comma-separated or repeated)")
    p.add_argument("--dump-lp", help="write the LP in text form ('-' for stderr)")

    p = sub.add_parser("robustness", help="closed-form optimal robustness")
    common(p, needs_interval=False)
    return parser


def _profile_args(args) -> tuple[int, list[tuple[int, int]], list[float | None]]:
    if getattr(args, "spec", None):
        if args.interval or args.B is not None:
            raise UsageError("--spec cannot be combined with --B/--interval")
        with open(args.spec) as fh:
            data = json.load(fh)
        try:
            B = data["B"]
        except KeyError:
            raise UsageError("--spec: profile JSON has no 'B'") from None
        intervals = [tuple(iv) for iv in data.get("intervals", [])]
        deltas = list(data.get("deltas", [None] * len(intervals)))
        if len(deltas) != len(intervals):
            raise UsageError("--spec: intervals and deltas differ in length")
        return B, intervals, deltas
    if args.B is None:
        raise UsageError("--B is required")
    return args.B, [(lo, hi) for lo, hi, _ in args.interval], [d for _, _, d in args.interval]


def _full_spec(args) -> ProblemSpec:
    B, intervals, deltas = _profile_args(args)
    if any(d is None for d in deltas):
        raise UsageError("--interval: every prediction needs l:u:delta for this command")
    return ProblemSpec.build(B, intervals, deltas)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(path: str | None, prog: lp.LinearProgram, title: str) -> None:
    if not path:
        return
    text = prog.dumps(title)
    if path == "-":
        sys.stderr.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _only_json(args) -> None:
    if args.format == "csv":
        raise UsageError(f"--format: csv output is only available for curve, not {args.verb}")


def _cmd_solve(args) -> None:
    _only_json(args)
    spec = _full_spec(args)
    _dump(args.dump_lp, skirental.build_primal(spec), "reduced primal")
    res = skirental.optimal_drcr(spec)
    out = res.to_json()
    out["drcr"] = _num(out["drcr"])
    out["consistencies"] = [_num(c) for c in out["consistencies"]]
    _emit(args, _json(out))


def _cmd_evaluate(args) -> None:
    _only_json(args)
    spec = _full_spec(args)
    try:
        dist = PurchaseDistribution.load(args.dist)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--dist: cannot read {args.dist}: {exc}") from None
    br = evaluate.drcr(dist, spec)
    _emit(args, _json({
        "drcr": _num(br.drcr),
        "consistencies": [_num(c) for c in br.consistencies],
        "robustness": _num(br.robustness),
    }))


def _cmd_curve(args) -> None:
    B, intervals, deltas = _profile_args(args)
    try:
        grid = analysis.parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(f"--grid: {exc}") from None
    axis = args.axis - 1
    if not 0 <= axis < max(len(intervals), 1):
        raise UsageError(f"--axis: must be between 1 and {len(intervals)}")
    others = [d for k, d in enumerate(deltas) if k != axis]
    if any(d is None for d in others):
        raise UsageError("--interval: predictions off the swept axis need l:u:delta")
    base = [0.0 if k == axis else d for k, d in enumerate(deltas)]
    series = analysis.drcr_curve(B, intervals, grid, base, axis, workers=args.workers)
    if args.format == "csv":
        _emit(args, series.to_csv())
        return
    out = {"spec": series.spec_id, "points": [[_num(d), _num(v)] for d, v in series.points]}
    if len(grid) >= 3:
        rep = analysis.check_shape(series)
        out["shape"] = {
            "monotone_ok": rep.monotone_ok,
            "concave_ok": rep.concave_ok,
            "plateau_start": rep.plateau_start,
            "max_violation": _num(rep.max_violation),
        }
    _emit(args, _json(out))


def _cmd_critical(args) -> None:
    _only_json(args)
    B, intervals, _ = _profile_args(args)
    if len(intervals) != 1:
        raise UsageError("--interval: critical accuracy needs exactly one interval")
    (lo, hi), = intervals
    ProblemSpec.build(B, [(lo, hi)], [0.0])
    _dump(args.dump_lp, skirental.build_critical_lp(B, lo, hi), "critical accuracy")
    crit = analysis.critical_accuracy(B, lo, hi)
    out = {"B": B, "interval": [lo, hi], "critical_delta": _num(crit),
           "robustness_optimum": _num(analysis.robustness_optimum(B))}
    if args.check:
        bis = analysis.critical_accuracy_bisection(B, lo, hi, 1e-9)
        out["bisection_delta"] = _num(bis)
        out["agree"] = abs(bis - crit) <= 1e-6
    _emit(args, _json(out))


def _cmd_feasible(args) -> None:
    B, intervals, deltas = _profile_args(args)
    if args.delta:
        deltas = [d for chunk in args.delta for d in chunk]
    if len(deltas) != len(intervals) or any(d is None for d in deltas):
        raise UsageError("--delta: give one delta per interval")
    ProblemSpec.build(B, intervals, deltas)
    system = skirental.build_accuracy_system(B, intervals, args.v)
    fixed = system.fixed(deltas)
    _dump(args.dump_lp, fixed, f"accuracy system, v={args.v:.9g}")
    ok, _ = lp.feasible(fixed)
    word = "feasible" if ok else "infeasible"
    if args.format == "json":
        _emit(args, _json({"feasible": ok, "v": _num(args.v), "deltas": [_num(d) for d in deltas]}))
    elif args.format == "csv":
        raise UsageError("--format: csv output is only available for curve, not feasible")
    else:
        _emit(args, word + "\n")


def _cmd_robustness(args) -> None:
    _only_json(args)
    if args.B is None:
        raise UsageError("--B is required")
    ProblemSpec.build(args.B)
    _emit(args, _json({"B": args.B, "robustness_optimum": _num(analysis.robustness_optimum(args.B))}))


COMMANDS = {
    "solve": _cmd_solve,
    "evaluate": _cmd_evaluate,
    "curve": _cmd_curve,
    "critical": _cmd_critical,
    "feasible": _cmd_feasible,
    "robustness": _cmd_robustness,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"drcr: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValidationError, ValueError, OSError) as exc:
        print(f"drcr: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as exc:
        print(f"drcr: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
