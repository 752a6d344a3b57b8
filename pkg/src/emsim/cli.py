"""Command line front end.

Subcommands: run a script, replay a trace, run the canned experiment
protocols, or serve interactive sessions over TCP. Exit status is 0
when every check passed, 1 when a protocol or assertion failed, and 2
for usage or script errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .adversary import falsification_matrix
from .experiments import (
    covering_schedule,
    gen_random_table,
    run_mental_set_endurance,
    run_mental_set_suite,
    run_theorem3,
    run_theorem4,
)
from .rng import SplitMix64
from .script import ScriptError, replay, run_script
from .server import run_server
from .symbols import make_alphabet
from .trace import ReplayError


def _write_json(path: str | None, payload: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _verdict(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def cmd_run(args: argparse.Namespace) -> int:
    try:
        report, _ = run_script(args.script, seed=args.seed, trace_out=args.trace_out)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScriptError as exc:
        print(f"script error: {exc}", file=sys.stderr)
        return 2
    for rec in report.records:
        if not rec["pass"]:
            print(f"cycle {rec['nu']}: expected {rec['kind']}={rec['expected']}, "
                  f"got {rec['actual']}")
    print(f"{report.notes['cycles']} cycles, {report.probes} assertions, "
          f"{report.mismatches} failed: {_verdict(report.passed)}")
    _write_json(args.report_out, report.to_json_dict())
    return 0 if report.passed else 1


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        result = replay(Path(args.trace).read_text())
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ReplayError as exc:
        print(f"replay error: {exc}", file=sys.stderr)
        return 2
    where = "" if result.diverged_nu is None else f" (cycle {result.diverged_nu})"
    print(f"{result.detail}{where}: {'MATCH' if result.match else 'DIVERGES'}")
    return 0 if result.match else 1


def cmd_theorem3(args: argparse.Namespace) -> int:
    addr = make_alphabet("addr", ["1", "2"])
    data = make_alphabet("data", ["a", "b"])
    schedule = covering_schedule(addr, data, SplitMix64(args.seed))
    tau = args.tau
    if args.negative and tau is None:
        tau = (len(schedule) + args.probes) / 20.0
    report = run_theorem3(addr, data, tau, schedule, args.probes, args.seed)
    ok = (report.mismatches > 0) if args.negative else report.passed
    label = "negative control (expects mismatches)" if args.negative else "retention"
    print(f"{label}: tau={report.notes['tau']}, {report.probes} probes, "
          f"{report.mismatches} mismatches: {_verdict(ok)}")
    _write_json(args.report_out, report.to_json_dict())
    return 0 if ok else 1


def cmd_theorem4(args: argparse.Namespace) -> int:
    rng = SplitMix64(args.seed)
    runs = []
    all_ok = True
    for i in range(args.tables):
        u = make_alphabet("u", ["u1", "u2", "u3"])
        v = make_alphabet("v", ["v1", "v2", "v3"])
        y1 = make_alphabet("y1", ["p", "q", "r"])
        y2 = make_alphabet("y2", ["j", "k", "l"])
        table = gen_random_table(u, v, (y1, y2, v), rng)
        report = run_theorem4(table, seed=args.seed * 1000 + i, tau=args.tau)
        runs.append(report.to_json_dict())
        all_ok = all_ok and report.passed
    print(f"arbitrary tables: {args.tables} tables, "
          f"{sum(r['probes'] for r in runs)} probes, "
          f"{sum(r['mismatches'] for r in runs)} mismatches: {_verdict(all_ok)}")
    _write_json(args.report_out, {"protocol": "theorem4", "pass": all_ok, "runs": runs})
    return 0 if all_ok else 1


def cmd_mentalset(args: argparse.Namespace) -> int:
    if args.endurance:
        report = run_mental_set_endurance(
            args.k, args.seed, refresh_on=args.refresh, tau=args.tau
        )
        what = f"endurance over {report.probes} probes"
    else:
        report = run_mental_set_suite(
            args.k, args.seed, refresh_on=args.refresh, tau=args.tau
        )
        what = f"all {2 ** (2 ** args.k)} functions of {args.k} inputs"
    print(f"mental set (refresh {'on' if args.refresh else 'off'}): {what}, "
          f"{report.mismatches} mismatches: {_verdict(report.passed)}")
    _write_json(args.report_out, report.to_json_dict())
    return 0 if report.passed else 1


def cmd_adversary(args: argparse.Namespace) -> int:
    addr = make_alphabet("addr", ["1", "2"])
    data = make_alphabet("data", ["a", "b"])
    report = falsification_matrix(addr, data, seed=args.seed)
    for rec in report.records:
        mark = "" if rec["pass"] else "  <- unexpected"
        print(f"m={rec['m']:>2} {rec['pair']:<9} {rec['learner']:<7} {rec['result']}{mark}")
    print(f"falsification matrix: {report.mismatches} unexpected cells: "
          f"{_verdict(report.passed)}")
    _write_json(args.report_out, report.to_json_dict())
    return 0 if report.passed else 1


def cmd_serve(args: argparse.Namespace) -> int:
    return run_server(args.host, args.port, args.trace_dir)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a script file")
    p.add_argument("script")
    p.add_argument("--seed", type=int, default=None, help="override the script's SEED")
    p.add_argument("--trace-out", default=None)
    p.add_argument("--report-out", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("replay", help="re-run a trace's script and compare")
    p.add_argument("trace")
    p.set_defaults(func=cmd_replay)

    exp = sub.add_parser("experiment", help="run a canned protocol")
    esub = exp.add_subparsers(dest="protocol", required=True)

    p = esub.add_parser("theorem3", help="working-memory retention exam")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=float, default=None, help="decay constant (default: auto)")
    p.add_argument("--probes", type=int, default=1000)
    p.add_argument("--negative", action="store_true",
                   help="run with tau far too small and expect mismatches")
    p.add_argument("--report-out", default=None)
    p.set_defaults(func=cmd_theorem3)

    p = esub.add_parser("theorem4", help="arbitrary finite-table behavior")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tables", type=int, default=50)
    p.add_argument("--tau", type=float, default=100.0)
    p.add_argument("--report-out", default=None)
    p.set_defaults(func=cmd_theorem4)

    p = esub.add_parser("mentalset", help="tunable production systems")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=float, default=100.0)
    p.add_argument("--refresh", action="store_true", help="enable the refresh wiring")
    p.add_argument("--endurance", action="store_true",
                   help="hold one tuned set under long probing instead of the suite")
    p.add_argument("--report-out", default=None)
    p.set_defaults(func=cmd_mentalset)

    p = esub.add_parser("adversary", help="teacher pairs vs. bounded learners")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report-out", default=None)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("serve", help="serve interactive sessions over TCP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=0, help="0 picks a free port")
    p.add_argument("--trace-dir", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
