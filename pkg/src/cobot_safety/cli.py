"""Command-line entry point.

    cobot-safety run --scenario scenarios/default.json --seed 7 --out runs/a
    cobot-safety metrics --log runs/a/events.log
    cobot-safety replay --log runs/a/events.log
    cobot-safety trace-csm --scenario scenarios/contact_object.json --out trace.csv

Exit status: 0 success, 1 validation error (bad scenario or log),
2 internal invariant violation (e.g. replay diverged from the log).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .csm import csm_trace, trace_to_csv_rows
from .errors import InvalidScenario, InvariantViolation, MalformedLog
from .sim.engine import make_rng, run_scenario, synth_torque, tick_plan
from .sim.eventlog import read_log, write_log
from .sim.metrics import compute_metrics
from .sim.replay import replay
from .sim.scenario import Scenario, load_scenario

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2
LOG_NAME = "events.log"

log = logging.getLogger("cobot_safety")


def _load(args) -> Scenario:
    scenario = load_scenario(args.scenario)
    if getattr(args, "seed", None) is not None:
        if not 0 <= args.seed < 2**64:
            raise InvalidScenario([("seed", "must be an unsigned 64-bit integer")])
        scenario = replace(scenario, seed=args.seed)
    if getattr(args, "duration", None) is not None:
        if args.duration < 0:
            raise InvalidScenario([("duration", "must be >= 0")])
        scenario = replace(scenario, duration=args.duration)
    return scenario


def cmd_run(args) -> int:
    scenario = _load(args)
    records = run_scenario(scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = write_log(records, out / LOG_NAME)
    metrics = compute_metrics(records)
    print(json.dumps({"log": str(path), "records": len(records), **metrics.as_dict()}))
    return EXIT_OK


def cmd_metrics(args) -> int:
    metrics = compute_metrics(read_log(args.log))
    print(json.dumps(metrics.as_dict()))
    return EXIT_OK


def cmd_replay(args) -> int:
    report = replay(read_log(args.log))
    if not report.ok:
        raise InvariantViolation("; ".join(report.mismatches))
    print(json.dumps({"ok": True, "transitions_checked": report.checked}))
    return EXIT_OK


def cmd_trace_csm(args) -> int:
    scenario = _load(args)
    base, n_ticks, periods = tick_plan(scenario)
    rng = make_rng(scenario.seed)
    samples = (
        synth_torque(n / base, scenario.contacts, scenario.noise_sigma, rng, scenario.num_joints,
                     scenario.csm.monitored_joints)
        for n in range(0, n_ticks, periods["torque"])
    )
    rows = trace_to_csv_rows(csm_trace(samples, scenario.csm), scenario.csm)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="ascii") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    print(json.dumps({"csv": str(out), "samples": len(rows) - 1}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cobot-safety", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario and write its event log")
    run.add_argument("--scenario", required=True)
    run.add_argument("--seed", type=int, help="overrides the scenario seed")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--duration", type=float)
    run.set_defaults(func=cmd_run)

    met = sub.add_parser("metrics", help="compute safety metrics from a log")
    met.add_argument("--log", required=True)
    met.set_defaults(func=cmd_metrics)

    rep = sub.add_parser("replay", help="re-run monitors over a log and compare verdicts")
    rep.add_argument("--log", required=True)
    rep.set_defaults(func=cmd_replay)

    tr = sub.add_parser("trace-csm", help="export the contact monitor's std trace as CSV")
    tr.add_argument("--scenario", required=True)
    tr.add_argument("--seed", type=int)
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=cmd_trace_csm)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InvalidScenario as exc:
        for path, msg in exc.diagnostics:
            print(f"error: {path}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except (MalformedLog, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
