"""`zerotwo-sim`: run adversarial scenarios and write transcripts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..core import Tape, group_by_name
from ..core.errors import ZeroTwoError
from .harness import find_secret_leaks, run_scenario
from .scenarios import SCENARIOS, get_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerotwo-sim", description="Adversarial simulation harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one scenario (or all)")
    run.add_argument("--scenario", default=None, help="scenario name, or 'all'")
    run.add_argument("--list", action="store_true", help="list scenarios and exit")
    run.add_argument("--tape", default=None, help="replay a recorded randomness tape")
    run.add_argument("--record-tape", default=None, help="write the tape here")
    run.add_argument("--transcript", default=None, help="write JSONL transcript here")
    run.add_argument(
        "--group", default="main-2048", help="group profile for the run"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ZeroTwoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _run(args) -> int:
    if args.list or args.scenario is None:
        for name, scenario in sorted(SCENARIOS.items()):
            print(f"{name}: {scenario.description}")
        return 0

    names = sorted(SCENARIOS) if args.scenario == "all" else [args.scenario]
    group = group_by_name(args.group)
    tape = None
    if args.tape:
        tape = Tape.from_json(Path(args.tape).read_text())

    failures = 0
    for name in names:
        scenario = get_scenario(name)
        result = run_scenario(scenario, tape=tape, group=group)
        verdict = "PASS" if result.ok else f"FAIL at {result.first_divergence}"
        print(f"{name}: {verdict}")
        for step, outcome in result.outcomes:
            print(f"  {step}: {outcome}")
        leaks = find_secret_leaks(result.transcript, result.secrets)
        if leaks:
            failures += 1
            print(f"  SECRET LEAK: {leaks}")
        if not result.ok:
            failures += 1
        if args.transcript:
            path = Path(args.transcript)
            if len(names) > 1:
                path = path.with_name(f"{path.stem}-{name}{path.suffix}")
            path.write_text(result.transcript.to_jsonl() + "\n")
        if args.record_tape and result.tape is not None:
            path = Path(args.record_tape)
            if len(names) > 1:
                path = path.with_name(f"{path.stem}-{name}{path.suffix}")
            path.write_text(result.tape.to_json() + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
