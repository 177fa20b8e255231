"""Command-line entry point: run, validate, goldens."""

from __future__ import annotations

import argparse
import sys

import yaml

from .config import validate_config
from .errors import PairsimError
from .runner import check_goldens, run_scenario

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairsim",
        description=(
            "Exact simulation of qubit-pairing coherence preservation: "
            "run declarative experiment scenarios and emit CSV time series "
            "plus a JSON summary."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario config")
    run_p.add_argument("config", help="path to a YAML experiment config")
    run_p.add_argument("--out", metavar="DIR", help="output directory override")
    run_p.add_argument(
        "--workers", type=int, default=1, metavar="N", help="sweep worker threads"
    )
    run_p.add_argument(
        "--seed", type=int, default=None, metavar="S", help="seed override"
    )

    val_p = sub.add_parser("validate", help="check a config without running it")
    val_p.add_argument("config", help="path to a YAML experiment config")

    gold_p = sub.add_parser(
        "goldens", help="re-run golden configs and compare CSV bytes"
    )
    gold_p.add_argument(
        "--update", action="store_true", help="rewrite the stored golden CSVs"
    )
    gold_p.add_argument(
        "--dir", default="goldens", metavar="PATH", help="goldens directory"
    )
    gold_p.add_argument("--workers", type=int, default=1, metavar="N")
    return parser


def _load_and_validate(path: str):
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f.read())
    except OSError as exc:
        return None, [f"cannot read {path}: {exc}"]
    except yaml.YAMLError as exc:
        return None, [f"not valid YAML: {exc}"]
    return validate_config(data)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "validate":
        cfg, violations = _load_and_validate(args.config)
        if violations:
            print(f"invalid config ({len(violations)} problem(s)):")
            for v in violations:
                print(f"  - {v}")
            return EXIT_ERROR
        print(f"ok: {cfg.scenario} scenario")
        return EXIT_OK

    if args.command == "run":
        cfg, violations = _load_and_validate(args.config)
        if violations:
            print(f"invalid config ({len(violations)} problem(s)):", file=sys.stderr)
            for v in violations:
                print(f"  - {v}", file=sys.stderr)
            return EXIT_ERROR
        try:
            outcome = run_scenario(
                cfg, out_dir=args.out, workers=args.workers, seed=args.seed
            )
        except PairsimError as exc:
            print(f"run failed: {exc}", file=sys.stderr)
            return EXIT_ERROR
        for name, ok in sorted(outcome.summary["assertions"].items()):
            print(f"{'PASS' if ok else 'FAIL'} {name}")
        for flag in outcome.summary["flags"]:
            print(f"FLAG {flag}")
        print(f"wrote {len(outcome.artifacts)} artifact(s) -> {outcome.artifacts[-1].parent}")
        return EXIT_OK if outcome.exit_code == 0 else EXIT_ASSERTION

    if args.command == "goldens":
        try:
            ok, report = check_goldens(
                args.dir, update=args.update, workers=args.workers
            )
        except PairsimError as exc:
            print(f"goldens failed: {exc}", file=sys.stderr)
            return EXIT_ERROR
        for line in report:
            print(line)
        if args.update:
            return EXIT_OK
        return EXIT_OK if ok else EXIT_ASSERTION

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
