"""
Command-line entry point: ``cu-factor --input PATH [options]``.

PATH is a scenario file or a directory whose ``*.cus`` files are run in
name order. The exit status is 0 when no command had an unexpected
outcome, 1 otherwise, and 2 when a scenario cannot be parsed or reports
cannot be written.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from cuf.cli.runner import ReportWriteError, run_scenario
from cuf.cli.scenario import ScenarioError, load_scenario
from cuf.config import Config

logger = logging.getLogger(__name__)

SCENARIO_SUFFIX = ".cus"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cu-factor",
        description="Run Cu-semigroup scenarios: pureness checks, the alpha bimorphism and the lemma suite.",
    )
    parser.add_argument("--input", required=True, help="Scenario file, or directory of *.cus scenarios")
    parser.add_argument("--out", help="Directory receiving reports (default from config)")
    parser.add_argument("--depth", type=int, help="Default grid depth")
    parser.add_argument("--frac-bound", type=int, help="Bound on sampled numerators and denominators")
    parser.add_argument("--seed", type=int, help="Seed for sampled sweeps")
    parser.add_argument("--format", choices=["text", "machine"], help="Report format")
    parser.add_argument("--jobs", type=int, help="Workers per command (env CU_FACTOR_JOBS)")
    parser.add_argument("--no-timing", action="store_true", help="Write elapsed_ms as 0 for reproducible reports")
    parser.add_argument("--log-level", help="Logging level (default WARNING)")
    return parser


def scenario_paths(target: Path) -> List[Path]:
    if target.is_dir():
        return sorted(target.glob(f"*{SCENARIO_SUFFIX}"))
    return [target]


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = Config.load_from_env()
    logging.basicConfig(
        level=(args.log_level or config.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    overrides = {
        "out_dir": args.out,
        "depth": args.depth,
        "frac_bound": args.frac_bound,
        "seed": args.seed,
        "report_format": args.format,
        "jobs": args.jobs,
        "include_timing": False if args.no_timing else None,
    }
    paths = scenario_paths(Path(args.input))
    if not paths:
        print(f"no scenarios found under {args.input}", file=sys.stderr)
        return 2
    status = 0
    for path in paths:
        try:
            scenario = load_scenario(path)
        except OSError as e:
            print(f"{path}: {e}", file=sys.stderr)
            return 2
        except ScenarioError as e:
            print(f"{path}:{e}", file=sys.stderr)
            return 2
        try:
            outcome = run_scenario(scenario, config, overrides)
        except ReportWriteError as e:
            print(f"{path}: {e}", file=sys.stderr)
            return 2
        unexpected = sum(1 for r in outcome.reports if r.unexpected)
        print(f"{path.name}: {len(outcome.reports)} commands, {unexpected} unexpected")
        status = max(status, outcome.exit_status)
    return status


if __name__ == "__main__":
    sys.exit(main())
