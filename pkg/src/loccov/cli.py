"""Command line entry point: ``loccov run`` and ``loccov tables``."""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import report as rp
from .suites import SUITE_NAMES, ConfigError, ExperimentConfig, run_suite


def _jobs(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("LOCCOV_JOBS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise SystemExit(f"LOCCOV_JOBS must be an integer, got {env!r}")
    return max(1, n)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loccov", description="Exact verification suites for lattice locally covariant theories.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a verification suite")
    r.add_argument("suite", choices=SUITE_NAMES + ("all",))
    r.add_argument("--config", required=True, help="JSON experiment config")
    r.add_argument("--seed", type=int, default=None, help="override the config seed")
    r.add_argument("--out", default=".", help="output directory for the report")
    r.add_argument("--jobs", type=int, default=None, help="worker processes (default: $LOCCOV_JOBS or 1)")
    t = sub.add_parser("tables", help="flatten a report into CSV tables")
    t.add_argument("report")
    t.add_argument("--out", default=".", help="output directory for the CSV files")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        try:
            cfg = ExperimentConfig.load(args.config).with_seed(args.seed)
        except (OSError, ConfigError) as exc:
            print(f"loccov: {exc}", file=sys.stderr)
            return 2
        rep = run_suite(args.suite, cfg, jobs=_jobs(args.jobs))
        path = rep.write(args.out)
        for c in rep.checks:
            print(f"{c.status.upper():7s} {c.id} [{c.anchor}] {c.timing:.2f}s")
        s = rep.to_json()["summary"]
        print(f"{s['pass']} pass, {s['fail']} fail, {s['flagged']} flagged -> {path}")
        return rep.exit_code
    try:
        data = rp.load(args.report)
    except (OSError, ValueError) as exc:
        print(f"loccov: {exc}", file=sys.stderr)
        return 2
    for path in rp.emit_tables(data, args.out):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
