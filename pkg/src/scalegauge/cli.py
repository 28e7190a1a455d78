"""Command-line entry point: ``scalegauge --config run.json [--suite NAME]... [--out DIR]``.

Exit codes: 0 all suites pass, 1 a suite failed, 2 bad config, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError
from .harness import SUITES, load_config, run_suites, validate_suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scalegauge", description="Run scaled-structure and lattice gauge checks.")
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--suite", action="append", metavar="NAME",
                   help=f"suite to run (repeatable; overrides config). One of: {', '.join(SUITES)}")
    p.add_argument("--out", metavar="DIR", help="output directory (overrides config output_dir)")
    p.add_argument("-q", "--quiet", action="store_true", help="only log failures")
    return p


def run(config_path, suites=None, out=None) -> int:
    try:
        cfg = load_config(config_path)
        if suites:
            cfg.suites = validate_suites(suites)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(out) if out is not None else cfg.output_dir
    try:
        reports = run_suites(cfg, out_dir)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s", stream=sys.stderr)
    return run(args.config, args.suite, args.out)


if __name__ == "__main__":
    sys.exit(main())
