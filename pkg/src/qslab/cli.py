"""Command-line surface: scenario runner, invariant verifier, hbar sweep.

Exit codes: 0 when every bound holds (or every check passes), 1 when a bound
is violated or a check fails, 2 for configuration or domain errors.  The
``QSL_OUT`` environment variable overrides ``--out``.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ConfigError, load_scenario
from .liouville import DomainTooSmallError
from .runner import run_scenario
from .verify import DEFAULT_SEED, run_verification
from .wigner import AliasingError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsl",
        description="Speed-limit laboratory: run scenarios, verify invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one or more scenario configs")
    run_p.add_argument("configs", nargs="+", metavar="config-file")
    run_p.add_argument("--out", default="out", help="output directory")
    run_p.add_argument("--jobs", type=int, default=1, help="parallel scenarios")

    ver_p = sub.add_parser("verify", help="run the invariant suite")
    ver_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ver_p.add_argument(
        "--inject-failure",
        action="store_true",
        help="corrupt one tolerance as a negative control",
    )

    sweep_p = sub.add_parser("sweep-hbar", help="run an hbar_sweep scenario")
    sweep_p.add_argument("config", metavar="config-file")
    sweep_p.add_argument("--out", default="out", help="output directory")
    return parser


def _out_dir(cli_value: str) -> Path:
    return Path(os.environ.get("QSL_OUT", cli_value))


def _cmd_run(args) -> int:
    try:
        cfgs = [load_scenario(p) for p in args.configs]
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    names = [c.name for c in cfgs]
    if len(set(names)) != len(names):
        print("error: duplicate scenario names in one batch", file=sys.stderr)
        return 2
    base = _out_dir(args.out)
    dirs = [base if len(cfgs) == 1 else base / c.name for c in cfgs]
    try:
        if args.jobs > 1 and len(cfgs) > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(run_scenario, cfgs, dirs))
        else:
            results = [run_scenario(c, d) for c, d in zip(cfgs, dirs)]
    except (DomainTooSmallError, AliasingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    code = 0
    for result, out in zip(results, dirs):
        print(result.summary)
        print(f"wrote {out}")
        code = max(code, result.exit_code)
    return code


def _cmd_verify(args) -> int:
    report = run_verification(args.seed, inject_failure=args.inject_failure)
    sys.stdout.write(report.text)
    return 0 if report.passed else 1


def _cmd_sweep(args) -> int:
    try:
        cfg = load_scenario(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.sector != "hbar_sweep":
        print(
            f"error: sweep-hbar needs an hbar_sweep scenario, got {cfg.sector!r}",
            file=sys.stderr,
        )
        return 2
    try:
        result = run_scenario(cfg, _out_dir(args.out))
    except (DomainTooSmallError, AliasingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(result.summary)
    print(f"wrote {_out_dir(args.out)}")
    return result.exit_code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_sweep(args)


def entry() -> None:
    sys.exit(main())
