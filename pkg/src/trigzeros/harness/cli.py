"""Command-line entry point: ``trigzeros {simulate,rate,validate,theta}``."""
from __future__ import annotations

import argparse
import logging
import sys

from ..errors import InvalidArgumentError
from .config import ExperimentConfig
from .engine import default_threads

_KIND = {"simulate": "zero-count-law", "rate": "rate-curve",
         "validate": "validate", "theta": "theta-convergence"}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trigzeros", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _KIND:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file mirroring ExperimentConfig fields")
        sp.add_argument("--out", help="CSV output path (overrides output_path)")
        sp.add_argument("--seed", type=int, help="override master_seed")
        sp.add_argument("--threads", type=int, default=default_threads(),
                        help="worker threads (default: all cores)")
        if name == "validate":
            sp.add_argument("--fault", choices=["sinc"], help=argparse.SUPPRESS)
    return ap


def load_config(command: str, path: str | None, seed: int | None, out: str | None) -> ExperimentConfig:
    data = {}
    if path:
        data = ExperimentConfig.from_json(path).to_dict()
        if data["kind"] != _KIND[command]:
            raise InvalidArgumentError(
                f"config kind {data['kind']!r} does not match subcommand {command!r}")
    data["kind"] = _KIND[command]
    if seed is not None:
        data["master_seed"] = seed
    if out is not None:
        data["output_path"] = out
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.command, args.config, args.seed, args.out)
        if args.threads < 1:
            raise InvalidArgumentError("--threads must be at least 1")
    except (InvalidArgumentError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    from . import experiments
    from .validate import run_validate

    if args.command == "validate":
        report = run_validate(cfg, fault=args.fault)
        text = report.text()
        sys.stdout.write(text)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        return report.exit_code
    if args.command == "simulate":
        table = experiments.run_zero_count_law(cfg, args.threads).table
    elif args.command == "rate":
        table = experiments.run_rate_curve(cfg, args.threads)
    else:
        table = experiments.run_theta_convergence(cfg, args.threads)
    csv_path, json_path = table.write(cfg.output_path)
    sys.stdout.write(table.to_csv_text())
    print(f"wrote {csv_path} and {json_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
