"""Command line entry: run a config file, a ternary sweep, or a param sweep.

Exit codes: 0 success, 2 config problem, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from ..quantum import ParameterError
from .config import ConfigError, parse_config
from .runner import run_ensemble, write_outputs


def _split_key(line: str) -> str:
    key, _, _ = line.partition("=")
    return key.strip().lower()


def apply_overrides(text: str, overrides: list[str]) -> str:
    """Replace or append `key = value` lines; later overrides win."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}' must be key=value")
    keys = {_split_key(item) for item in overrides}
    kept = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped and "=" in stripped and _split_key(stripped) in keys:
            continue
        kept.append(line)
    kept.extend(overrides)
    return "\n".join(kept)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="override the rng seed")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--workers", type=int, default=1, help="worker processes")
    parser.add_argument(
        "--per-shot", action="store_true", help="also write per-shot rows to shots.csv"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdba-sim",
        description="Simulate EPR-pair detectable Byzantine agreement sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a config file as-is")
    run.add_argument("--config", required=True, help="path to a key=value config file")
    _add_common(run)

    ternary = sub.add_parser("ternary", help="Pauli simplex sweep at fixed p0")
    ternary.add_argument("--p0", type=float, required=True)
    ternary.add_argument("--resolution", type=int, default=13)
    ternary.add_argument("--n", type=int, default=3)
    ternary.add_argument("--t", type=int, default=1)
    ternary.add_argument("--m", type=int, default=112)
    ternary.add_argument("--runs", type=int, default=10)
    ternary.add_argument("--shots", type=int, default=30)
    _add_common(ternary)

    sweep = sub.add_parser("sweep", help="run a config file with key overrides")
    sweep.add_argument("--config", required=True, help="path to the base config file")
    sweep.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUES",
        help="override, e.g. m=16:160:16 or t=0,5,10 (repeatable)",
    )
    _add_common(sweep)
    return parser


def _config_text(args: argparse.Namespace) -> str:
    if args.command == "ternary":
        lines = [
            "profile = logical",
            f"ternary_p0 = {args.p0}",
            f"ternary_resolution = {args.resolution}",
            f"n = {args.n}",
            f"t = {args.t}",
            f"m = {args.m}",
            f"runs = {args.runs}",
            f"shots = {args.shots}",
        ]
        return "\n".join(lines)
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    if args.command == "sweep":
        text = apply_overrides(text, args.param)
    return text


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _config_text(args)
        if args.seed is not None:
            text = apply_overrides(text, [f"seed = {args.seed}"])
        config = parse_config(text)
        if args.workers < 1:
            raise ConfigError(f"workers={args.workers} must be >= 1")
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        rows, shot_rows = run_ensemble(
            config, workers=args.workers, collect_shots=args.per_shot
        )
        out_dir = args.out or config.out or "results"
        out = write_outputs(rows, out_dir, config, shot_rows)
    except Exception as exc:  # noqa: BLE001 - surface anything as exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows)} rows to {out / 'metrics.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
