#!/usr/bin/env python3
"""Pauli-mixture sweep over the probability simplex at fixed survival 0.975.

Runs the 105-point grid (resolution 13) at N=3, T=1, M=112 with 300 shots
per point and writes metrics.csv consumable by qdba-plot's ternary renderer.
"""
import argparse
import sys

from qdba.experiments.cli import main


def cli() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/ternary")
    parser.add_argument("--p0", type=float, default=0.975)
    parser.add_argument("--resolution", type=int, default=13)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    return main(
        [
            "ternary",
            "--p0", str(args.p0),
            "--resolution", str(args.resolution),
            "--n", "3",
            "--t", "1",
            "--m", "112",
            "--seed", str(args.seed),
            "--out", args.out,
            "--workers", str(args.workers),
        ]
    )


if __name__ == "__main__":
    sys.exit(cli())
