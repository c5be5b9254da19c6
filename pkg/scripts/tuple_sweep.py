#!/usr/bin/env python3
"""Abort rate versus pair-tuple count M for several traitor densities.

Noiseless eleven-player runs with M from 16 to 160; the abort rate falls
toward zero as the masked record grows, fastest for few traitors.
"""
import argparse
import sys
import tempfile

from qdba.experiments.cli import main

CONFIG = """\
profile = logical
p0 = 1
n = 11
t = {t}
m = 16:160:16
runs = 10
shots = 30
seed = {seed}
"""


def cli() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/tuples")
    parser.add_argument("--t", default="0,5,10", help="traitor counts, comma list")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as fh:
        fh.write(CONFIG.format(t=args.t, seed=args.seed))
        path = fh.name
    return main(
        ["run", "--config", path, "--out", args.out, "--workers", str(args.workers)]
    )


if __name__ == "__main__":
    sys.exit(cli())
