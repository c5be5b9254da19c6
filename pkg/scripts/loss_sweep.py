#!/usr/bin/env python3
"""Error rate versus fiber length under photonic attenuation (0.2 dB/km x 0.1).

Five players, loyal commander, unheralded loss: lost commander halves record
a fixed bit, so one of the two orders becomes loss-fragile and the error
rate climbs with distance until it saturates near one half.
"""
import argparse
import sys
import tempfile

from qdba.experiments.cli import main

CONFIG = """\
profile = photonic
alpha = 0.02
length = {lengths}
n = 5
t = 0
m = 112
runs = 10
shots = 30
seed = {seed}
"""


def cli() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/loss")
    parser.add_argument(
        "--lengths", default="0.0001,0.01,0.1,1,5,10,50,100", help="km, comma list"
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as fh:
        fh.write(CONFIG.format(lengths=args.lengths, seed=args.seed))
        path = fh.name
    return main(
        ["run", "--config", path, "--out", args.out, "--workers", str(args.workers)]
    )


if __name__ == "__main__":
    sys.exit(cli())
