#!/usr/bin/env python3
"""Error rate versus transit time for superconducting memories.

Sweeps the storage interval across six decades at T1 = 0.05 ms and runs the
sweep twice: once with the pure-dephasing weight forced to its maximum and
once with it removed.  The two metrics files come out identical because the
protocol measures in the energy basis only, where dephasing acts trivially.
"""
import argparse
import sys
import tempfile
from pathlib import Path

from qdba.experiments.cli import main

CONFIG = """\
profile = superconducting
t1 = 5e-5
transit = 5e-11,5e-10,5e-9,5e-8,5e-7,5e-6,5e-5
gamma2 = {gamma2}
n = 3
t = 1
m = 112
runs = 10
shots = 30
seed = {seed}
"""


def cli() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/decoherence")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    for label, gamma2 in (("full-dephasing", 1), ("no-dephasing", 0)):
        with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as fh:
            fh.write(CONFIG.format(gamma2=gamma2, seed=args.seed))
            path = fh.name
        code = main(
            [
                "run",
                "--config", path,
                "--out", str(Path(args.out) / label),
                "--workers", str(args.workers),
            ]
        )
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(cli())
