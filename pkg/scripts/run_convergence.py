#!/usr/bin/env python3
"""Convergence experiment: per-iteration objective of the reduced solver.

Runs 100 trials at L=32, K=4 over SNR {0, 10, 20, 30} dB and writes
results.csv, summary.csv, solves.jsonl, and iterations.csv (the objective
trajectory of every trial). Any milac CLI flag can be appended, e.g.

    python scripts/run_convergence.py --trials 10 --seed 42
"""

import sys

from milac.cli import main

if __name__ == "__main__":
    sys.exit(main(["convergence", "--out", "results/convergence",
                   *sys.argv[1:]]))
