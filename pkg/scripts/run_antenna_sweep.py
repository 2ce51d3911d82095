#!/usr/bin/env python3
"""Antenna sweep: sum-rate of every architecture versus antenna count.

Runs 100 trials at K=8, SNR 10 dB over L in {16, 32, 64, 128} on paired
channels. Extra CLI flags are forwarded, e.g.

    python scripts/run_antenna_sweep.py --L 16,256 --trials 20
"""

import sys

from milac.cli import main

if __name__ == "__main__":
    sys.exit(main(["antenna-sweep", "--out", "results/antenna_sweep",
                   *sys.argv[1:]]))
