#!/usr/bin/env python3
"""SNR sweep: sum-rate of every architecture versus transmit SNR.

Runs 100 trials at L=32, K=4 over SNR 0..30 dB in 5 dB steps, comparing
the full-dimension solver, the reduced solver, the two-layer analog
realization, and zero forcing on paired channels. Extra CLI flags are
forwarded, e.g.

    python scripts/run_snr_sweep.py --K 8 --trials 50
"""

import sys

from milac.cli import main

if __name__ == "__main__":
    sys.exit(main(["snr-sweep", "--out", "results/snr_sweep",
                   *sys.argv[1:]]))
