#!/usr/bin/env python3
"""Bilinear packet-interaction sweep: fit the fast-frequency exponent of
||uv||_{L^2_{t,x}} for frequency-separated free wave packets.

Usage: python3 scripts/run_bilinear_sweep.py [out_dir]
"""

import math
import sys

from nlslab.cli import main

OUT = sys.argv[1] if len(sys.argv) > 1 else "out/bilinear"
T = 0.7 * 2 * math.pi / (3 * 16)  # one packet pass at the slowest M

if __name__ == "__main__":
    sys.exit(main([
        "bilinear", "--out", OUT,
        "--set", "n=512", "--set", "N=2", "--set", "M_list=16,32,64,128",
        "--set", f"t_end={T}", "--set", "trials=3", "--set", "n_times=97",
        "--seed", "0",
    ]))
