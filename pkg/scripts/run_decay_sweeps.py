#!/usr/bin/env python3
"""Run the two headline decay sweeps (tapered-energy drift and high-frequency
smoothing of the integral term) and write their artifacts under out/.

Usage: python3 scripts/run_decay_sweeps.py [out_dir]
"""

import sys
from pathlib import Path

from nlslab.cli import main

OUT = Path(sys.argv[1] if len(sys.argv) > 1 else "out")

SWEEPS = {
    "almost_conservation": [
        "almost-conservation",
        "--set", "n=128", "--set", "dt=2e-4", "--set", "t_end=1.0",
        "--set", "snapshot_stride=25", "--set", "N_list=2,4,8,16",
        "--set", "amplitude=0.5", "--set", "data_s=0.76", "--set", "epsilon=0.5",
        "--seed", "11",
    ],
    "smoothing": [
        "smoothing",
        "--set", "n=128", "--set", "dt=1e-3", "--set", "t_end=0.5",
        "--set", "snapshot_stride=10", "--set", "N_list=4,8,16,32",
        "--set", "data=sobolev_decay", "--set", "data_s=1.5",
        "--set", "amplitude=0.3", "--set", "epsilon=0.5",
        "--seed", "7",
    ],
}

if __name__ == "__main__":
    status = 0
    for name, argv in SWEEPS.items():
        out = OUT / name
        code = main(argv + ["--out", str(out)])
        print(f"{name}: exit {code} -> {out}/report.json")
        status = max(status, code)
    sys.exit(status)
