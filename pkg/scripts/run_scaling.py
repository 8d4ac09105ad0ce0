#!/usr/bin/env python3
"""Run the full amortized-cost scaling experiment and print the fitted
log-log slopes (phased engine vs naive baseline, conflict adversary)."""

import sys

from dyncolor.cli import main

if __name__ == "__main__":
    args = [
        "scaling",
        "--n-grid", "512,1024,2048,4096,8192",
        "--steps", "800",
        "--reps", "1",
        "--seed", "1",
        "--out-csv", "scaling.csv",
        "--out-json", "scaling.json",
    ]
    sys.exit(main(args + sys.argv[1:]))
