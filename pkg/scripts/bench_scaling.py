#!/usr/bin/env python3
"""Scaling experiment: run the bench ladder and print the CSV report.

Equivalent to `planarflow bench` with a wider ladder; useful for eyeballing
the measured exponent across both instance families.
"""

import sys

sys.path.insert(0, "src")

from planarflow.bench import report, run_one
from planarflow.separator import BOUNDARY_CONSTANT


def main():
    sizes = [100, 200, 400, 800, 1600, 3200]
    repeats = 3
    rows = []
    for kind in ("grid", "tri"):
        for n in sizes:
            for r in range(repeats):
                rows.append(run_one(kind, n, seed=r, cap_max=10 ** 6))
    sys.stdout.write(report(rows, BOUNDARY_CONSTANT))


if __name__ == "__main__":
    main()
