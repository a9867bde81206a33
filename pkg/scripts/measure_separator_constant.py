#!/usr/bin/env python3
"""Measure the separator boundary constant over the instance families.

Prints the worst observed k / sqrt(n) for fresh separators on random
triangulations and grids, and the worst boundary ratio plus recursion
depth seen inside full engine runs.  The documented BOUNDARY_CONSTANT in
planarflow.separator should dominate these numbers with margin.
"""

import math
import random
import sys

sys.path.insert(0, "src")

from planarflow.config import EngineConfig
from planarflow.engine import msms_max_flow
from planarflow.generate import generate
from planarflow.separator import find_cycle_separator
from planarflow.surgery import triangulate_and_biconnect


def fresh_separators(count=300, n_max=10_000, seed=0):
    rng = random.Random(seed)
    worst = 0.0
    for i in range(count):
        kind = "tri" if i % 2 == 0 else "grid"
        n = rng.randint(16, n_max)
        g, _ = generate(kind, n, seed=1000 + i).build()
        gt = triangulate_and_biconnect(g)
        sep = find_cycle_separator(gt)
        ratio = sep.k / math.sqrt(gt.n)
        worst = max(worst, ratio)
        assert len(sep.inside) <= 2 * gt.n / 3
        assert len(sep.outside) <= 2 * gt.n / 3
    return worst


def engine_runs(count=60, n_max=2000, seed=0):
    rng = random.Random(seed)
    worst_ratio = 0.0
    worst_depth_excess = -10.0
    for i in range(count):
        kind = "tri" if i % 2 == 0 else "grid"
        n = rng.randint(40, n_max)
        g, ts = generate(kind, n, seed=2000 + i, cap_max=10 ** 6).build()
        res = msms_max_flow(g, ts.sources, ts.sinks, EngineConfig())
        worst_ratio = max(worst_ratio, res.stats.max_boundary_ratio)
        depth_bound = math.ceil(math.log(max(g.n, 2)) / math.log(1.5))
        worst_depth_excess = max(worst_depth_excess,
                                 res.stats.max_depth - depth_bound)
    return worst_ratio, worst_depth_excess


def main():
    worst_fresh = fresh_separators()
    print(f"fresh separators: worst k/sqrt(n) = {worst_fresh:.3f}")
    worst_engine, depth_excess = engine_runs()
    print(f"engine runs: worst k/sqrt(n) = {worst_engine:.3f}")
    print(f"engine runs: worst depth minus ceil(log_1.5 n) = {depth_excess}")


if __name__ == "__main__":
    main()
