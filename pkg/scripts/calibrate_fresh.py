#!/usr/bin/env python3
"""Calibrate the frozen test constants on a seed set disjoint from the
one the acceptance suite uses.

Reports, over calibration seeds and instance families:
  - the worst sparse-slack and sparse-class-size margins after a fresh
    coloring (justifying gamma = 1/16, C_bal = 8);
  - the largest ratio of sparse color trials to n*log2(n)^2
    (justifying the frozen C_trials).

Acceptance seeds start at 1000; calibration uses 1..50.
"""

import math
from fractions import Fraction

from dyncolor.config import Config
from dyncolor.engine import Engine
from dyncolor.fresh import verify_fresh_properties
from dyncolor.instances import mixed_graph, planted_clique_graph, random_sparse_graph


def families(n: int, delta: int, seed: int):
    yield "planted", planted_clique_graph(n, delta, seed)[0]
    yield "random-sparse", random_sparse_graph(n, delta, avg_deg=6.0, seed=seed)
    yield "mixed", mixed_graph(n, delta, seed)[0]


def main() -> None:
    worst_slack = None
    worst_class = 0
    worst_trial_ratio = 0.0
    cfg_proto = Config(epsilon=Fraction(1, 8), zeta=4)
    for n, delta in ((500, 64), (2000, 128)):
        log2n = math.log2(n)
        for seed in range(1, 51):
            for fam, edges in families(n, delta, seed):
                eng = Engine(
                    n, delta, cfg_proto, seed=10_000 + seed, mode="phased",
                    verify="phase", initial_edges=edges,
                    certify_decomposition=False,
                )
                rep = eng.fresh_reports[-1]
                viols = verify_fresh_properties(
                    eng.g, eng.decomp, eng.state, eng.cfg
                )
                ratio = rep.sparse_trials / (n * log2n**2)
                worst_trial_ratio = max(worst_trial_ratio, ratio)
                if rep.min_sparse_slack is not None:
                    worst_slack = (
                        rep.min_sparse_slack
                        if worst_slack is None
                        else min(worst_slack, rep.min_sparse_slack)
                    )
                worst_class = max(worst_class, rep.max_sparse_class or 0)
                if viols:
                    print(f"VIOLATION n={n} seed={seed} fam={fam}: {viols[:3]}")
    print(f"min sparse slack over runs:      {worst_slack}")
    print(f"max sparse class size over runs: {worst_class}")
    print(f"max sparse trials / (n log^2 n): {worst_trial_ratio:.4f}")


if __name__ == "__main__":
    main()
