#!/usr/bin/env python
"""Compare closed-form F and G against Haar Monte Carlo on random operations.

Prints one row per operation with the deviation in standard errors, then the
fraction of cases within 4 sigma.
"""
import argparse
from dataclasses import dataclass, field

import numpy as np

from fidelity_balance.fidelity import (
    McConfig,
    estimation_fidelity_optimal,
    mc_estimation_fidelity,
    mc_operation_fidelity,
    operation_fidelity,
    optimal_guesses,
)
from fidelity_balance.frontier import bound_check
from fidelity_balance.operations import random_operation


@dataclass
class SweepConfig:
    operations: int = 50
    dims: tuple = (2, 3, 4, 5)
    max_outcomes: int = 10
    seed: int = 0
    mc: McConfig = field(default_factory=McConfig)


def run(cfg: SweepConfig) -> None:
    rng = np.random.default_rng(cfg.seed)
    within = np.zeros(2, dtype=int)
    print(f"{'#':>3} {'d':>2} {'N':>3} {'F':>10} {'dF/se':>7} {'G':>10} {'dG/se':>7} {'slack':>10}")
    for k in range(cfg.operations):
        d = int(rng.choice(cfg.dims))
        n = int(rng.integers(1, cfg.max_outcomes + 1))
        op = random_operation(d, n, cfg.seed * 100_003 + k)
        F, G = operation_fidelity(op), estimation_fidelity_optimal(op)
        mc = cfg.mc
        mf = mc_operation_fidelity(op, mc.samples, mc.seed + k, mc.workers, mc.chunk_size)
        mg = mc_estimation_fidelity(op, optimal_guesses(op), mc.samples, mc.seed + k, mc.workers, mc.chunk_size)
        zf = (mf.mean - F) / mf.std_error
        zg = (mg.mean - G) / mg.std_error
        within += [mf.agrees_with(F), mg.agrees_with(G)]
        print(f"{k:3d} {d:2d} {n:3d} {F:10.6f} {zf:7.2f} {G:10.6f} {zg:7.2f} {bound_check(F, G, d).slack:10.3e}")
    print(f"within 4 sigma: F {within[0]}/{cfg.operations}, G {within[1]}/{cfg.operations}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--operations", type=int, default=50)
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    run(SweepConfig(
        operations=args.operations,
        seed=args.seed,
        mc=McConfig(samples=args.samples, seed=args.seed, workers=args.workers),
    ))
