#!/usr/bin/env python3
"""Compare the closed-form rank-1 update against a fresh SVD pseudo-inverse,
case by case, and print worst relative errors and timings."""

from __future__ import annotations

import argparse
import time
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from depclust import pinv, rank1_update_pinv
from depclust.synthetic import forced_update


@dataclass
class SweepConfig:
    trials_per_case: int = 100
    max_m: int = 40
    max_n: int = 30
    seed: int = 0


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials-per-case", type=int, default=SweepConfig.trials_per_case)
    p.add_argument("--max-m", type=int, default=SweepConfig.max_m)
    p.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    cfg = SweepConfig(**vars(p.parse_args()))

    rng = np.random.default_rng(cfg.seed)
    worst = defaultdict(float)
    t_update = t_direct = 0.0
    mismatched = 0
    for case in range(1, 7):
        for _ in range(cfg.trials_per_case):
            m, n = int(rng.integers(3, cfg.max_m + 1)), int(rng.integers(3, cfg.max_n + 1))
            A, c, d = forced_update(rng, case, m, n)
            P = pinv(A)
            t0 = time.perf_counter()
            out, ing = rank1_update_pinv(A, P, c, d, full_output=True)
            t1 = time.perf_counter()
            direct = pinv(A + np.outer(c, d))
            t2 = time.perf_counter()
            t_update += t1 - t0
            t_direct += t2 - t1
            mismatched += int(ing.case) != case
            err = np.linalg.norm(out - direct) / np.linalg.norm(direct)
            worst[case] = max(worst[case], float(err))

    for case in range(1, 7):
        print(f"case {case}: worst relative error {worst[case]:.2e}")
    print(f"misclassified {mismatched}; update {t_update:.3f} s, direct SVD {t_direct:.3f} s")


if __name__ == "__main__":
    main()
