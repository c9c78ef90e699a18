#!/usr/bin/env python3
"""Write the 50 x 40 planted-relation fixture (plus target column) as CSV."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from depclust.csvio import write_matrix_csv
from depclust.synthetic import example_matrix, example_target


@dataclass
class FixtureConfig:
    out: str = "example.csv"
    seed: int = 0
    with_target: bool = True


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=FixtureConfig.out)
    p.add_argument("--seed", type=int, default=FixtureConfig.seed)
    p.add_argument("--no-target", dest="with_target", action="store_false")
    cfg = FixtureConfig(**vars(p.parse_args()))

    A = example_matrix(seed=cfg.seed)
    names = [f"F{j}" for j in range(1, A.shape[1] + 1)]
    if cfg.with_target:
        A = np.column_stack([A, example_target(A)])
        names.append("label")
    write_matrix_csv(cfg.out, A, names=names)
    print(f"wrote {cfg.out} ({A.shape[0]} x {A.shape[1]})")


if __name__ == "__main__":
    main()
