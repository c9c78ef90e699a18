#!/usr/bin/env python3
"""Print the worked numbers for the 50 x 40 fixture: S block, clusters,
relations, min-norm solution, relevance row and the F9 perturbation."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from depclust import (
    Dataset,
    canonicalize,
    clusters_of,
    irrelevant_removal,
    min_norm_lsq,
    minimal_relations,
    pseudo_inverse,
    relevance_row,
    sensitivity_report,
    svd,
)
from depclust.synthetic import example_matrix, example_target


@dataclass
class ReproConfig:
    seed: int = 0
    perturb_seed: int = 7
    column: int = 9  # 1-based


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=ReproConfig.seed)
    p.add_argument("--perturb-seed", type=int, default=ReproConfig.perturb_seed)
    p.add_argument("--column", type=int, default=ReproConfig.column)
    cfg = ReproConfig(**{k.replace("-", "_"): v for k, v in vars(p.parse_args()).items()})
    np.set_printoptions(precision=4, suppress=True, linewidth=120)

    A = example_matrix(seed=cfg.seed)
    b = example_target(A)
    f = svd(A)
    part, graph, sig = clusters_of(A, f)
    print(f"rank {f.rank}, sigma_1 {f.sigma_max:.4f}, sigma_rank {f.sigma_rank:.4f}")
    print("S[:10, :10] =")
    print(sig.S[:10, :10])
    print("clusters:", [[j + 1 for j in c] for c in part.clusters], "deficits", part.deficits)
    print("edges:", sorted((i + 1, j + 1) for i, j in graph.edges))

    for members in part.clusters:
        basis = minimal_relations(A, f, members)
        if members == tuple(range(6)):
            basis = canonicalize(basis, [0, 1, 2, 3])
        for line in basis.describe():
            print("  ", line)

    x = min_norm_lsq(pseudo_inverse(f), b, A).x
    print("x[:12] =", x[:12])

    D = Dataset(A, b)
    print("relevance row[:12] =", relevance_row(D)[:12],
          " target entry", round(float(relevance_row(D, include_target=True)[-1]), 6))
    rep = irrelevant_removal(D)
    print(f"kept (threshold {rep.threshold:.4f}):", [j + 1 for j in rep.kept])

    rng = np.random.default_rng(cfg.perturb_seed)
    pr = sensitivity_report(A, f, b, cfg.column - 1, rng.standard_normal(A.shape[0]),
                            cross_check=True)
    print(f"perturb F{cfg.column}: case {pr.case}, |dx|[:12] =", pr.delta[:12])
    print(f"  ||dx|| {pr.delta_norm:.6f}, 2|x_j| {pr.bound:.6f}, |x_j|/sqrt(S_jj) "
          f"{pr.predicted_norm:.6f}, outside max {pr.outside_max:.1e}")


if __name__ == "__main__":
    main()
