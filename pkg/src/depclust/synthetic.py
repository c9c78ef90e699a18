"""Random matrices with planted column relations.

The signature matrix depends only on which relations hold between columns,
so these generators reproduce published fixtures exactly up to rounding
regardless of the random draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


# Relations among the first ten columns of the 50 x 40 fixture (1-based labels).
EXAMPLE_RELATIONS = {
    1: {5: 2.0, 6: 1.0},
    2: {5: -1.0, 6: 2.0},
    3: {5: 1.0, 6: -3.0},
    4: {5: 3.0, 6: 1.0},
    7: {9: 1.0, 10: -5.0},
    8: {9: 5.0, 10: 1.0},
}


def example_matrix(seed: int = 0, m: int = 50, n: int = 40) -> np.ndarray:
    """Gaussian ``m x n`` matrix whose only column relations are ``EXAMPLE_RELATIONS``.

    Two clusters result, columns 1-6 and 7-10 (1-based), and rank ``n - 6``.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    for target, combo in EXAMPLE_RELATIONS.items():
        A[:, target - 1] = sum(coef * A[:, src - 1] for src, coef in combo.items())
    return A


def example_target(A: np.ndarray) -> np.ndarray:
    """``b = 15 F3 + 9 F9 - 3 F12`` for the fixture matrix."""
    return 15.0 * A[:, 2] + 9.0 * A[:, 8] - 3.0 * A[:, 11]


def full_row_rank_example(seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """8 x 11 uniform matrix with ``F9 = 9 F1``, ``F10 = 10 F2``, ``F11 = 11 F3``.

    Returns ``(A, b)`` with ``b = 5 F1 + 4 F2 - 2 F4``; rank is 8 so every
    perturbation lies in the column space.
    """
    rng = np.random.default_rng(seed)
    A = np.empty((8, 11))
    A[:, :8] = rng.random((8, 8))
    A[:, 8] = 9.0 * A[:, 0]
    A[:, 9] = 10.0 * A[:, 1]
    A[:, 10] = 11.0 * A[:, 2]
    b = 5.0 * A[:, 0] + 4.0 * A[:, 1] - 2.0 * A[:, 3]
    return A, b


@dataclass(frozen=True)
class PlantedInstance:
    A: np.ndarray
    clusters: tuple[tuple[int, ...], ...]   # 0-based column indices after shuffling
    deficits: tuple[int, ...]
    independent: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.A.shape[1] - sum(self.deficits)


def planted_clusters(rng: np.random.Generator, sizes, deficits, n_independent: int = 5,
                     extra_rows: int = 5, shuffle: bool = True) -> PlantedInstance:
    """Build a matrix with one maximally dependent cluster per ``(size, deficit)`` pair.

    Each cluster has ``size - deficit`` random basis columns; the other
    ``deficit`` columns are dense Gaussian combinations of them, which keeps
    the cluster from splitting. Columns are optionally shuffled.
    """
    sizes, deficits = list(sizes), list(deficits)
    if len(sizes) != len(deficits):
        raise ValueError("sizes and deficits differ in length")
    for t, r in zip(sizes, deficits):
        if not 1 <= r <= t - 1:
            raise ValueError(f"deficit {r} invalid for cluster size {t}")
    n = sum(sizes) + n_independent
    rank = n - sum(deficits)
    m = rank + extra_rows
    blocks, groups = [], []
    col = 0
    for t, r in zip(sizes, deficits):
        base = rng.standard_normal((m, t - r))
        coeffs = rng.standard_normal((t - r, r))
        blocks.append(np.hstack([base @ coeffs, base]))
        groups.append(list(range(col, col + t)))
        col += t
    blocks.append(rng.standard_normal((m, n_independent)))
    indep = list(range(col, col + n_independent))
    A = np.hstack(blocks)

    perm = rng.permutation(n) if shuffle else np.arange(n)
    A = A[:, perm]
    where = np.empty(n, dtype=int)
    where[perm] = np.arange(n)
    clusters = tuple(tuple(sorted(int(where[j]) for j in g)) for g in groups)
    return PlantedInstance(
        A=A,
        clusters=clusters,
        deficits=tuple(deficits),
        independent=tuple(sorted(int(where[j]) for j in indep)),
    )


def random_planted(rng: np.random.Generator, max_clusters: int = 5, max_size: int = 8,
                   min_clusters: int = 2, n_independent: int | None = None) -> PlantedInstance:
    """Planted instance with random cluster count, sizes in ``2..max_size`` and deficits."""
    k = int(rng.integers(min_clusters, max_clusters + 1))
    sizes = [int(rng.integers(2, max_size + 1)) for _ in range(k)]
    deficits = [int(rng.integers(1, t)) for t in sizes]
    if n_independent is None:
        n_independent = int(rng.integers(0, 8))
    return planted_clusters(rng, sizes, deficits, n_independent=n_independent,
                            extra_rows=int(rng.integers(1, 8)))


def low_rank(rng: np.random.Generator, m: int, n: int, r: int, spread=(1.0, 10.0)) -> np.ndarray:
    """Random m x n matrix of exact rank r with singular values drawn from ``spread``."""
    U, _ = np.linalg.qr(rng.standard_normal((m, r)))
    V, _ = np.linalg.qr(rng.standard_normal((n, r)))
    return U @ np.diag(rng.uniform(*spread, r)) @ V.T


def forced_update(rng: np.random.Generator, case: int, m: int = 10, n: int = 8):
    """``(A, c, d)`` whose rank-1 update falls in ``case`` (1..6) of the classification.

    ``c`` is put in or out of range(A) and ``d`` in or out of range(A^T) as
    the case needs; singular cases rescale ``c`` so that ``1 + d^T A^+ c = 0``.
    The rank of ``A`` is at least 2 so the updated matrix never vanishes.
    """
    r = int(rng.integers(2, min(m, n)))
    A = low_rank(rng, m, n, r)
    c_in = case in (2, 3, 6)
    d_in = case in (4, 5, 6)
    singular = case in (2, 4, 6)
    c = A @ rng.standard_normal(n) if c_in else rng.standard_normal(m)
    d = A.T @ rng.standard_normal(m) if d_in else rng.standard_normal(n)
    t = float(d @ np.linalg.pinv(A) @ c)
    if singular:
        c = -c / t
    elif abs(1.0 + t) < 0.1:
        c = 2.0 * c
    return A, c, d
