"""Feature selection on an augmented dataset ``D = [A | b]``.

The target ``b`` is always appended as the last column. Its row of the
signature matrix of ``D`` is nonzero exactly on the features that take part
in a relation with ``b``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dense import as_matrix, as_vector, pinv, pseudo_inverse, svd
from .graph import DEFAULT_EDGE_TOL, clusters_of
from .rank1 import DEFAULT_TOL, rank1_update_pinv
from .signature import signature_matrix

NOISE_FLOOR = 1e-10


class NoFeaturesKeptWarning(UserWarning):
    pass


class PerturbationRangeError(ValueError):
    """Perturbation columns stay inside range(A) even after a re-draw."""


@dataclass(frozen=True)
class Dataset:
    A: np.ndarray
    b: np.ndarray
    names: tuple[str, ...] | None = None
    target_name: str | None = None

    def __post_init__(self):
        A = as_matrix(self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", as_vector(self.b, A.shape[0], "b"))
        if self.names is not None and len(self.names) != A.shape[1]:
            raise ValueError(f"{len(self.names)} names for {A.shape[1]} features")

    @property
    def augmented(self) -> np.ndarray:
        return np.column_stack([self.A, self.b])


@dataclass(frozen=True)
class ThresholdPolicy:
    """Cutoff on ``|s|`` for keeping a feature.

    ``local-maxima`` (default): mean of the strict local maxima of ``|s|`` read
    in index order, falling back to ``mean(|s|)`` with fewer than two maxima.
    ``mean``: ``mean(|s|)``. ``fixed``: ``value``. ``quantile``: the ``value``
    quantile of ``|s|``.
    """

    name: str = "local-maxima"
    value: float = 0.0

    def __post_init__(self):
        if self.name not in ("local-maxima", "mean", "fixed", "quantile"):
            raise ValueError(f"unknown threshold policy {self.name!r}")
        if self.name == "quantile" and not 0.0 <= self.value <= 1.0:
            raise ValueError("quantile must lie in [0, 1]")
        if self.value < 0:
            raise ValueError("threshold must be >= 0")

    @classmethod
    def parse(cls, text: str | None) -> "ThresholdPolicy":
        if not text:
            return cls()
        name, _, val = text.partition(":")
        return cls(name, float(val) if val else 0.0)

    def __call__(self, scores: np.ndarray) -> float:
        s = np.abs(np.asarray(scores, dtype=float))
        if s.size == 0:
            return 0.0
        if self.name == "fixed":
            return self.value
        if self.name == "quantile":
            return float(np.quantile(s, self.value))
        if self.name == "mean":
            return float(s.mean())
        peaks = local_maxima(s)
        if len(peaks) < 2:
            return float(s.mean())
        return float(s[peaks].mean())


def local_maxima(s: np.ndarray) -> np.ndarray:
    """Indices strictly larger than both neighbours (one neighbour at the ends)."""
    s = np.asarray(s, dtype=float)
    padded = np.concatenate([[-np.inf], s, [-np.inf]])
    mid = padded[1:-1]
    return np.flatnonzero((mid > padded[:-2]) & (mid > padded[2:]))


@dataclass(frozen=True)
class FeatureReport:
    scores: np.ndarray
    threshold: float
    kept: tuple[int, ...]
    dropped: tuple[int, ...]
    method: str
    target_cluster: tuple[int, ...] | None = None
    variant: str | None = None
    notes: tuple[str, ...] = field(default=())


def relevance_row(D: Dataset, include_target: bool = False,
                  zero_tolerance: float | None = None) -> np.ndarray:
    """Last row of the signature matrix of ``[A | b]`` (feature part unless ``include_target``)."""
    S = signature_matrix(D.augmented, zero_tolerance=zero_tolerance).S
    row = S[-1].copy()
    return row if include_target else row[:-1]


def _split(scores, threshold, floor):
    mag = np.abs(scores)
    keep = (mag >= threshold) & (mag > floor)
    kept = tuple(int(i) for i in np.flatnonzero(keep))
    dropped = tuple(int(i) for i in np.flatnonzero(~keep))
    return kept, dropped


def target_cluster(D: Dataset, edge_tol: float = DEFAULT_EDGE_TOL,
                   zero_tolerance: float | None = None) -> tuple[int, ...]:
    """Features in the same connected component as ``b`` (empty if ``b`` is independent)."""
    partition, _, _ = clusters_of(D.augmented, None, zero_tolerance, edge_tol)
    target = D.A.shape[1]
    members = partition.cluster_of(target)
    if members == "independent":
        return ()
    return tuple(j for j in members if j != target)


def irrelevant_removal(D: Dataset, policy: ThresholdPolicy | None = None, *,
                       edge_tol: float = DEFAULT_EDGE_TOL, noise_floor: float = NOISE_FLOOR,
                       zero_tolerance: float | None = None) -> FeatureReport:
    policy = policy or ThresholdPolicy()
    s = relevance_row(D, zero_tolerance=zero_tolerance)
    th = policy(s)
    kept, dropped = _split(s, th, noise_floor)
    notes = []
    if not kept:
        msg = "every feature was dropped"
        warnings.warn(NoFeaturesKeptWarning(msg), stacklevel=2)
        notes.append(msg)
    return FeatureReport(
        scores=s, threshold=th, kept=kept, dropped=dropped,
        method="signature-based", variant=policy.name,
        target_cluster=target_cluster(D, edge_tol, zero_tolerance), notes=tuple(notes),
    )


def perturbation_screen(D: Dataset, E, *, mode: str = "per-column", tol: float = DEFAULT_TOL,
                        rng: np.random.Generator | None = None) -> FeatureReport:
    """Mark feature ``i`` irrelevant when perturbing it leaves ``x_i`` unchanged.

    ``per-column`` perturbs one column at a time by the matching column of ``E``
    (a rank-1 update each) and scores ``|x_i - x~_i|``. ``shared`` perturbs all
    columns at once by ``E`` and scores the same difference. Columns of ``E``
    that fall in range(A) are re-drawn once from ``rng`` when one is given.
    """
    if mode not in ("per-column", "shared"):
        raise ValueError(f"unknown screen mode {mode!r}")
    A, b = D.A, D.b
    m, n = A.shape
    E = np.array(as_matrix(E, "E"), dtype=float)
    if E.shape != (m, n):
        raise ValueError(f"E must be {m}x{n}, got {E.shape[0]}x{E.shape[1]}")

    factors = svd(A)
    P = pseudo_inverse(factors)

    def in_range_cols(M):
        resid = np.linalg.norm(M - A @ (P @ M), axis=0)
        scale = np.maximum(np.linalg.norm(M, axis=0), 1.0)
        return np.flatnonzero(resid <= tol * scale)

    bad = in_range_cols(E)
    if bad.size and rng is not None:
        E[:, bad] = rng.standard_normal((m, bad.size))
        bad = in_range_cols(E)
    if bad.size:
        raise PerturbationRangeError(
            f"perturbation columns {[int(i) + 1 for i in bad]} lie in the column space of A"
        )

    x = P @ b
    if mode == "shared":
        scores = np.abs(x - pinv(A + E) @ b)
    else:
        scores = np.empty(n)
        pnorm = 1.0 / factors.sigma[factors.rank - 1] if factors.rank else 0.0
        for i in range(n):
            e_i = np.zeros(n)
            e_i[i] = 1.0
            x_t = rank1_update_pinv(A, P, E[:, i], e_i, tol=tol, pinv_norm=pnorm) @ b
            scores[i] = abs(x[i] - x_t[i])

    th = tol * max(float(np.linalg.norm(x)), 1.0)
    irrelevant = scores <= th
    notes = []
    if factors.rank == n:
        notes.append("A has full column rank; cluster-locality guarantees do not apply")
    if np.linalg.norm(b - A @ x) > tol * max(float(np.linalg.norm(b)), 1.0):
        notes.append("b is not in range(A); unchanged components are not guaranteed")
    kept = tuple(int(i) for i in np.flatnonzero(~irrelevant))
    dropped = tuple(int(i) for i in np.flatnonzero(irrelevant))
    if not kept:
        warnings.warn(NoFeaturesKeptWarning("every feature was dropped"), stacklevel=2)
        notes.append("every feature was dropped")
    return FeatureReport(scores=scores, threshold=th, kept=kept, dropped=dropped,
                         method="perturbation-based", variant=mode, notes=tuple(notes))
