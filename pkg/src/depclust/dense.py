"""Dense linear-algebra substrate: SVD, numeric rank, pseudo-inverse, kernel basis.

Matrices are plain ``float64`` numpy arrays in C (row-major) order. Every public
entry point funnels its input through :func:`as_matrix`, which rejects empty
arrays and non-finite entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

EPS = np.finfo(np.float64).eps


class SvdConvergenceError(ArithmeticError):
    """Raised when every LAPACK SVD driver fails to converge."""


def as_matrix(a, name: str = "A") -> np.ndarray:
    """Return ``a`` as a finite, non-empty 2-D float64 array (copy-free when possible)."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise ValueError(f"{name} has a non-finite entry at (row {bad[0]}, col {bad[1]})")
    return np.ascontiguousarray(arr)


def as_vector(x, size: int, name: str) -> np.ndarray:
    vec = np.asarray(x, dtype=np.float64).reshape(-1)
    if vec.shape[0] != size:
        raise ValueError(f"{name} must have length {size}, got {vec.shape[0]}")
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{name} has non-finite entries")
    return vec


@dataclass(frozen=True)
class RankPolicy:
    """How singular values are cut off when deciding the numeric rank.

    ``kind="default"`` uses ``sigma_1 * max(m, n) * eps``. ``"relative"`` uses
    ``value * sigma_1`` and ``"absolute"`` uses ``value`` as-is.
    """

    kind: str = "default"
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("default", "relative", "absolute"):
            raise ValueError(f"unknown rank policy kind {self.kind!r}")
        if not (self.value >= 0.0 and np.isfinite(self.value)):
            raise ValueError("rank tolerance must be finite and >= 0")

    @classmethod
    def parse(cls, text: str | None) -> "RankPolicy":
        """Parse ``"default"``, ``"abs:1e-6"``, ``"rel:1e-10"`` or a bare float (relative)."""
        if text is None or text == "" or text == "default":
            return cls()
        if ":" in text:
            kind, _, val = text.partition(":")
            kind = {"abs": "absolute", "rel": "relative"}.get(kind, kind)
            return cls(kind, float(val))
        return cls("relative", float(text))

    def threshold(self, sigma: np.ndarray, shape: tuple[int, int]) -> float:
        smax = float(sigma[0]) if sigma.size else 0.0
        if self.kind == "absolute":
            return self.value
        if self.kind == "relative":
            return self.value * smax
        return smax * max(shape) * EPS


@dataclass(frozen=True)
class SvdFactors:
    """Full SVD ``A = U diag(sigma) V^T`` with a decided numeric rank."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    rank: int
    shape: tuple[int, int]
    threshold: float
    policy: RankPolicy = field(default_factory=RankPolicy)

    @property
    def sigma_max(self) -> float:
        return float(self.sigma[0]) if self.sigma.size else 0.0

    @property
    def sigma_rank(self) -> float:
        """Smallest singular value kept by the rank decision (0 for the zero matrix)."""
        return float(self.sigma[self.rank - 1]) if self.rank else 0.0

    def with_policy(self, policy: RankPolicy) -> "SvdFactors":
        thr = policy.threshold(self.sigma, self.shape)
        return SvdFactors(self.U, self.sigma, self.V, _count_above(self.sigma, thr),
                          self.shape, thr, policy)


def _count_above(sigma: np.ndarray, thr: float) -> int:
    return int(np.count_nonzero(sigma > thr))


def svd(a, policy: RankPolicy | None = None) -> SvdFactors:
    """Full SVD of ``a`` with ``U`` (m x m) and ``V`` (n x n) orthogonal.

    Uses LAPACK ``gesdd`` and falls back to the slower but more robust
    ``gesvd`` driver if the divide-and-conquer iteration fails.
    """
    A = as_matrix(a)
    policy = policy or RankPolicy()
    m, n = A.shape
    try:
        U, s, Vt = np.linalg.svd(A, full_matrices=True)
    except np.linalg.LinAlgError:
        try:
            U, s, Vt = scipy.linalg.svd(A, full_matrices=True, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise SvdConvergenceError(
                f"SVD of a {m}x{n} matrix did not converge within the LAPACK "
                f"iteration cap (tried gesdd and gesvd)"
            ) from exc
    thr = policy.threshold(s, (m, n))
    return SvdFactors(U, s, Vt.T.copy(), _count_above(s, thr), (m, n), thr, policy)


def numeric_rank(factors: SvdFactors, policy: RankPolicy | None = None) -> int:
    """Largest ``rho`` with ``sigma_rho`` above the policy threshold."""
    if policy is None:
        policy = factors.policy
    return _count_above(factors.sigma, policy.threshold(factors.sigma, factors.shape))


def pseudo_inverse(factors: SvdFactors) -> np.ndarray:
    """Moore-Penrose inverse ``V_rho diag(1/sigma) U_rho^T`` (n x m)."""
    r = factors.rank
    Vr = factors.V[:, :r]
    Ur = factors.U[:, :r]
    return (Vr / factors.sigma[:r]) @ Ur.T


def null_space_basis(factors: SvdFactors) -> np.ndarray:
    """Orthonormal basis of ker(A): columns ``rank..n-1`` of ``V`` (n x (n - rank))."""
    return factors.V[:, factors.rank:]


def pinv(a, policy: RankPolicy | None = None) -> np.ndarray:
    return pseudo_inverse(svd(a, policy))


def penrose_defects(A: np.ndarray, X: np.ndarray) -> tuple[float, float, float, float]:
    """Max-abs residuals of the four Penrose identities for candidate ``X = A^+``."""
    AX = A @ X
    XA = X @ A
    return (
        float(np.max(np.abs(AX @ A - A))),
        float(np.max(np.abs(XA @ X - X))),
        float(np.max(np.abs(AX - AX.T))),
        float(np.max(np.abs(XA - XA.T))),
    )
