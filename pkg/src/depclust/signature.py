"""The signature matrix ``S = I - A^+ A`` and column independence tests.

``S`` is the orthogonal projector onto ker(A), so it is computed as the Gram
product ``Vbar Vbar^T`` of the kernel basis. The subtractive form is kept only
as a diagnostic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dense import EPS, SvdFactors, as_matrix, null_space_basis, pseudo_inverse, svd


class NumericalDegeneracyWarning(RuntimeWarning):
    """A column looks independent by its diagonal entry but not by its row."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


# row-vs-diagonal slack for the independence consistency check
ROW_FACTOR = 10.0


@dataclass(frozen=True)
class SignatureResult:
    S: np.ndarray
    zero_tolerance: float
    symmetry_defect: float
    idempotency_defect: float
    projection_defect: float

    @property
    def n(self) -> int:
        return self.S.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.S)


def default_zero_tolerance(n: int) -> float:
    return n * EPS


def signature_matrix(a, factors: SvdFactors | None = None,
                     zero_tolerance: float | None = None) -> SignatureResult:
    """Compute ``S`` for ``a``; ``factors`` are recomputed when not supplied."""
    A = as_matrix(a)
    if factors is None:
        factors = svd(A)
    n = A.shape[1]
    if zero_tolerance is None:
        zero_tolerance = default_zero_tolerance(n)
    if zero_tolerance < 0:
        raise ValueError("zero_tolerance must be >= 0")

    Vbar = null_space_basis(factors)
    S = Vbar @ Vbar.T
    direct = np.eye(n) - pseudo_inverse(factors) @ A
    return SignatureResult(
        S=S,
        zero_tolerance=float(zero_tolerance),
        symmetry_defect=float(np.max(np.abs(S - S.T))),
        idempotency_defect=float(np.max(np.abs(S @ S - S))),
        projection_defect=float(np.max(np.abs(S - direct))),
    )


def independent_columns(sig: SignatureResult) -> set[int]:
    """0-based indices ``j`` with ``S_jj <= zero_tolerance``.

    A zero diagonal forces the whole row to vanish; when it does not, a
    :class:`NumericalDegeneracyWarning` carrying the index is emitted and the
    column is still reported as independent.
    """
    tol = sig.zero_tolerance
    S = sig.S
    out = set()
    for j in np.flatnonzero(np.diag(S) <= tol):
        j = int(j)
        out.add(j)
        row_max = float(np.max(np.abs(S[j])))
        if row_max > ROW_FACTOR * max(tol, EPS):
            warnings.warn(
                NumericalDegeneracyWarning(
                    f"column {j} has S_jj <= {tol:.3g} but max |S_jk| = {row_max:.3g}", j
                ),
                stacklevel=2,
            )
    return out
