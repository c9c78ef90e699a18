"""Minimum-norm least squares and how its solution reacts to column perturbations.

Perturbing column ``j`` by ``c`` is the rank-1 update ``A + c e_j^T``. When
``A`` is rank deficient, ``c`` lies outside range(A), ``b`` lies inside it and
``j`` belongs to a multi-column cluster, the update only moves solution
components inside ``j``'s cluster, and the change is exactly
``-x_j * S[j] / S_jj`` (norm ``|x_j| / sqrt(S_jj)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dense import SvdFactors, as_matrix, as_vector, pseudo_inverse, svd, pinv
from .graph import DEFAULT_EDGE_TOL, ClusterPartition, clusters_of
from .rank1 import DEFAULT_TOL, rank1_update_pinv
from .signature import signature_matrix


class PreconditionError(ValueError):
    pass


class DegenerateInputError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LeastSquaresSolution:
    x: np.ndarray
    residual_norm: float | None
    solution_norm: float


def min_norm_lsq(a_pinv, b, a=None) -> LeastSquaresSolution:
    """``x = A^+ b``; the residual is filled in only when ``a`` is given."""
    P = as_matrix(a_pinv, "A_pinv")
    b = as_vector(b, P.shape[1], "b")
    x = P @ b
    resid = None
    if a is not None:
        A = as_matrix(a)
        if A.shape != P.shape[::-1]:
            raise ValueError(f"A is {A.shape}, A_pinv is {P.shape}")
        resid = float(np.linalg.norm(A @ x - b))
    return LeastSquaresSolution(x, resid, float(np.linalg.norm(x)))


def perturb_column(a, j: int, c) -> np.ndarray:
    """Copy of ``a`` with column ``j`` replaced by ``F_j + c``."""
    A = as_matrix(a).copy()
    m, n = A.shape
    if not 0 <= j < n:
        raise IndexError(f"column {j} out of range for {n} columns")
    A[:, j] += as_vector(c, m, "c")
    return A


def _in_range(A: np.ndarray, P: np.ndarray, y: np.ndarray, tol: float) -> tuple[bool, float]:
    out = float(np.linalg.norm(y - A @ (P @ y)))
    return out <= tol * max(float(np.linalg.norm(y)), 1.0), out


@dataclass(frozen=True)
class PerturbationReport:
    column: int
    c: np.ndarray
    x: np.ndarray
    x_tilde: np.ndarray
    delta: np.ndarray
    cluster: tuple[int, ...] | str
    outside_max: float
    delta_norm: float
    bound: float                      # 2 |x_j|
    predicted_norm: float | None      # |x_j| / sqrt(S_jj) when j is in a cluster
    c_in_range: bool
    rank_deficient: bool
    b_in_range: bool
    case: int
    cross_check_error: float | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def locality_applies(self) -> bool:
        return (self.rank_deficient and not self.c_in_range and self.b_in_range
                and self.cluster != "independent")


def sensitivity_report(a, factors: SvdFactors | None, b, j: int, c, *,
                       partition: ClusterPartition | None = None,
                       tol: float = DEFAULT_TOL, edge_tol: float = DEFAULT_EDGE_TOL,
                       zero_tolerance: float | None = None,
                       cross_check: bool = False) -> PerturbationReport:
    """Perturb column ``j`` by ``c`` and describe how ``x = A^+ b`` moves.

    Hypothesis violations (full rank, ``c`` in range(A), inconsistent ``b``,
    independent ``j``) are recorded in ``notes`` rather than raised.
    """
    A = as_matrix(a)
    m, n = A.shape
    if not 0 <= j < n:
        raise IndexError(f"column {j} out of range for {n} columns")
    if factors is None:
        factors = svd(A)
    b = as_vector(b, m, "b")
    c = as_vector(c, m, "c")
    P = pseudo_inverse(factors)
    if partition is None:
        partition, _, sig = clusters_of(A, factors, zero_tolerance, edge_tol)
        S = sig.S
    else:
        S = signature_matrix(A, factors, zero_tolerance).S
    cluster = partition.cluster_of(j)

    x = P @ b
    e_j = np.zeros(n)
    e_j[j] = 1.0
    P_new, ing = rank1_update_pinv(A, P, c, e_j, tol=tol, full_output=True)
    x_tilde = P_new @ b
    cross = None
    if cross_check:
        direct = pinv(A + np.outer(c, e_j)) @ b
        cross = float(np.linalg.norm(direct - x_tilde) / max(np.linalg.norm(direct), 1e-300))

    delta = np.abs(x - x_tilde)
    inside = set(cluster) if cluster != "independent" else {j}
    outside = [i for i in range(n) if i not in inside]
    outside_max = float(np.max(delta[outside])) if outside else 0.0

    c_in_range = ing.u_zero
    b_in_range, _ = _in_range(A, P, b, tol)
    rank_deficient = factors.rank < min(m, n)
    notes = []
    if not rank_deficient:
        notes.append("A has full rank; cluster locality is not guaranteed")
    if c_in_range:
        notes.append("c lies in range(A); cluster locality is not guaranteed")
    if not b_in_range:
        notes.append("b is not in range(A); cluster locality is not guaranteed")
    if cluster == "independent":
        notes.append("column is independent of the rest; see independent_column_bound")

    predicted = None
    if cluster != "independent" and S[j, j] > 0:
        predicted = abs(float(x[j])) / float(np.sqrt(S[j, j]))

    return PerturbationReport(
        column=j, c=c, x=x, x_tilde=x_tilde, delta=delta, cluster=cluster,
        outside_max=outside_max, delta_norm=float(np.linalg.norm(x - x_tilde)),
        bound=2.0 * abs(float(x[j])), predicted_norm=predicted,
        c_in_range=c_in_range, rank_deficient=rank_deficient, b_in_range=b_in_range,
        case=int(ing.case), cross_check_error=cross, notes=tuple(notes),
    )


@dataclass(frozen=True)
class BoundCheck:
    measured: float
    bound: float
    beta: float
    rescaled: bool
    # exact ||x - x_tilde|| from the update formula, valid when b lies in range(A)
    predicted: float | None = None

    @property
    def passed(self) -> bool:
        return self.measured <= self.bound * (1.0 + 1e-9) + 1e-12


def independent_column_bound(a, factors: SvdFactors | None, b, j: int, c, *,
                             tol: float = DEFAULT_TOL,
                             zero_tolerance: float | None = None) -> BoundCheck:
    """Compare ``||x - x_tilde||`` with ``|x_j| ||A^+|| / ||h||^2`` for independent ``j``.

    ``h`` is row ``j`` of ``A^+``. If ``beta = 1 + (A^+ c)_j`` vanishes, ``c``
    is doubled once before giving up.

    The stated bound is not always respected (``A = I_2``, ``b = (1, 1)``,
    ``c = (-2, 1)`` gives sqrt(5) against 1). For consistent ``b`` the change
    is exactly ``x_j (||u||^2 A^+ h^T + beta k) / (||h||^2 ||u||^2 + beta^2)``;
    its norm is returned as ``predicted``.
    """
    A = as_matrix(a)
    m, n = A.shape
    if not 0 <= j < n:
        raise IndexError(f"column {j} out of range for {n} columns")
    if factors is None:
        factors = svd(A)
    b = as_vector(b, m, "b")
    c = as_vector(c, m, "c")
    sig = signature_matrix(A, factors, zero_tolerance)
    if sig.S[j, j] > sig.zero_tolerance:
        raise PreconditionError(f"column {j} is not independent of the other columns")

    P = pseudo_inverse(factors)
    pnorm = factors.sigma[factors.rank - 1] ** -1 if factors.rank else 0.0
    h = P[j]

    def beta_of(vec):
        return 1.0 + float(h @ vec)

    rescaled = False
    beta = beta_of(c)
    scale = tol * (1.0 + pnorm * np.linalg.norm(c))
    if abs(beta) <= scale:
        c = 2.0 * c
        rescaled = True
        beta = beta_of(c)
        if abs(beta) <= tol * (1.0 + pnorm * np.linalg.norm(c)):
            raise DegenerateInputError("beta stays zero after rescaling c")

    e_j = np.zeros(n)
    e_j[j] = 1.0
    x = P @ b
    P_new, ing = rank1_update_pinv(A, P, c, e_j, tol=tol, pinv_norm=pnorm, full_output=True)
    x_tilde = P_new @ b
    hh = float(h @ h)
    bound = abs(float(x[j])) * pnorm / hh
    predicted = None
    if _in_range(A, P, b, tol)[0]:
        uu = float(ing.u @ ing.u)
        beta2 = hh * uu + beta * beta
        predicted = abs(float(x[j])) * float(np.linalg.norm(uu * (P @ h) + beta * ing.k)) / beta2
    return BoundCheck(float(np.linalg.norm(x - x_tilde)), bound, beta, rescaled, predicted)
