"""Minimal dependency relations inside a cluster.

For a cluster of ``t`` columns with ``r`` independent relations, the kernel of
``A`` restricted to the cluster is column-reduced to the normal form::

    C_bar = [ -I_r ]      (rows: the r eliminated columns)
            [  Z   ]      (rows: the t - r basis columns)

so column ``k`` of ``C_bar`` reads ``F_{p_k} = sum_i Z[i, k] F_{b_i}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import SvdFactors, as_matrix, null_space_basis, svd


class RelationError(ArithmeticError):
    """The requested cluster carries no kernel vectors, or pivots are unusable."""


@dataclass(frozen=True)
class RelationBasis:
    cluster: tuple[int, ...]    # members, ascending, 0-based
    deficit: int
    C_bar: np.ndarray           # t x r, rows follow ``ordering``
    ordering: tuple[int, ...]   # eliminated members first, then basis members

    @property
    def pivots(self) -> tuple[int, ...]:
        return self.ordering[: self.deficit]

    @property
    def basis_columns(self) -> tuple[int, ...]:
        return self.ordering[self.deficit:]

    @property
    def Z(self) -> np.ndarray:
        return self.C_bar[self.deficit:]

    def embedded(self, n: int) -> np.ndarray:
        """The relations as kernel vectors of length ``n`` (n x r)."""
        C = np.zeros((n, self.deficit))
        C[list(self.ordering)] = self.C_bar
        return C

    def describe(self, names=None) -> list[str]:
        """Human-readable ``F_p = a F_q + ...`` strings (1-based unless names are given)."""
        label = (lambda j: names[j]) if names is not None else (lambda j: f"F{j + 1}")
        lines = []
        for k, p in enumerate(self.pivots):
            terms = []
            for i, q in enumerate(self.basis_columns):
                coef = self.Z[i, k]
                if abs(coef) > 1e-12:
                    terms.append(f"{coef:+.6g}*{label(q)}")
            lines.append(f"{label(p)} = " + (" ".join(terms) if terms else "0"))
        return lines


@dataclass(frozen=True)
class RelationResidual:
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def _greedy_pivots(W: np.ndarray) -> list[int]:
    """Rows picked by Gaussian elimination with complete pivoting on magnitude."""
    G = W.copy()
    t, r = G.shape
    free_rows = np.ones(t, dtype=bool)
    free_cols = np.ones(r, dtype=bool)
    chosen = []
    for _ in range(r):
        sub = np.abs(G) * free_rows[:, None] * free_cols[None, :]
        i, c = np.unravel_index(np.argmax(sub), sub.shape)
        chosen.append(int(i))
        piv = G[i, c]
        others = free_cols.copy()
        others[c] = False
        G[:, others] -= np.outer(G[:, c], G[i, others] / piv)
        free_rows[i] = False
        free_cols[c] = False
    return chosen


def _normal_form(W: np.ndarray, members: list[int], local_pivots: list[int]) -> RelationBasis:
    t, r = W.shape
    local_pivots = sorted(local_pivots)
    Wp = W[local_pivots]
    if np.linalg.cond(Wp) > 1e12:
        raise RelationError(
            f"pivot columns {[members[i] for i in local_pivots]} do not determine the relations"
        )
    C = -np.linalg.solve(Wp.T, W.T).T
    rest = [i for i in range(t) if i not in set(local_pivots)]
    order = local_pivots + rest
    C_bar = C[order]
    C_bar[:r] = -np.eye(r)  # exact by construction, remove rounding
    return RelationBasis(tuple(members), r, C_bar, tuple(members[i] for i in order))


def _kernel_block(A, factors, cluster, rank_tol):
    members = sorted(int(j) for j in cluster)
    if len(set(members)) != len(members) or not members:
        raise ValueError("cluster must be a non-empty set of distinct columns")
    M = null_space_basis(factors)[members, :]
    if M.shape[1] == 0:
        raise RelationError(f"matrix has full column rank; cluster {members} has no relations")
    W, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.count_nonzero(s > rank_tol))
    if r == 0:
        raise RelationError(f"kernel restricted to cluster {members} is zero")
    return members, W[:, :r]


def minimal_relations(a, factors: SvdFactors | None = None, cluster=(), pivots=None,
                      rank_tol: float = 1e-8) -> RelationBasis:
    """Relation basis of ``cluster`` in the ``[-I_r; Z]`` normal form.

    ``pivots`` (0-based column indices inside the cluster) fixes which columns
    are eliminated; by default they are chosen greedily by pivot magnitude.
    Restricted-kernel singular values sit near 1 for a genuine cluster, so
    ``rank_tol`` is an absolute cutoff.
    """
    A = as_matrix(a)
    if factors is None:
        factors = svd(A)
    members, W = _kernel_block(A, factors, cluster, rank_tol)
    if pivots is None:
        local = _greedy_pivots(W)
    else:
        pos = {j: i for i, j in enumerate(members)}
        try:
            local = [pos[int(p)] for p in pivots]
        except KeyError as exc:
            raise RelationError(f"pivot {exc.args[0]} is not in cluster {members}") from None
        if len(set(local)) != W.shape[1]:
            raise RelationError(
                f"cluster {members} has {W.shape[1]} relations, got {len(set(local))} pivots"
            )
    return _normal_form(W, members, local)


def canonicalize(basis: RelationBasis, pivots) -> RelationBasis:
    """Re-express ``basis`` with a different set of eliminated columns."""
    members = list(basis.cluster)
    local = np.zeros((len(members), basis.deficit))
    pos = {j: i for i, j in enumerate(members)}
    for row, j in zip(basis.C_bar, basis.ordering):
        local[pos[j]] = row
    W, _ = np.linalg.qr(local)
    try:
        idx = [pos[int(p)] for p in pivots]
    except KeyError as exc:
        raise RelationError(f"pivot {exc.args[0]} is not in cluster {members}") from None
    if len(set(idx)) != basis.deficit:
        raise RelationError(f"need {basis.deficit} distinct pivots, got {len(set(idx))}")
    return _normal_form(W, members, idx)


def verify_relations(a, basis: RelationBasis, tolerance: float = 1e-8) -> RelationResidual:
    """Worst relative residual ``||A c_j|| / (sigma_1 ||c_j||)`` over the relations."""
    A = as_matrix(a)
    C = basis.embedded(A.shape[1])
    smax = float(np.linalg.norm(A, 2))
    if smax == 0.0:
        return RelationResidual(0.0, tolerance)
    res = np.linalg.norm(A @ C, axis=0) / (smax * np.linalg.norm(C, axis=0))
    return RelationResidual(float(np.max(res)), tolerance)


def relation_block(Z: np.ndarray) -> np.ndarray:
    """``B = [[-I, Z^T], [Z, I]]`` for a (p x q) coefficient block ``Z``."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    p, q = Z.shape
    return np.block([[-np.eye(q), Z.T], [Z, np.eye(p)]])


def relation_block_inverse(Z: np.ndarray) -> np.ndarray:
    """Closed-form inverse of :func:`relation_block` via ``(I + Z^T Z)^{-1}`` blocks."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    p, q = Z.shape
    G = np.linalg.inv(np.eye(q) + Z.T @ Z)
    H = np.linalg.inv(np.eye(p) + Z @ Z.T)
    return np.block([[-G, G @ Z.T], [Z @ G, H]])
