"""Closed-form pseudo-inverse of a rank-1 update ``A + c d^T`` (Meyer's six cases).

With ``k = A^+ c``, ``h = d^T A^+``, ``u = (I - A A^+) c``, ``v = d^T (I - A^+ A)``
and ``beta = 1 + d^T A^+ c``, exactly one case applies, checked in order:

1. u != 0, v != 0
2. u == 0, v != 0, beta == 0
3. u == 0, beta != 0
4. u != 0, v == 0, beta == 0
5. v == 0, beta != 0
6. u == 0, v == 0, beta == 0

Zero tests are tolerance based; flags that sit within a factor ``BORDERLINE``
of their cutoff are reported so that callers can see a shaky classification.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dense import as_matrix, as_vector

DEFAULT_TOL = 1e-8
BORDERLINE = 100.0


class UpdateCase(enum.IntEnum):
    BOTH_OUTSIDE = 1        # u != 0, v != 0
    C_IN_RANGE_SINGULAR = 2  # u = 0, v != 0, beta = 0
    C_IN_RANGE = 3          # u = 0, beta != 0
    D_IN_RANGE_SINGULAR = 4  # u != 0, v = 0, beta = 0
    D_IN_RANGE = 5          # v = 0, beta != 0
    BOTH_IN_RANGE_SINGULAR = 6  # u = 0, v = 0, beta = 0


class BorderlineUpdateWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class UpdateIngredients:
    k: np.ndarray
    h: np.ndarray
    u: np.ndarray
    v: np.ndarray
    beta: float
    u_zero: bool
    v_zero: bool
    beta_zero: bool
    case: UpdateCase
    borderline: tuple[str, ...] = field(default=())


def _vec_pinv(x: np.ndarray) -> np.ndarray:
    nrm2 = float(x @ x)
    if not nrm2 > 0.0:
        raise ArithmeticError("pseudo-inverse of a vector flagged nonzero but exactly zero")
    return x / nrm2


def _select_case(u_zero: bool, v_zero: bool, beta_zero: bool) -> UpdateCase:
    if not u_zero and not v_zero:
        return UpdateCase.BOTH_OUTSIDE
    if u_zero and not v_zero and beta_zero:
        return UpdateCase.C_IN_RANGE_SINGULAR
    if u_zero and not beta_zero:
        return UpdateCase.C_IN_RANGE
    if not u_zero and v_zero and beta_zero:
        return UpdateCase.D_IN_RANGE_SINGULAR
    if v_zero and not beta_zero:
        return UpdateCase.D_IN_RANGE
    return UpdateCase.BOTH_IN_RANGE_SINGULAR


def classify_update(a, a_pinv, c, d, tol: float = DEFAULT_TOL,
                    pinv_norm: float | None = None) -> UpdateIngredients:
    """Compute the update ingredients and pick the applicable case.

    Scales: ``||u|| <= tol * max(||c||, 1)``, ``||v|| <= tol * max(||d||, 1)``,
    ``|beta| <= tol * (1 + ||d|| ||A^+|| ||c||)``. ``pinv_norm`` (the 2-norm of
    ``A^+``) may be passed to skip its recomputation.
    """
    A = as_matrix(a)
    P = as_matrix(a_pinv, "A_pinv")
    m, n = A.shape
    if P.shape != (n, m):
        raise ValueError(f"A_pinv must be {n}x{m}, got {P.shape[0]}x{P.shape[1]}")
    c = as_vector(c, m, "c")
    d = as_vector(d, n, "d")

    k = P @ c
    h = d @ P
    u = c - A @ k
    v = d - (d @ P) @ A
    beta = 1.0 + float(d @ k)

    if pinv_norm is None:
        pinv_norm = float(np.linalg.norm(P, 2))
    nc, nd = float(np.linalg.norm(c)), float(np.linalg.norm(d))
    checks = {
        "u": (float(np.linalg.norm(u)), tol * max(nc, 1.0)),
        "v": (float(np.linalg.norm(v)), tol * max(nd, 1.0)),
        "beta": (abs(beta), tol * (1.0 + nd * pinv_norm * nc)),
    }
    flags = {key: val <= cut for key, (val, cut) in checks.items()}
    borderline = tuple(
        key for key, (val, cut) in checks.items()
        if cut > 0 and cut / BORDERLINE < val <= cut * BORDERLINE
    )
    case = _select_case(flags["u"], flags["v"], flags["beta"])
    return UpdateIngredients(k, h, u, v, beta, flags["u"], flags["v"], flags["beta"],
                             case, borderline)


def _apply_case(P: np.ndarray, ing: UpdateIngredients) -> np.ndarray:
    k, h, u, v, beta = ing.k, ing.h, ing.u, ing.v, ing.beta
    case = ing.case
    if case == UpdateCase.BOTH_OUTSIDE:
        ud = _vec_pinv(u)
        vd = _vec_pinv(v)
        return P - np.outer(k, ud) - np.outer(vd, h) + beta * np.outer(vd, ud)
    if case == UpdateCase.C_IN_RANGE_SINGULAR:
        kd = _vec_pinv(k)
        vd = _vec_pinv(v)
        return P - np.outer(k, kd @ P) - np.outer(vd, h)
    if case == UpdateCase.C_IN_RANGE:
        kTP = k @ P
        kk, vv = float(k @ k), float(v @ v)
        p1 = -(kk / beta * v + k)
        q1 = -(vv / beta * kTP + h)
        s1 = kk * vv + beta * beta
        return P + np.outer(v, kTP) / beta - (beta / s1) * np.outer(p1, q1)
    if case == UpdateCase.D_IN_RANGE_SINGULAR:
        hd = _vec_pinv(h)
        ud = _vec_pinv(u)
        return P - np.outer(P @ hd, h) - np.outer(k, ud)
    if case == UpdateCase.D_IN_RANGE:
        Ph = P @ h
        uu, hh = float(u @ u), float(h @ h)
        p2 = -(uu / beta * Ph + k)
        q2 = -(hh / beta * u + h)
        s2 = hh * uu + beta * beta
        return P + np.outer(Ph, u) / beta - (beta / s2) * np.outer(p2, q2)
    kd = _vec_pinv(k)
    hd = _vec_pinv(h)
    scalar = float(kd @ P @ hd)
    return P - np.outer(k, kd @ P) - np.outer(P @ hd, h) + scalar * np.outer(k, h)


def rank1_update_pinv(a, a_pinv, c, d, tol: float = DEFAULT_TOL, full_output: bool = False,
                      pinv_norm: float | None = None):
    """Pseudo-inverse of ``A + c d^T`` from ``A^+`` without a new factorization.

    Returns the n x m matrix, or ``(matrix, ingredients)`` when ``full_output``.
    A :class:`BorderlineUpdateWarning` is emitted when a zero flag is close to
    its cutoff.
    """
    ing = classify_update(a, a_pinv, c, d, tol, pinv_norm)
    if ing.borderline:
        warnings.warn(
            BorderlineUpdateWarning(
                f"case {int(ing.case)} chosen with borderline flags {', '.join(ing.borderline)}"
            ),
            stacklevel=2,
        )
    out = _apply_case(np.asarray(a_pinv, dtype=float), ing)
    return (out, ing) if full_output else out
