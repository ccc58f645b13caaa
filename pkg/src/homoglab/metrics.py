"""Grid transfer to the reference grid and relative error norms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from homoglab.errors import GridMismatch, ZeroReference


@dataclass(frozen=True)
class CurveRecord:
    """One point of an error curve: value of curve c1/c2/c3 in one norm at
    one grid size."""

    h: float
    curve: str  # "c1" | "c2" | "c3"
    norm: str  # "L2" | "Linf"
    value: float
    meta: str = ""


def p1_interpolate(v: np.ndarray, x1, x2):
    """Evaluate a P1 field (nodal (n+1, n+1), diagonal-split squares) at
    points inside the closed unit square."""
    v = np.asarray(v, dtype=np.float64)
    n = v.shape[0] - 1
    if v.shape != (n + 1, n + 1):
        raise GridMismatch(f"nodal field must be square, got {v.shape}")
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    i = np.clip(np.floor(x1 * n).astype(np.int64), 0, n - 1)
    j = np.clip(np.floor(x2 * n).astype(np.int64), 0, n - 1)
    tx = x1 * n - i
    ty = x2 * n - j
    v00 = v[i, j]
    v10 = v[i + 1, j]
    v01 = v[i, j + 1]
    v11 = v[i + 1, j + 1]
    lower = ty <= tx  # triangle below the (0,0)-(1,1) diagonal
    return np.where(
        lower,
        v00 + (v10 - v00) * tx + (v11 - v10) * ty,
        v00 + (v01 - v00) * ty + (v11 - v01) * tx,
    )


def restrict_to_reference(v: np.ndarray, n_ref: int) -> np.ndarray:
    """Coarse P1 field sampled at the (n_ref+1)^2 reference nodes.

    Exact (triangle-consistent) interpolation; identity when the grids
    match, and exact at shared nodes when n_ref is a multiple of n.
    """
    n = v.shape[0] - 1
    if n > n_ref:
        raise GridMismatch(f"coarse grid {n} exceeds reference grid {n_ref}")
    if n == n_ref:
        return np.asarray(v, dtype=np.float64).copy()
    t = np.linspace(0.0, 1.0, n_ref + 1)
    return p1_interpolate(v, t[:, None], t[None, :])


def _trapezoid_weights(n: int) -> np.ndarray:
    w1 = np.full(n + 1, 1.0 / n)
    w1[0] = w1[-1] = 0.5 / n
    return w1[:, None] * w1[None, :]


def relative_errors(y: np.ndarray, u_ref: np.ndarray):
    """Relative (L2, Linf) of y against u_ref, both on the reference grid."""
    y = np.asarray(y, dtype=np.float64)
    u_ref = np.asarray(u_ref, dtype=np.float64)
    if y.shape != u_ref.shape or y.ndim != 2 or y.shape[0] != y.shape[1]:
        raise GridMismatch(f"shape mismatch {y.shape} vs {u_ref.shape}")
    n = y.shape[0] - 1
    wt = _trapezoid_weights(n)
    ref_l2 = np.sqrt(np.sum(wt * u_ref**2))
    ref_inf = np.max(np.abs(u_ref))
    if ref_l2 == 0.0 or ref_inf == 0.0:
        raise ZeroReference("reference field has zero norm")
    diff = y - u_ref
    e2 = float(np.sqrt(np.sum(wt * diff**2)) / ref_l2)
    einf = float(np.max(np.abs(diff)) / ref_inf)
    return e2, einf
