"""Dense-matrix plumbing: deterministic thin SVD, norms, and residuals."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class SvdFactors(NamedTuple):
    """Thin SVD triple ``u @ diag(singulars) @ vt`` with ``singulars`` nonincreasing."""

    u: np.ndarray
    singulars: np.ndarray
    vt: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a 2-D float64 array and reject non-finite entries."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


def svd(m) -> SvdFactors:
    """Thin SVD with deterministic factors.

    Singular values come back nonincreasing, and each left singular vector is
    flipped so its first nonzero entry is nonnegative (the matching row of
    ``vt`` is flipped with it). That makes the factors reproducible run to
    run, which the file outputs rely on.
    """
    a = as_matrix(m)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    for j in range(u.shape[1]):
        nz = np.nonzero(u[:, j])[0]
        if nz.size and u[nz[0], j] < 0:
            u[:, j] = -u[:, j]
            vt[j, :] = -vt[j, :]
    return SvdFactors(u, s, vt)


def reconstruct(f: SvdFactors) -> np.ndarray:
    """Multiply factors back together: ``u @ diag(singulars) @ vt``."""
    u = np.asarray(f.u, dtype=np.float64)
    s = np.asarray(f.singulars, dtype=np.float64)
    vt = np.asarray(f.vt, dtype=np.float64)
    if u.ndim != 2 or vt.ndim != 2 or s.ndim != 1:
        raise ValueError("factors must be (2-D, 1-D, 2-D) arrays")
    if u.shape[1] != s.size or vt.shape[0] != s.size:
        raise ValueError(
            f"inconsistent factor shapes: u {u.shape}, {s.size} singular values, vt {vt.shape}"
        )
    return (u * s) @ vt


def frobenius_norm(m) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(as_matrix(m)))


def relative_residual(x, l, s) -> float:
    """``||X - L - S||_F / ||X||_F``, or the absolute residual when ``X`` is zero.

    The zero-``X`` fallback keeps the stopping rule meaningful instead of
    dividing by zero: a feasible pair still reports 0.
    """
    x = as_matrix(x)
    l = as_matrix(l)
    s = as_matrix(s)
    if l.shape != x.shape or s.shape != x.shape:
        raise ValueError(
            f"dimension mismatch: x {x.shape}, l {l.shape}, s {s.shape}"
        )
    r = float(np.linalg.norm(x - l - s))
    nx = float(np.linalg.norm(x))
    return r / nx if nx > 0.0 else r
