"""Augmented-Lagrange-multiplier loop for the low-rank + sparse split.

Decomposes ``X = L + S`` by minimizing ``F(L) + lambda * penalty(S)`` subject
to the split, where F is a spectral penalty (see ``surrogates``) and
``penalty`` an entrywise or columnwise sparsity norm (see ``sparse``). Each
outer iteration proxes L against the current residual target, shrinks S, then
takes the standard multiplier step and grows the quadratic penalty weight mu
geometrically. The loop stops when the relative residual
``||X - L - S||_F / ||X||_F`` drops to the configured tolerance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import as_matrix
from .sparse import ENTRYWISE_L1, SparsePenalty, penalty_value, shrink
from .surrogates import (
    DcConfig,
    RankSurrogate,
    gamma_surrogate,
    prox_matrix_with_iters,
    prox_vector_with_iters,
    surrogate_gradient,
    surrogate_value,
)
from . import linalg

# Relative cutoff below which a shrunk singular value no longer counts
# toward the per-iteration rank diagnostic.
RANK_REL_THRESHOLD = 1e-6


def scaled_lambda(m: int, n: int) -> float:
    """Dimension-scaled sparsity weight, ``1/sqrt(max(m, n))``."""
    return 1.0 / np.sqrt(max(m, n))


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs for :func:`solve`.

    ``lam`` weighs the sparsity penalty; ``mu0`` and ``rho`` set the initial
    quadratic penalty and its growth per iteration (capped at ``mu_max`` so
    the stopping rule, not overflow, ends the run). ``tol`` is the relative
    residual at which the loop stops, ``max_outer`` the iteration budget.
    """

    lam: float = 1e-3
    mu0: float = 1e-4
    rho: float = 1.1
    mu_max: float = 1e10
    tol: float = 1e-3
    max_outer: int = 500
    surrogate: RankSurrogate = field(default_factory=gamma_surrogate)
    penalty: SparsePenalty = ENTRYWISE_L1
    dc: DcConfig = field(default_factory=DcConfig)

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError("lam must be positive")
        if not self.mu0 > 0.0:
            raise ValueError("mu0 must be positive")
        if not self.rho > 1.0:
            raise ValueError("rho must exceed 1")
        if self.mu_max < self.mu0:
            raise ValueError("mu_max must be >= mu0")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")


@dataclass
class SolverState:
    """Live iterate: primal pair, multiplier, penalty weight, iteration count."""

    l: np.ndarray
    s: np.ndarray
    y: np.ndarray
    mu: float
    iter: int = 0


@dataclass(frozen=True)
class IterationRecord:
    """Per-iteration diagnostics appended to the solve history."""

    iter: int
    residual: float
    lagrangian: float
    rank_estimate: int
    y_inf_norm: float
    dc_iters: int
    mu: float
    mu_s_change: float


@dataclass
class SolverResult:
    l: np.ndarray
    s: np.ndarray
    iterations: int
    converged: bool
    history: list[IterationRecord]
    elapsed_seconds: float
    kkt_primal: float
    kkt_dual: float


def update_l(x, state: SolverState, cfg: SolverConfig) -> np.ndarray:
    """L-step: spectral prox of ``X - S - Y/mu`` at weight mu."""
    x = as_matrix(x)
    target = x - state.s - state.y / state.mu
    return prox_matrix_with_iters(target, state.mu, cfg.surrogate, cfg.dc)[0]


def update_s(x, state: SolverState, cfg: SolverConfig) -> np.ndarray:
    """S-step: shrink ``X - L - Y/mu`` at threshold lambda/mu."""
    x = as_matrix(x)
    q = x - state.l - state.y / state.mu
    return shrink(q, cfg.lam / state.mu, cfg.penalty)


def update_duals(x, state: SolverState, cfg: SolverConfig) -> tuple[np.ndarray, float]:
    """Multiplier step ``Y + mu*(L + S - X)`` and penalty growth ``min(rho*mu, mu_max)``."""
    x = as_matrix(x)
    y = state.y + state.mu * (state.l + state.s - x)
    return y, min(cfg.rho * state.mu, cfg.mu_max)


def lagrangian(x, state: SolverState, cfg: SolverConfig) -> float:
    """Augmented Lagrangian value at the given state.

    ``F(L) + lam*penalty(S) + <Y, L+S-X> + (mu/2)*||L+S-X||_F^2`` with the
    trace inner product.
    """
    x = as_matrix(x)
    resid = state.l + state.s - x
    sig = linalg.svd(state.l).singulars
    return (
        surrogate_value(sig, cfg.surrogate)
        + cfg.lam * penalty_value(state.s, cfg.penalty)
        + float(np.sum(state.y * resid))
        + 0.5 * state.mu * float(np.sum(resid * resid))
    )


def kkt_residuals(x, state: SolverState, cfg: SolverConfig) -> tuple[float, float]:
    """Normalized stationarity measures at the given state.

    primal: ``||L+S-X||_F / max(1, ||X||_F)``. dual: feasibility of the
    L-stationarity condition, ``||U diag(theta) V^T + Y||_F / max(1, ||Y||_F)``
    where theta is the penalty gradient at the singular values of L (the
    gradient of a spectral function keeps L's singular vectors).
    """
    x = as_matrix(x)
    primal = float(np.linalg.norm(state.l + state.s - x)) / max(
        1.0, float(np.linalg.norm(x))
    )
    f = linalg.svd(state.l)
    theta = surrogate_gradient(f.singulars, cfg.surrogate)
    dual_mat = (f.u * theta) @ f.vt + state.y
    dual = float(np.linalg.norm(dual_mat)) / max(1.0, float(np.linalg.norm(state.y)))
    return primal, dual


ProgressCallback = Callable[[SolverState, IterationRecord], None]


def solve(x, cfg: SolverConfig | None = None, callback: ProgressCallback | None = None) -> SolverResult:
    """Run the multiplier loop from ``S = 0, Y = 0`` until the residual tolerance.

    Parameters
    ----------
    x : array_like
        Data matrix to decompose.
    cfg : SolverConfig, optional
        Tuning parameters; defaults are the library-wide defaults.
    callback : callable, optional
        Invoked once per outer iteration with the post-update state and that
        iteration's record. The arrays handed over are not mutated afterwards.

    Returns
    -------
    SolverResult
        Final pair, convergence flag, per-iteration history, wall time, and
        final KKT residuals. Hitting ``max_outer`` without reaching the
        tolerance returns ``converged=False`` with the full history rather
        than raising; the partial decomposition is still useful.
    """
    x = as_matrix(x)
    if cfg is None:
        cfg = SolverConfig()
    t0 = time.perf_counter()
    l = np.zeros_like(x)
    s = np.zeros_like(x)
    y = np.zeros_like(x)
    mu = cfg.mu0
    norm_x = float(np.linalg.norm(x))
    history: list[IterationRecord] = []
    converged = False

    for t in range(cfg.max_outer):
        target = x - s - y / mu
        f = linalg.svd(target)
        sig, dc_iters = prox_vector_with_iters(f.singulars, mu, cfg.surrogate, cfg.dc)
        l = (f.u * sig) @ f.vt

        s_prev = s
        q = x - l - y / mu
        s = shrink(q, cfg.lam / mu, cfg.penalty)

        resid = l + s - x
        resid_norm = float(np.linalg.norm(resid))
        lag = (
            surrogate_value(sig, cfg.surrogate)
            + cfg.lam * penalty_value(s, cfg.penalty)
            + float(np.sum(y * resid))
            + 0.5 * mu * float(np.sum(resid * resid))
        )
        mu_s_change = mu * float(np.linalg.norm(s - s_prev))

        y = y + mu * resid
        mu_next = min(cfg.rho * mu, cfg.mu_max)

        residual = resid_norm / norm_x if norm_x > 0.0 else resid_norm
        top = float(sig.max()) if sig.size else 0.0
        rank_est = int(np.count_nonzero(sig > RANK_REL_THRESHOLD * top)) if top > 0.0 else 0
        record = IterationRecord(
            iter=t + 1,
            residual=residual,
            lagrangian=lag,
            rank_estimate=rank_est,
            y_inf_norm=float(np.max(np.abs(y))) if y.size else 0.0,
            dc_iters=dc_iters,
            mu=mu,
            mu_s_change=mu_s_change,
        )
        history.append(record)
        mu = mu_next
        if callback is not None:
            callback(SolverState(l=l, s=s, y=y, mu=mu, iter=t + 1), record)
        if residual <= cfg.tol:
            converged = True
            break

    final = SolverState(l=l, s=s, y=y, mu=mu, iter=len(history))
    kkt_primal, kkt_dual = kkt_residuals(x, final, cfg)
    return SolverResult(
        l=l,
        s=s,
        iterations=len(history),
        converged=converged,
        history=history,
        elapsed_seconds=time.perf_counter() - t0,
        kkt_primal=kkt_primal,
        kkt_dual=kkt_dual,
    )
