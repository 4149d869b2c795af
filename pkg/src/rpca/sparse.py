"""Sparsity penalties for the outlier part and their exact shrinkage maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix

L1 = "l1"
L21 = "l21"


@dataclass(frozen=True)
class SparsePenalty:
    """``"l1"`` (entrywise) or ``"l21"`` (sum of column 2-norms)."""

    kind: str

    def __post_init__(self):
        if self.kind not in (L1, L21):
            raise ValueError(f"unknown sparse penalty kind {self.kind!r}")


ENTRYWISE_L1 = SparsePenalty(L1)
COLUMNWISE_L21 = SparsePenalty(L21)


def penalty_value(s, p: SparsePenalty) -> float:
    a = as_matrix(s)
    if p.kind == L1:
        return float(np.abs(a).sum())
    return float(np.linalg.norm(a, axis=0).sum())


def shrink(q, tau: float, p: SparsePenalty) -> np.ndarray:
    """Exact minimizer of ``tau * penalty(W) + 0.5 * ||W - Q||_F^2``.

    l1: soft-threshold each entry, ``max(|q| - tau, 0) * sign(q)`` (so a zero
    entry stays zero). l21: scale each column by ``(n - tau)/n`` where n is
    its 2-norm, or zero it when ``n <= tau``; the boundary case ``n == tau``
    maps to zero, which keeps the result sparsest.
    """
    if not tau > 0.0:
        raise ValueError("tau must be positive")
    a = as_matrix(q)
    if p.kind == L1:
        return np.sign(a) * np.maximum(np.abs(a) - tau, 0.0)
    norms = np.linalg.norm(a, axis=0)
    safe = np.where(norms > 0.0, norms, 1.0)
    scale = np.where(norms > tau, (norms - tau) / safe, 0.0)
    return a * scale
