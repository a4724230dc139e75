"""Closed-form sparse correlations by soft-thresholding.

The penalized objective

    F(G) = 1/2 sum_j sum_{k != j} ||x_j - g_jk x_k||^2 + lam sum_j sum_{k != j} |g_jk|

separates into one scalar problem per pair when every column has unit norm,
each minimized by soft-thresholding the sample correlation x_j'x_k.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .data import NormalizedMatrix
from .errors import NegativeLambdaError

__all__ = [
    "SparseSolution",
    "SupportGraph",
    "soft_threshold",
    "sparse_correlation",
    "oracle_minimize",
    "support_graph",
    "objective",
    "sample_correlation",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not lam >= 0.0:
        raise NegativeLambdaError(f"lambda must be nonnegative, got {lam}")
    return lam


def soft_threshold(c, lam):
    """Shrink c toward zero by lam; values with |c| <= lam become exactly 0.

    Works elementwise on arrays.

    >>> soft_threshold(0.8, 0.3)
    0.5
    >>> soft_threshold(-0.2, 0.3)
    0.0
    """
    lam = _check_lambda(lam)
    if np.ndim(c) == 0:
        c = float(c)
        if c > lam:
            return c - lam
        if c < -lam:
            return c + lam
        return 0.0
    c = np.asarray(c, dtype=float)
    return np.where(c > lam, c - lam, np.where(c < -lam, c + lam, 0.0))


def oracle_minimize(c: float, lam: float, tol: float = 1e-10) -> float:
    """Numerically minimize (g - c)^2 + 2 lam |g| over g in [-2, 2].

    Golden-section search on the convex scalar objective; a test oracle for
    soft_threshold that shares none of its logic. The constant term carried
    by the full per-pair objective does not move the argmin and is dropped.
    """
    lam = float(lam)

    def f(g):
        return (g - c) ** 2 + 2.0 * lam * abs(g)

    a, b = -2.0, 2.0
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    g = 0.5 * (a + b)
    # the kink at zero is the minimizer whenever |c| <= lam
    return 0.0 if f(0.0) <= f(g) else g


def sample_correlation(Z: NormalizedMatrix) -> np.ndarray:
    """Off-diagonal sample correlations z_j'z_k, diagonal zeroed."""
    z = np.asarray(Z.values, dtype=float)
    c = z.T @ z
    np.fill_diagonal(c, 0.0)
    upper = np.triu(c, 1)
    return upper + upper.T


@dataclass(frozen=True)
class SparseSolution:
    gamma: np.ndarray
    lam: float
    correlation: np.ndarray

    @property
    def p(self) -> int:
        return self.gamma.shape[0]

    def to_json(self) -> str:
        return json.dumps({"lambda": self.lam, "gamma": self.gamma.tolist()})


@dataclass(frozen=True)
class SupportGraph:
    adjacency: np.ndarray
    lam: float

    def edges(self):
        rows, cols = np.nonzero(np.triu(self.adjacency, 1))
        return set(zip(rows.tolist(), cols.tolist()))


def sparse_correlation(Z: NormalizedMatrix, lam: float) -> SparseSolution:
    lam = _check_lambda(lam)
    c = sample_correlation(Z)
    gamma = soft_threshold(c, lam)
    np.fill_diagonal(gamma, 0.0)
    gamma.setflags(write=False)
    return SparseSolution(gamma, lam, c)


def support_graph(sol: SparseSolution) -> SupportGraph:
    a = (sol.gamma != 0).astype(np.int8)
    np.fill_diagonal(a, 0)
    return SupportGraph(a, sol.lam)


def objective(Z: NormalizedMatrix, gamma, lam: float) -> float:
    """Evaluate the penalized least-squares objective directly from the columns."""
    z = np.asarray(Z.values, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    p = z.shape[1]
    total = 0.0
    for j in range(p):
        resid = z[:, [j]] - z * gamma[j][None, :]
        sq = (resid**2).sum(axis=0)
        sq[j] = 0.0
        total += 0.5 * sq.sum()
    off = ~np.eye(p, dtype=bool)
    return total + lam * np.abs(gamma[off]).sum()
