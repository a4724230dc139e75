"""Two-group inference on areas under Betti-0 curves.

Each group yields one Betti curve per leave-one-out replicate; the areas under
those curves are compared with a two-sided Wilcoxon rank-sum test.
"""
from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .data import DataMatrix, Mode, network_weights
from .errors import EmptySampleError, GroupTooSmallError, NodeCountMismatchError
from .filtration import BettiCurve, betti_curve, build_filtration

__all__ = [
    "EXACT_CUTOFF",
    "Method",
    "AucSample",
    "GroupComparisonResult",
    "auc",
    "riemann_auc",
    "jackknife_weights",
    "jackknife_curves",
    "midranks",
    "rank_sum_null_counts",
    "exact_rank_sum_pvalue",
    "normal_rank_sum_pvalue",
    "rank_sum_test",
    "compare_groups",
    "compare_groups_with_curves",
]

EXACT_CUTOFF = 10


class Method(str, enum.Enum):
    EXACT = "exact"
    NORMAL = "normal"


def auc(curve: BettiCurve) -> float:
    """Exact integral of the step function over [0, domain_max]."""
    edges = np.append(curve.lambdas, curve.domain_max)
    widths = np.diff(edges)
    return math.fsum((curve.betti * widths).tolist())


def riemann_auc(curve: BettiCurve, step: float = 1e-5) -> float:
    """Left Riemann sum of the curve on a uniform grid; used to check ``auc``."""
    k = int(math.ceil(curve.domain_max / step))
    if k == 0:
        return 0.0
    h = curve.domain_max / k
    grid = np.arange(k) * h
    return float(curve(grid).sum() * h)


@dataclass(frozen=True)
class AucSample:
    areas: tuple
    group_label: str = ""
    domain_max: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "areas", tuple(float(a) for a in self.areas))

    def __len__(self):
        return len(self.areas)


@dataclass(frozen=True)
class GroupComparisonResult:
    auc_group1: AucSample
    auc_group2: AucSample
    statistic: float
    p_value: float
    method: Method
    exact_p: Optional[Fraction] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "p_value": self.p_value,
            "statistic": self.statistic,
            "method": self.method.value,
            "auc1": list(self.auc_group1.areas),
            "auc2": list(self.auc_group2.areas),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary(self) -> str:
        a, b = self.auc_group1, self.auc_group2
        return "\n".join(
            [
                f"group 1 ({a.group_label or 'group1'}): {len(a)} replicates, median AUC {np.median(a.areas):.6g}",
                f"group 2 ({b.group_label or 'group2'}): {len(b)} replicates, median AUC {np.median(b.areas):.6g}",
                f"rank-sum W = {self.statistic:g}, two-sided p = {self.p_value:.6g} ({self.method.value})",
            ]
        )


def jackknife_weights(X: DataMatrix, mode=Mode.CORRELATION):
    """Edge weights of every leave-one-out submatrix, in row order."""
    if X.n < 3:
        raise GroupTooSmallError(f"jackknife needs n >= 3 subjects, got {X.n}")
    if X.n == 3:
        warnings.warn(
            "n = 3: each replicate has 2 subjects, so every correlation is +-1 and the curves are degenerate",
            RuntimeWarning,
            stacklevel=2,
        )
    return [network_weights(X.drop_row(l), mode) for l in range(X.n)]


def _curves(weight_sets, domain_max) -> List[BettiCurve]:
    return [betti_curve(build_filtration(w), domain_max) for w in weight_sets]


def _domain(weight_sets, mode: Mode, domain_max):
    if domain_max is not None:
        return float(domain_max)
    if mode is Mode.CORRELATION:
        return 1.0
    return max(w.max_weight() for w in weight_sets)


def jackknife_curves(X: DataMatrix, mode=Mode.CORRELATION, domain_max: Optional[float] = None) -> List[BettiCurve]:
    """One Betti curve per removed subject.

    In covariance mode the default domain is the largest weight over all replicates.
    """
    mode = Mode.parse(mode)
    ws = jackknife_weights(X, mode)
    return _curves(ws, _domain(ws, mode, domain_max))


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, ties sharing the mean of the ranks they span."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j + 2) / 2.0
        i = j + 1
    return ranks


def rank_sum_null_counts(k: int, n_total: int) -> List[int]:
    """Number of k-subsets of {1..n_total} for each value of U = W - k(k+1)/2.

    Coefficients of the Gaussian binomial [n_total choose k]_q.
    """
    other = n_total - k
    size = k * other + 1
    coeffs = [0] * size
    coeffs[0] = 1
    # multiply by prod (1 - q^(other + i)) / (1 - q^i) for i = 1..k
    for i in range(1, k + 1):
        a = other + i
        for s in range(size - 1, a - 1, -1):
            coeffs[s] -= coeffs[s - a]
        for s in range(i, size):
            coeffs[s] += coeffs[s - i]
    return coeffs


def exact_rank_sum_pvalue(w: float, n: int, m: int) -> Fraction:
    """Two-sided exact p of rank sum ``w`` for a group of n among n + m tie-free values."""
    counts = rank_sum_null_counts(n, n + m)
    total = sum(counts)
    u = int(round(w - n * (n + 1) / 2))
    lower = sum(counts[: u + 1])
    upper = sum(counts[u:])
    return min(Fraction(1), 2 * Fraction(min(lower, upper), total))


def normal_rank_sum_pvalue(w: float, n: int, m: int, tie_counts: Sequence[int] = ()) -> float:
    """Two-sided normal approximation with continuity correction and tie-corrected variance."""
    N = n + m
    mean = n * (N + 1) / 2.0
    tie_term = sum(t**3 - t for t in tie_counts)
    var = n * m / 12.0 * ((N + 1) - tie_term / (N * (N - 1)))
    if var <= 0:
        return 1.0
    z = max(abs(w - mean) - 0.5, 0.0) / math.sqrt(var)
    p = math.erfc(z / math.sqrt(2.0))
    return min(1.0, max(p, np.nextafter(0.0, 1.0)))


def rank_sum_test(a, b, exact_cutoff: int = EXACT_CUTOFF) -> GroupComparisonResult:
    """Two-sided Wilcoxon rank-sum test; W is the rank sum of ``a``.

    Exact null enumeration when the smaller sample has at most ``exact_cutoff``
    values and nothing is tied, normal approximation otherwise.
    """
    if not isinstance(a, AucSample):
        a = AucSample(tuple(a), "group1")
    if not isinstance(b, AucSample):
        b = AucSample(tuple(b), "group2")
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        raise EmptySampleError("both samples must be non-empty")
    pooled = np.array(a.areas + b.areas)
    ranks = midranks(pooled)
    w = float(ranks[:n].sum())
    _, tie_counts = np.unique(pooled, return_counts=True)
    tied = bool(np.any(tie_counts > 1))
    if min(n, m) <= exact_cutoff and not tied:
        exact = exact_rank_sum_pvalue(w, n, m)
        return GroupComparisonResult(a, b, w, float(exact), Method.EXACT, exact)
    p = normal_rank_sum_pvalue(w, n, m, tie_counts[tie_counts > 1].tolist())
    return GroupComparisonResult(a, b, w, p, Method.NORMAL)


def compare_groups(X: DataMatrix, Y: DataMatrix, mode=Mode.CORRELATION, domain_max: Optional[float] = None):
    """Jackknife both groups, integrate every replicate curve, rank-sum the areas.

    Covariance mode without an explicit domain integrates both groups over
    [0, largest weight pooled across every replicate of both groups].
    """
    return compare_groups_with_curves(X, Y, mode, domain_max)[0]


def compare_groups_with_curves(X: DataMatrix, Y: DataMatrix, mode=Mode.CORRELATION, domain_max=None):
    """Like ``compare_groups`` but also return both replicate curve lists."""
    mode = Mode.parse(mode)
    if X.p != Y.p:
        raise NodeCountMismatchError(f"groups have different node counts: {X.p} vs {Y.p}")
    wx = jackknife_weights(X, mode)
    wy = jackknife_weights(Y, mode)
    dom = _domain(wx + wy, mode, domain_max)
    cx, cy = _curves(wx, dom), _curves(wy, dom)
    a = AucSample(tuple(auc(c) for c in cx), "group1", dom)
    b = AucSample(tuple(auc(c) for c in cy), "group2", dom)
    return rank_sum_test(a, b), cx, cy
