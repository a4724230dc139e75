"""Maximal graph filtrations and Betti-0 curves.

Thresholding a weighted graph keeps the edges with weight strictly above
lambda. Sweeping lambda over the sorted unique edge weights gives the finest
possible nested sequence of binary graphs; the number of connected components
along that sequence is the Betti-0 curve.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .data import EdgeWeights, Mode, _fmt
from .errors import DomainTooSmallError, NotATreeError
from .unionfind import DisjointSet

__all__ = [
    "Filtration",
    "BettiCurve",
    "build_filtration",
    "betti0_at",
    "betti_curve",
    "tree_betti_oracle",
    "dfs_component_oracle",
    "default_domain_max",
]


@dataclass(frozen=True)
class Filtration:
    """Unique nonzero edge weights plus the edges themselves, ascending by weight.

    Level 0 (lambda = 0) is implicit, so there are ``len(values) + 1`` levels.
    """

    values: np.ndarray
    p: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    mode: Mode = Mode.CORRELATION

    @property
    def q(self) -> int:
        return len(self.values)

    @property
    def levels(self) -> int:
        return self.q + 1

    @property
    def edges(self):
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.weights.tolist()))

    def max_weight(self) -> float:
        return float(self.values[-1]) if self.q else 0.0

    def graph_at(self, lam: float) -> set:
        keep = self.weights > lam
        return set(zip(self.rows[keep].tolist(), self.cols[keep].tolist()))

    def level_values(self) -> np.ndarray:
        return np.concatenate([[0.0], self.values])


@dataclass(frozen=True)
class BettiCurve:
    """Right-continuous step function: value ``betti[r]`` on ``[lambdas[r], lambdas[r+1])``.

    The last step extends to ``domain_max``.
    """

    lambdas: np.ndarray
    betti: np.ndarray
    domain_max: float

    @property
    def breakpoints(self):
        return list(zip(self.lambdas.tolist(), self.betti.tolist()))

    @property
    def p(self) -> int:
        return int(self.betti[-1])

    def __call__(self, lam):
        idx = np.searchsorted(self.lambdas, lam, side="right") - 1
        return self.betti[np.maximum(idx, 0)]

    def __eq__(self, other):
        if not isinstance(other, BettiCurve):
            return NotImplemented
        return (
            self.domain_max == other.domain_max
            and np.array_equal(self.lambdas, other.lambdas)
            and np.array_equal(self.betti, other.betti)
        )

    __hash__ = None

    def to_json(self) -> str:
        return json.dumps({"domain_max": self.domain_max, "breakpoints": [[l, b] for l, b in self.breakpoints]})

    @classmethod
    def from_json(cls, text: str) -> "BettiCurve":
        obj = json.loads(text)
        bp = obj["breakpoints"]
        return cls(
            np.array([b[0] for b in bp], dtype=float),
            np.array([b[1] for b in bp], dtype=np.int64),
            float(obj["domain_max"]),
        )

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["lambda", "beta0"])
            for lam, b in zip(self.lambdas, self.betti):
                writer.writerow([_fmt(lam), int(b)])


def default_domain_max(w, mode=None) -> float:
    """1 for correlations; the largest weight for covariances."""
    mode = Mode.parse(mode if mode is not None else w.mode)
    if mode is Mode.CORRELATION:
        return 1.0
    return float(w.max_weight())


def build_filtration(w: EdgeWeights) -> Filtration:
    rows, cols, weights = w.upper_edges()
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ValueError("edge weights must be finite and nonnegative")
    nonzero = weights > 0
    rows, cols, weights = rows[nonzero], cols[nonzero], weights[nonzero]
    order = np.argsort(weights, kind="stable")
    rows, cols, weights = rows[order], cols[order], weights[order]
    # exact equality collapses ties; no epsilon merging
    values = np.unique(weights)
    return Filtration(values, w.p, rows, cols, weights, w.mode)


def betti0_at(w: EdgeWeights, lam: float) -> int:
    """Connected components of the graph keeping edges with weight > lam."""
    rows, cols, weights = w.upper_edges()
    keep = weights > lam
    ds = DisjointSet(w.p)
    for a, b in zip(rows[keep].tolist(), cols[keep].tolist()):
        ds.union(a, b)
    return ds.components


def betti_curve(f, domain_max: Optional[float] = None) -> BettiCurve:
    """Betti-0 at lambda = 0 and at every unique edge weight.

    Edges are added in descending weight to a disjoint-set forest, so the
    whole curve costs one sort plus near-linear union-find work.
    """
    if isinstance(f, EdgeWeights):
        f = build_filtration(f)
    if domain_max is None:
        domain_max = 1.0 if f.mode is Mode.CORRELATION else f.max_weight()
    domain_max = float(domain_max)
    if domain_max < f.max_weight():
        raise DomainTooSmallError(f"domain_max {domain_max} is below the largest weight {f.max_weight()}")

    p = f.p
    merged = np.zeros(len(f.weights), dtype=np.int64)
    ds = DisjointSet(p)
    rows, cols = f.rows.tolist(), f.cols.tolist()
    for i in range(len(rows) - 1, -1, -1):
        if ds.components == 1:
            break
        if ds.union(rows[i], cols[i]):
            merged[i] = 1
    # merges among edges at index >= i, i.e. the edges surviving a threshold
    suffix = np.concatenate([np.cumsum(merged[::-1])[::-1], [0]])
    lambdas = f.level_values()
    idx = np.searchsorted(f.weights, lambdas, side="right")
    betti = p - suffix[idx]
    return BettiCurve(lambdas, betti.astype(np.int64), domain_max)


def _is_tree(p: int, edges) -> bool:
    if len(edges) != p - 1:
        return False
    adj = [[] for _ in range(p)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == p


def tree_betti_oracle(tree, domain_max: float = 1.0) -> BettiCurve:
    """Closed-form Betti curve of a weighted tree: (0, 1), (w_(1), 2), ..., (w_(p-1), p).

    ``tree`` is either the p - 1 edge weights of a tree or an EdgeWeights
    matrix, which is checked to actually be a tree.
    """
    if isinstance(tree, EdgeWeights):
        rows, cols, weights = tree.upper_edges()
        keep = weights > 0
        if not _is_tree(tree.p, list(zip(rows[keep].tolist(), cols[keep].tolist()))):
            raise NotATreeError("weighted graph is not a tree")
        weights = weights[keep]
    else:
        weights = np.asarray(list(tree), dtype=float)
    if np.any(weights <= 0):
        raise NotATreeError("tree edge weights must be positive")
    weights = np.sort(weights)
    if np.any(np.diff(weights) == 0):
        raise NotATreeError("tree edge weights must be unique")
    p = len(weights) + 1
    return BettiCurve(
        np.concatenate([[0.0], weights]),
        np.arange(1, p + 1, dtype=np.int64),
        float(domain_max),
    )


def dfs_component_oracle(w: EdgeWeights, lam: float) -> int:
    """Count components by depth-first search on the thresholded adjacency matrix."""
    adj = np.asarray(w.weights) > lam
    p = adj.shape[0]
    seen = np.zeros(p, dtype=bool)
    count = 0
    for start in range(p):
        if seen[start]:
            continue
        count += 1
        seen[start] = True
        stack = [start]
        while stack:
            v = stack.pop()
            for u in np.flatnonzero(adj[v] & ~seen):
                seen[u] = True
                stack.append(int(u))
    return count
