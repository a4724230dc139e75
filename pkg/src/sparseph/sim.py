"""Seeded generators for the two-group simulation studies and random trees.

All randomness comes from one documented stream so that a seed reproduces the
same matrices on every platform and numpy release:

* bit generator: Philox-4x64 (counter based), ``numpy.random.Philox(seed)``,
  consumed only through ``random_raw`` whose output stream numpy keeps stable;
* uniforms: ``((raw >> 11) + 0.5) * 2**-53``, strictly inside (0, 1);
* normals: Box-Muller, pairs (u1, u2) taken consecutively, the cosine variate
  first then the sine variate.

Node numbering in docs is 1-based (node 1 is column 0).
"""
from __future__ import annotations

import heapq
from dataclasses import asdict, dataclass

import numpy as np

from .data import DataMatrix, EdgeWeights
from .errors import InvalidConfigError

__all__ = [
    "RNG_NAME",
    "SimConfig",
    "Stream",
    "simulate_study1",
    "simulate_study2",
    "random_tree",
]

RNG_NAME = "philox4x64/box-muller/v1"
_TWO_PI = 2.0 * np.pi


class Stream:
    """Uniform and normal variates on top of raw Philox output."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._bits = np.random.Philox(self.seed)

    def uniform(self, size: int) -> np.ndarray:
        raw = np.asarray(self._bits.random_raw(size), dtype=np.uint64)
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53

    def normal(self, shape) -> np.ndarray:
        size = int(np.prod(shape))
        pairs = (size + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        r = np.sqrt(-2.0 * np.log(u[:, 0]))
        theta = _TWO_PI * u[:, 1]
        z = np.column_stack([r * np.cos(theta), r * np.sin(theta)]).ravel()
        return z[:size].reshape(shape)

    def integers(self, high: int, size: int) -> np.ndarray:
        """Integers in [0, high); bias is below 2**-40 for the sizes used here."""
        return np.minimum((self.uniform(size) * high).astype(np.int64), high - 1)


@dataclass(frozen=True)
class SimConfig:
    n: int = 20
    m: int = 20
    p: int = 100
    noise_sd: float = 0.05
    dependency_coefficient: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 4 or self.m < 4:
            raise InvalidConfigError(f"group sizes must be >= 4, got n={self.n}, m={self.m}")
        if self.p < 2:
            raise InvalidConfigError(f"need at least 2 nodes, got p={self.p}")
        if not self.noise_sd > 0:
            raise InvalidConfigError(f"noise_sd must be positive, got {self.noise_sd}")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfigError("seed must fit in an unsigned 64-bit integer")

    def to_dict(self) -> dict:
        return asdict(self)


def _study1_arrays(cfg: SimConfig, stream: Stream):
    rows = max(cfg.n, cfg.m)
    base = stream.normal((rows, cfg.p))
    noise = cfg.noise_sd * stream.normal((cfg.m, cfg.p))
    return base, base[: cfg.n], base[: cfg.m] + noise


def simulate_study1(cfg: SimConfig):
    """Group 2 is Group 1 plus small Gaussian noise: no group difference.

    When m > n the extra Group-2 rows perturb base draws that Group 1 does not
    use; with the default n = m the construction is literal.
    """
    _, x, y = _study1_arrays(cfg, Stream(cfg.seed))
    return DataMatrix(x), DataMatrix(y)


def simulate_study2(cfg: SimConfig):
    """Study-1 construction, then nodes 2-5 of Group 2 are tied to node 1 of Group 1.

    y_ij = dependency_coefficient * x_i1 + N(0, noise_sd^2) for j = 2..5.
    """
    if cfg.p < 6:
        raise InvalidConfigError(f"study 2 needs p >= 6, got p={cfg.p}")
    stream = Stream(cfg.seed)
    base, x, y = _study1_arrays(cfg, stream)
    extra = cfg.noise_sd * stream.normal((cfg.m, 4))
    # base[:, 0] is Group 1's node 1 (and the unshared base draw for rows beyond n)
    y[:, 1:5] = cfg.dependency_coefficient * base[: cfg.m, 0:1] + extra
    return DataMatrix(x), DataMatrix(y)


def _prufer_decode(seq, p: int):
    degree = [1] * p
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(p) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((a, b))
    return edges


def random_tree(p: int, seed: int, grid: int = 10**6) -> EdgeWeights:
    """Uniform random labelled tree with distinct weights from {1/grid, ..., (grid-1)/grid}."""
    if p < 2:
        raise InvalidConfigError(f"a tree needs p >= 2, got {p}")
    if p - 1 > grid - 1:
        raise InvalidConfigError("weight grid too coarse for this many edges")
    stream = Stream(seed)
    seq = stream.integers(p, p - 2).tolist() if p > 2 else []
    edges = _prufer_decode(seq, p)
    chosen = []
    seen = set()
    while len(chosen) < p - 1:
        for k in stream.integers(grid - 1, p - 1 - len(chosen)).tolist():
            k += 1
            if k not in seen and len(chosen) < p - 1:
                seen.add(k)
                chosen.append(k)
    w = np.zeros((p, p))
    for (a, b), k in zip(edges, chosen):
        w[a, b] = w[b, a] = k / grid
    return EdgeWeights(w)
