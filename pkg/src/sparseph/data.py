"""Group data matrices, column normalization and edge-weight matrices.

A data matrix has one row per subject and one column per node. Edge weights
are absolute sample correlations (columns centered and scaled to unit norm)
or absolute sample covariances (columns centered only, divided by n - 1).
"""
from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ParseError, RaggedRowsError, ZeroVarianceError

__all__ = [
    "Mode",
    "DataMatrix",
    "NormalizedMatrix",
    "CenteredMatrix",
    "EdgeWeights",
    "load_csv",
    "write_csv",
    "normalize_columns",
    "center_columns",
    "edge_weights",
    "network_weights",
]


class Mode(str, enum.Enum):
    CORRELATION = "correlation"
    COVARIANCE = "covariance"

    @classmethod
    def parse(cls, value: Union[str, "Mode"]) -> "Mode":
        if isinstance(value, Mode):
            return value
        return cls(str(value).lower())


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DataMatrix:
    values: np.ndarray
    row_labels: Optional[tuple] = None
    col_labels: Optional[tuple] = None

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2:
            raise ValueError(f"data matrix must be 2-D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise ParseError(int(i) + 1, int(j) + 1, values[i, j])
        object.__setattr__(self, "values", values)
        if self.col_labels is None:
            object.__setattr__(self, "col_labels", tuple(str(j + 1) for j in range(values.shape[1])))
        else:
            object.__setattr__(self, "col_labels", tuple(self.col_labels))
        if self.row_labels is not None:
            object.__setattr__(self, "row_labels", tuple(self.row_labels))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def drop_row(self, index: int) -> "DataMatrix":
        rows = None
        if self.row_labels is not None:
            rows = self.row_labels[:index] + self.row_labels[index + 1:]
        return DataMatrix(np.delete(self.values, index, axis=0), rows, self.col_labels)


@dataclass(frozen=True)
class NormalizedMatrix:
    """Columns centered to zero mean and scaled to unit Euclidean norm."""

    values: np.ndarray
    source: Optional[DataMatrix] = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class CenteredMatrix:
    """Columns centered to zero mean, scale untouched (covariance mode input)."""

    values: np.ndarray
    source: Optional[DataMatrix] = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class EdgeWeights:
    weights: np.ndarray
    mode: Mode = Mode.CORRELATION

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"edge weights must be square, got shape {w.shape}")
        # keep the upper triangle and mirror it so symmetry is exact
        upper = np.triu(w, 1)
        w = upper + upper.T
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "mode", Mode.parse(self.mode))

    @property
    def p(self) -> int:
        return self.weights.shape[0]

    def max_weight(self) -> float:
        return float(self.weights.max()) if self.p > 1 else 0.0

    def upper_edges(self):
        """Return (rows, cols, weights) for every pair j < k."""
        rows, cols = np.triu_indices(self.p, 1)
        return rows, cols, self.weights[rows, cols]

    def to_json(self) -> str:
        return json.dumps({"mode": self.mode.value, "p": self.p, "weights": self.weights.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "EdgeWeights":
        obj = json.loads(text)
        return cls(np.asarray(obj["weights"], dtype=float), Mode.parse(obj["mode"]))

    def to_csv(self, path) -> None:
        write_csv(path, self.weights)


def _parse_cell(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(row, col, cell) from None
    if not math.isfinite(value):
        raise ParseError(row, col, cell)
    return value


def load_csv(path, has_header: bool = False) -> DataMatrix:
    """Read a comma-separated subjects x nodes table.

    Rows and columns in error messages are 1-based and count the header line.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        lines = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    labels = None
    start = 0
    if has_header and lines:
        labels = [c.strip() for c in lines[0]]
        start = 1
    rows = []
    width = len(labels) if labels is not None else None
    for i, raw in enumerate(lines[start:], start=start + 1):
        if width is None:
            width = len(raw)
        if len(raw) != width:
            raise RaggedRowsError(i, width, len(raw))
        rows.append([_parse_cell(c.strip(), i, j + 1) for j, c in enumerate(raw)])
    if not rows:
        raise ParseError(start + 1, 1, "")
    return DataMatrix(np.array(rows, dtype=float), None, labels)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path, values, header: Optional[Sequence[str]] = None) -> None:
    """Write a numeric table at full round-trip precision."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header is not None:
            writer.writerow(list(header))
        for row in values:
            writer.writerow([_fmt(x) for x in row])


def _values(X) -> np.ndarray:
    return np.asarray(getattr(X, "values", X), dtype=float)


def _labels(X):
    return getattr(X, "col_labels", None) or getattr(getattr(X, "source", None), "col_labels", None)


def _centered(X):
    v = _values(X)
    if v.ndim != 2 or v.shape[0] < 2:
        raise ValueError("need at least 2 rows to center columns")
    centered = v - v.mean(axis=0)
    norms = np.linalg.norm(centered, axis=0)
    scale = np.maximum(1.0, np.abs(v).max(axis=0))
    bad = np.flatnonzero(norms <= 1e-12 * scale)
    if bad.size:
        j = int(bad[0])
        labels = _labels(X)
        raise ZeroVarianceError(j + 1, labels[j] if labels else None)
    return centered, norms


def normalize_columns(X) -> NormalizedMatrix:
    centered, norms = _centered(X)
    z = centered / norms
    z.setflags(write=False)
    source = X if isinstance(X, DataMatrix) else getattr(X, "source", None)
    return NormalizedMatrix(z, source)


def center_columns(X) -> CenteredMatrix:
    centered, _ = _centered(X)
    centered.setflags(write=False)
    source = X if isinstance(X, DataMatrix) else getattr(X, "source", None)
    return CenteredMatrix(centered, source)


def edge_weights(Z, mode=Mode.CORRELATION) -> EdgeWeights:
    """Absolute inner-product weights between all node pairs.

    Correlation mode expects a NormalizedMatrix and returns |z_j' z_k|.
    Covariance mode expects a CenteredMatrix and returns |z_j' z_k| / (n - 1).
    """
    mode = Mode.parse(mode)
    if mode is Mode.CORRELATION and not isinstance(Z, NormalizedMatrix):
        raise TypeError("correlation mode needs a NormalizedMatrix")
    if mode is Mode.COVARIANCE and not isinstance(Z, CenteredMatrix):
        raise TypeError("covariance mode needs a CenteredMatrix")
    z = Z.values
    w = np.abs(z.T @ z)
    if mode is Mode.COVARIANCE:
        w /= z.shape[0] - 1
    else:
        np.clip(w, 0.0, 1.0, out=w)
    np.fill_diagonal(w, 0.0)
    return EdgeWeights(w, mode)


def network_weights(X: DataMatrix, mode=Mode.CORRELATION) -> EdgeWeights:
    """Normalize or center X as the mode requires, then compute edge weights."""
    mode = Mode.parse(mode)
    if mode is Mode.CORRELATION:
        return edge_weights(normalize_columns(X), mode)
    return edge_weights(center_columns(X), mode)
