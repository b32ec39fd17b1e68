"""Rolling distance-correlation networks over a keyword panel.

For each day t, pairwise distance correlations are computed over the
retrospective window [t - window + 1, t], thresholded into an undirected
graph, and summarized as network density or the global clustering
coefficient (transitivity). Both metrics live in [0, 1], which is why
the downstream alignment never normalizes them.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    InsufficientHistoryError,
    LengthMismatchError,
    TooFewNodesError,
    WindowTooShortError,
)
from .timeseries import DateIndexedSeries


class MetricKind(str, Enum):
    DENSITY = "density"
    CLUSTERING = "clustering"


@dataclass(frozen=True)
class KeywordPanel:
    """Aligned daily series, one per keyword; all share start date and length."""

    keywords: tuple[str, ...]
    series: tuple[DateIndexedSeries, ...]

    def __post_init__(self) -> None:
        if len(self.keywords) != len(self.series):
            raise ValueError("one series per keyword required")
        if not self.keywords:
            raise ValueError("panel must hold at least one keyword")
        if len(set(self.keywords)) != len(self.keywords):
            raise ValueError("keywords must be unique")
        first = self.series[0]
        for s in self.series[1:]:
            if s.start_date != first.start_date or len(s) != len(first):
                raise ValueError("all panel series must share start date and length")

    @classmethod
    def from_mapping(cls, by_keyword: Mapping[str, DateIndexedSeries]) -> "KeywordPanel":
        keys = tuple(sorted(by_keyword))
        return cls(keys, tuple(by_keyword[k] for k in keys))

    @property
    def start_date(self) -> date:
        return self.series[0].start_date

    def __len__(self) -> int:
        return len(self.series[0])

    @property
    def n_keywords(self) -> int:
        return len(self.keywords)


@dataclass(frozen=True)
class ThresholdedGraph:
    """Undirected, loop-free adjacency: edges are (i, j) pairs with i < j."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i}, {j}) invalid for {self.n} nodes")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency_sets(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


@dataclass(frozen=True)
class NetworkMetricSeries:
    metric_kind: MetricKind
    series: DateIndexedSeries

    def __post_init__(self) -> None:
        for v in self.series.values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"metric value {v} outside [0, 1]")


def distance_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Distance correlation of two equal-length windows, in [0, 1].

    Pairwise absolute-difference matrices are double-centered (row mean
    and column mean subtracted, grand mean added back); the squared
    distance covariance is the mean of their elementwise product and the
    distance variances follow the same recipe against themselves. A
    window with zero distance variance on either side yields 0 by
    convention: constant interest carries no association signal. The
    final ratio is clamped to [0, 1] to absorb rounding dust.
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1:
        raise ValueError("inputs must be 1-dimensional")
    if len(xs) != len(ys):
        raise LengthMismatchError(f"window lengths differ: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise WindowTooShortError(f"need at least 2 observations, got {len(xs)}")

    def centered(values: np.ndarray) -> np.ndarray:
        d = np.abs(values[:, None] - values[None, :])
        return d - d.mean(axis=0)[None, :] - d.mean(axis=1)[:, None] + d.mean()

    a = centered(xs)
    b = centered(ys)
    dcov2 = float((a * b).mean())
    dvarx2 = float((a * a).mean())
    dvary2 = float((b * b).mean())
    if dvarx2 <= 0.0 or dvary2 <= 0.0:
        return 0.0
    r = np.sqrt(max(dcov2, 0.0)) / np.sqrt(np.sqrt(dvarx2) * np.sqrt(dvary2))
    return float(min(1.0, max(0.0, r)))


def correlation_matrix_at(panel: KeywordPanel, t: date, window: int) -> np.ndarray:
    """Symmetric N x N distance-correlation matrix over [t - window + 1, t].

    The retrospective window includes day t itself. Diagonal entries are 1.
    """
    end = (t - panel.start_date).days
    if end < window - 1 or end >= len(panel):
        raise InsufficientHistoryError(
            f"day {t.isoformat()} needs {window} days of history inside the panel"
        )
    lo = end - window + 1
    windows = [np.asarray(s.values[lo : end + 1], dtype=float) for s in panel.series]
    n = panel.n_keywords
    matrix = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            r = distance_correlation(windows[i], windows[j])
            matrix[i, j] = r
            matrix[j, i] = r
    return matrix


def threshold_graph(matrix: np.ndarray, theta: float) -> ThresholdedGraph:
    """Edge {i, j} present iff matrix(i, j) >= theta; the comparison is inclusive."""
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    edges = frozenset(
        (i, j) for i in range(n) for j in range(i + 1, n) if m[i, j] >= theta
    )
    return ThresholdedGraph(n=n, edges=edges)


def network_density(g: ThresholdedGraph) -> float:
    """Realized fraction of possible edges: 2E / (n (n - 1))."""
    if g.n < 2:
        raise TooFewNodesError(f"density undefined on {g.n} node(s)")
    return 2.0 * g.edge_count / (g.n * (g.n - 1))


def clustering_coefficient(g: ThresholdedGraph) -> float:
    """Global transitivity: 3 * triangles / connected triplets, 0 when no triplets.

    Closed triplets are counted as common neighbors summed over edges
    (each triangle is seen from its three edges), open-plus-closed
    triplets as sum over vertices of C(deg, 2). Integer arithmetic keeps
    the ratio exact.
    """
    adj = g.adjacency_sets()
    closed = sum(len(adj[i] & adj[j]) for i, j in g.edges)
    triplets = sum(len(nbrs) * (len(nbrs) - 1) // 2 for nbrs in adj)
    if triplets == 0:
        return 0.0
    return closed / triplets


def correlation_matrix_sequence(panel: KeywordPanel, window: int) -> list[np.ndarray]:
    """Per-day correlation matrices from day (window - 1) onward.

    This is the expensive intermediate; the sweep reuses one sequence
    across every threshold and metric choice.
    """
    if len(panel) < window:
        raise InsufficientHistoryError(
            f"panel of {len(panel)} days cannot support a {window}-day window"
        )
    start = panel.start_date
    return [
        correlation_matrix_at(panel, start + timedelta(days=offset), window)
        for offset in range(window - 1, len(panel))
    ]


def metric_series_from_matrices(
    matrices: Sequence[np.ndarray],
    first_date: date,
    metric_kind: MetricKind,
    theta: float,
) -> NetworkMetricSeries:
    """Threshold each matrix and evaluate one metric per day."""
    metric = network_density if metric_kind is MetricKind.DENSITY else clustering_coefficient
    values = tuple(metric(threshold_graph(m, theta)) for m in matrices)
    return NetworkMetricSeries(metric_kind, DateIndexedSeries(first_date, values))


def metric_series(
    panel: KeywordPanel, metric_kind: MetricKind, theta: float, window: int
) -> NetworkMetricSeries:
    """One metric value per day from (panel start + window - 1) onward."""
    matrices = correlation_matrix_sequence(panel, window)
    first = panel.start_date + timedelta(days=window - 1)
    return metric_series_from_matrices(matrices, first, metric_kind, theta)
