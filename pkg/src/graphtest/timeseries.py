"""Graph construction from multichannel time series.

The pipeline slides a fixed-width window over the recording, computes a
Spearman correlation for every channel pair inside each window, and turns
each window into a graph: channels are vertices and an edge appears when the
correlation is extreme relative to both a fixed constant and the quartiles of
that pair's own correlation series.

Window geometry is specified in milliseconds and converted through the
sampling rate. Start and end positions are computed in exact arithmetic per
window and rounded to the nearest sample independently, so a non-integer
step (the default is 16.66 ms) never accumulates drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import (
    DimensionMismatchError,
    InsufficientSampleError,
    UndefinedCorrelationError,
)
from .graphs import Graph, GraphSample, canonical_pairs, num_pairs, pair_index

__all__ = [
    "ChannelMatrix",
    "WindowSpec",
    "CorrelationSeries",
    "ThresholdSpec",
    "SummaryGraph",
    "spearman",
    "correlation_series",
    "pair_quartiles",
    "build_graphs",
    "summary_graph",
]


class ChannelMatrix:
    """Uniformly sampled multichannel recording, one column per channel."""

    def __init__(
        self,
        labels: Sequence[str],
        values,
        sampling_rate: float,
    ):
        labels = tuple(str(x) for x in labels)
        if len(labels) < 2:
            raise ValueError("need at least 2 channels")
        if len(set(labels)) != len(labels):
            raise ValueError("channel labels must be unique")
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != len(labels):
            raise DimensionMismatchError(
                f"expected a (time x {len(labels)}) matrix, got shape {arr.shape}"
            )
        if arr.shape[0] < 1:
            raise ValueError("recording must contain at least one sample")
        if not np.isfinite(arr).all():
            raise ValueError("recording contains NaN or infinite values")
        if not sampling_rate > 0:
            raise ValueError(f"sampling_rate must be positive, got {sampling_rate}")
        self.labels = labels
        self.values = arr
        self.sampling_rate = float(sampling_rate)

    @property
    def n_channels(self) -> int:
        return len(self.labels)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    def __repr__(self) -> str:
        return (
            f"ChannelMatrix(channels={self.n_channels}, "
            f"samples={self.n_samples}, rate={self.sampling_rate})"
        )


@dataclass(frozen=True)
class WindowSpec:
    """Sliding-window geometry in milliseconds."""

    width_ms: float = 333.0
    step_ms: float = 16.66

    def __post_init__(self):
        if not self.width_ms > 0:
            raise ValueError("window width must be positive")
        if not self.step_ms > 0:
            raise ValueError("window step must be positive")


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def _window_bounds(
    n_samples: int, rate: float, spec: WindowSpec
) -> list[tuple[int, int]]:
    """Half-open sample ranges [a, b) of every window, nearest-sample rounded."""
    width = Fraction(spec.width_ms) * Fraction(rate) / 1000
    step = Fraction(spec.step_ms) * Fraction(rate) / 1000
    if _round_half_up(width) < 2:
        raise ValueError(
            f"window of {spec.width_ms} ms spans fewer than 2 samples "
            f"at {rate} Hz"
        )
    if width > n_samples:
        raise InsufficientSampleError(
            f"window of {spec.width_ms} ms needs more than the "
            f"{n_samples} samples available"
        )
    count = math.floor((n_samples - width) / step) + 1
    bounds = []
    for k in range(count):
        start = step * k
        a = _round_half_up(start)
        b = _round_half_up(start + width)
        bounds.append((a, b))
    return bounds


def spearman(x, y) -> float:
    """Spearman correlation: Pearson correlation of average-rank transforms.

    Ties receive their mean rank. A constant input has no rank variance and
    no defined correlation; that raises UndefinedCorrelationError here, while
    the windowed pipeline treats such windows as correlation 0 and reports
    them in its diagnostics.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1 or xa.shape != ya.shape:
        raise DimensionMismatchError(
            f"inputs must be equal-length vectors, got {xa.shape} and {ya.shape}"
        )
    if len(xa) < 2:
        raise InsufficientSampleError("need at least 2 observations")
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise UndefinedCorrelationError(
            "correlation is undefined for a constant sequence"
        )
    ranks = np.column_stack([rankdata(xa), rankdata(ya)])
    rho = float(np.corrcoef(ranks, rowvar=False)[0, 1])
    return min(1.0, max(-1.0, rho))


class CorrelationSeries:
    """Windowed correlations: one value per (window, canonical channel pair).

    ``undefined`` lists (window_index, pair_index) entries where at least one
    channel was constant inside the window; those values are set to 0.
    """

    def __init__(
        self,
        labels: Sequence[str],
        values,
        windows: Sequence[tuple[int, int]],
        undefined: Iterable[tuple[int, int]] = (),
    ):
        labels = tuple(str(x) for x in labels)
        arr = np.asarray(values, dtype=np.float64)
        E = num_pairs(len(labels))
        if arr.ndim != 2 or arr.shape != (len(windows), E):
            raise DimensionMismatchError(
                f"expected a ({len(windows)} x {E}) matrix, got shape {arr.shape}"
            )
        if len(windows) < 1:
            raise ValueError("need at least one window")
        if not np.isfinite(arr).all() or arr.min() < -1 or arr.max() > 1:
            raise ValueError("correlations must lie in [-1, 1]")
        self.labels = labels
        self.values = arr
        self.windows = tuple((int(a), int(b)) for a, b in windows)
        self.undefined = tuple((int(w), int(p)) for w, p in undefined)

    @property
    def v(self) -> int:
        return len(self.labels)

    @property
    def n_windows(self) -> int:
        return len(self.windows)

    def pair_series(self, i: int, j: int) -> np.ndarray:
        if i > j:
            i, j = j, i
        return self.values[:, pair_index(self.v, i, j)]

    def __repr__(self) -> str:
        return f"CorrelationSeries(v={self.v}, windows={self.n_windows})"


def correlation_series(m: ChannelMatrix, w: WindowSpec) -> CorrelationSeries:
    """Spearman correlation of every channel pair inside every sliding window.

    Windows where a channel is constant contribute correlation 0 for that
    channel's pairs and are listed in the result's ``undefined`` diagnostics
    instead of failing the pipeline.
    """
    bounds = _window_bounds(m.n_samples, m.sampling_rate, w)
    v = m.n_channels
    E = num_pairs(v)
    pairs = canonical_pairs(v)
    values = np.zeros((len(bounds), E), dtype=np.float64)
    undefined = []
    for t, (a, b) in enumerate(bounds):
        block = m.values[a:b]
        constant = np.all(block == block[0], axis=0)
        ranks = rankdata(block, axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            corr = np.corrcoef(ranks, rowvar=False)
        for p, (i, j) in enumerate(pairs):
            if constant[i] or constant[j]:
                undefined.append((t, p))
                values[t, p] = 0.0
            else:
                values[t, p] = min(1.0, max(-1.0, float(corr[i, j])))
    return CorrelationSeries(m.labels, values, bounds, undefined)


def pair_quartiles(series) -> tuple[float, float]:
    """First and third quartiles by linear order-statistic interpolation.

    The quantile at level p sits at position 1 + (len-1)*p of the sorted
    values, interpolating linearly between neighbors.
    """
    arr = np.asarray(series, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {arr.shape}")
    if len(arr) < 4:
        raise InsufficientSampleError(
            f"need at least 4 values for quartiles, got {len(arr)}"
        )
    q1, q3 = np.quantile(arr, [0.25, 0.75], method="linear")
    return float(q1), float(q3)


class ThresholdSpec:
    """Edge rule parameters: a constant c and per-pair correlation quartiles.

    An edge appears in a window when the pair's correlation is at least
    max(c, q3) or at most min(-c, q1) for that pair.
    """

    def __init__(self, c: float, q1, q3):
        if not 0.0 < c < 1.0:
            raise ValueError(f"c must lie in (0, 1), got {c}")
        q1a = np.asarray(q1, dtype=np.float64)
        q3a = np.asarray(q3, dtype=np.float64)
        if q1a.shape != q3a.shape or q1a.ndim != 1:
            raise DimensionMismatchError(
                f"quartile vectors must share one shape, got {q1a.shape} "
                f"and {q3a.shape}"
            )
        if np.any(q1a > q3a):
            raise ValueError("every pair must satisfy q1 <= q3")
        self.c = float(c)
        self.q1 = q1a
        self.q3 = q3a

    @classmethod
    def from_series(cls, cs: CorrelationSeries, c: float = 0.5) -> "ThresholdSpec":
        """Quartiles of each pair's own correlation series."""
        quartiles = [pair_quartiles(cs.values[:, p]) for p in range(cs.values.shape[1])]
        q1 = [q[0] for q in quartiles]
        q3 = [q[1] for q in quartiles]
        return cls(c, q1, q3)

    def __repr__(self) -> str:
        return f"ThresholdSpec(c={self.c}, pairs={len(self.q1)})"


def build_graphs(cs: CorrelationSeries, th: ThresholdSpec) -> GraphSample:
    """One graph per window: edges where the correlation passes the threshold rule."""
    E = cs.values.shape[1]
    if len(th.q1) != E:
        raise DimensionMismatchError(
            f"thresholds cover {len(th.q1)} pairs but series has {E}"
        )
    upper = np.maximum(th.c, th.q3)
    lower = np.minimum(-th.c, th.q1)
    mask = (cs.values >= upper) | (cs.values <= lower)
    return GraphSample(
        Graph.from_indicator_row(cs.v, row) for row in mask
    )


@dataclass(frozen=True)
class SummaryGraph:
    """The most frequent edges of a sample, with their empirical frequencies."""

    graph: Graph
    frequencies: tuple[tuple[tuple[int, int], float], ...]


def summary_graph(s: GraphSample, k: int) -> SummaryGraph:
    """Graph of the k most frequent edges, ties broken by pair order.

    ``frequencies`` lists the selected pairs from most to least frequent,
    each with its fraction of sample graphs containing the edge.
    """
    E = num_pairs(s.v)
    if not 0 <= k <= E:
        raise ValueError(f"k must lie in [0, {E}], got {k}")
    counts = s.edge_counts
    order = sorted(range(E), key=lambda a: (-int(counts[a]), a))[:k]
    pairs = canonical_pairs(s.v)
    bits = 0
    freqs = []
    for a in order:
        bits |= 1 << a
        freqs.append((pairs[a], int(counts[a]) / s.n))
    return SummaryGraph(graph=Graph(s.v, bits), frequencies=tuple(freqs))
