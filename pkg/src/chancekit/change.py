"""Change points between adjacent market windows, trends, and explanations.

A market vector is the normalized per-item event-occurrence profile of a
time window over a fixed vocabulary.  A change point at ``t`` is declared
when the vectors of ``[t - dt, t)`` and ``[t, t + dt)`` differ by more
than ``Q``.  The stretches between change points are trends; trends whose
centroids nearly coincide share an id.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import kernels
from .cooccur import item_frequencies, top_items
from .timeline import index_range

METRICS = ("L1", "L2", "cosine")


class ChangeError(ValueError):
    pass


@dataclass(frozen=True)
class MarketVector:
    window_start: float
    window_end: float
    vocab: tuple
    weights: np.ndarray
    n_events: int = 0

    @property
    def empty(self) -> bool:
        return not self.weights.any()

    def as_dict(self) -> Dict[str, float]:
        return {item: float(w) for item, w in zip(self.vocab, self.weights) if w > 0}


@dataclass(frozen=True)
class ChangeConfig:
    dt: float
    Q: float
    metric: str = "L2"
    vocab_size: int = 100
    nms: bool = True
    step: float = 1
    label_k: int = 5

    def __post_init__(self):
        if self.dt <= 0:
            raise ChangeError("dt must be positive")
        if not self.Q > 0:
            raise ChangeError("Q must be positive")
        if self.metric not in METRICS:
            raise ChangeError(f"metric must be one of {METRICS}")
        if self.vocab_size < 1 or self.step <= 0 or self.label_k < 1:
            raise ChangeError("vocab_size, step and label_k must be positive")


@dataclass(frozen=True)
class ChangePoint:
    t: float
    magnitude: float
    from_trend: Optional[int] = None
    to_trend: Optional[int] = None


@dataclass(frozen=True)
class TrendSegment:
    trend_id: int
    start: float
    end: float
    centroid: MarketVector
    label_items: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class ChangeExplanation:
    t: float
    from_trend: int
    to_trend: int
    from_labels: List[str]
    to_labels: List[str]
    rising: List[tuple]
    falling: List[tuple]
    structural: list


class Market:
    """A stream packed once over a vocabulary so windows are cheap to query."""

    def __init__(self, stream, vocab: Sequence[str]):
        if not vocab:
            raise ChangeError("vocabulary must not be empty")
        self.events = list(stream)
        self.times = [e.t for e in self.events]
        self.vocab = tuple(vocab)
        self.packed = kernels.pack(self.events, vocab=self.vocab)

    def vector(self, start, end) -> MarketVector:
        lo, hi = index_range(self.times, start, end)
        counts = kernels.presence_counts(self.packed, lo, hi).astype(float)
        total = counts.sum()
        weights = counts / total if total > 0 else counts
        return MarketVector(start, end, self.vocab, weights, hi - lo)


def default_vocab(stream, size: int = 100) -> List[str]:
    return sorted(top_items(item_frequencies(stream), size))


def market_vector(stream, window, vocab: Sequence[str]) -> MarketVector:
    start, end = window
    return Market(stream, vocab).vector(start, end)


def change_magnitude(v1: MarketVector, v2: MarketVector, metric: str = "L2") -> float:
    if tuple(v1.vocab) != tuple(v2.vocab):
        raise ChangeError("market vectors are over different vocabularies")
    a, b = v1.weights, v2.weights
    if metric == "L1":
        return float(np.abs(a - b).sum())
    if metric == "L2":
        return float(math.sqrt(((a - b) ** 2).sum()))
    if metric == "cosine":
        na, nb = math.sqrt((a * a).sum()), math.sqrt((b * b).sum())
        if na == 0 or nb == 0:
            return 1.0
        return max(0.0, 1.0 - float((a * b).sum()) / (na * nb))
    raise ChangeError(f"unknown metric {metric!r}")


def span_end(stream, cfg: ChangeConfig):
    """Exclusive end of the analysed span: one grid step past the last event."""
    return stream[-1].t + cfg.step


def magnitude_series(stream, cfg: ChangeConfig, vocab=None, jobs: int = 1) -> List[tuple]:
    """``(t, magnitude)`` for every candidate ``t`` on the step grid."""
    stream = list(stream)
    if not stream:
        raise ChangeError("span too short: empty stream")
    t0, end = stream[0].t, span_end(stream, cfg)
    if end - t0 < 2 * cfg.dt:
        raise ChangeError(f"span too short: {end - t0} < 2*dt = {2 * cfg.dt}")
    market = Market(stream, vocab or default_vocab(stream, cfg.vocab_size))
    grid = []
    k = 0
    while True:
        t = t0 + cfg.dt + k * cfg.step
        if t + cfg.dt > end:
            break
        grid.append(t)
        k += 1

    def one(t):
        return t, change_magnitude(market.vector(t, t + cfg.dt), market.vector(t - cfg.dt, t),
                                   cfg.metric)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, grid))
    return [one(t) for t in grid]


def suppress_non_maxima(points: List[ChangePoint], radius) -> List[ChangePoint]:
    """Keep a point only if no stronger (or equal and earlier) point lies within ``radius``."""
    kept = []
    for p in sorted(points, key=lambda p: (-p.magnitude, p.t)):
        if all(abs(p.t - q.t) > radius for q in kept):
            kept.append(p)
    return sorted(kept, key=lambda p: p.t)


def detect_changes(stream, cfg: ChangeConfig, vocab=None, jobs: int = 1) -> List[ChangePoint]:
    series = magnitude_series(stream, cfg, vocab, jobs)
    points = [ChangePoint(t, m) for t, m in series if m > cfg.Q]
    if cfg.nms:
        points = suppress_non_maxima(points, cfg.dt)
    return points


def _centroid(market: Market, start, end, dt) -> MarketVector:
    vecs = []
    s = start
    while s < end:
        v = market.vector(s, min(s + dt, end))
        if v.n_events:
            vecs.append(v.weights)
        s += dt
    weights = np.mean(vecs, axis=0) if vecs else np.zeros(len(market.vocab))
    return MarketVector(start, end, market.vocab, weights, len(vecs))


def _labels(v: MarketVector, k: int) -> List[str]:
    ranked = sorted((i for i in range(len(v.vocab)) if v.weights[i] > 0),
                    key=lambda i: (-v.weights[i], v.vocab[i]))
    return [v.vocab[i] for i in ranked[:k]]


def segment_trends(stream, changepoints: Sequence[ChangePoint], cfg: ChangeConfig,
                   vocab=None) -> List[TrendSegment]:
    """Cut the span at the change points; near-identical centroids share a trend id."""
    stream = list(stream)
    if not stream:
        return []
    times = [c.t for c in changepoints]
    if times != sorted(times):
        raise ChangeError("change points must be time-ordered")
    market = Market(stream, vocab or default_vocab(stream, cfg.vocab_size))
    bounds = [stream[0].t] + times + [span_end(stream, cfg)]
    segments: List[TrendSegment] = []
    reps: List[tuple] = []  # (trend id, centroid of its first segment)
    for start, end in zip(bounds, bounds[1:]):
        centroid = _centroid(market, start, end, cfg.dt)
        tid = None
        for rid, rep in reps:
            if change_magnitude(centroid, rep, cfg.metric) < cfg.Q / 2:
                tid = rid
                break
        if tid is None:
            tid = len(reps) + 1
            reps.append((tid, centroid))
        segments.append(TrendSegment(tid, start, end, centroid, _labels(centroid, cfg.label_k)))
    return segments


def annotate(changepoints: Sequence[ChangePoint], segments: Sequence[TrendSegment]):
    """Fill in ``from_trend``/``to_trend`` on change points from segment boundaries."""
    starts = {s.start: i for i, s in enumerate(segments)}
    out = []
    for cp in changepoints:
        i = starts.get(cp.t)
        if i is None or i == 0:
            raise ChangeError(f"change point {cp.t} is not a segment boundary")
        out.append(replace(cp, from_trend=segments[i - 1].trend_id, to_trend=segments[i].trend_id))
    return out


def explain_change(cp: ChangePoint, segments: Sequence[TrendSegment], signs=None,
                   dt: Optional[float] = None, k: int = 5, tol: float = 1e-9) -> ChangeExplanation:
    """Describe the trend transition at ``cp`` and the items that moved most.

    ``signs`` are GBE change signs; those whose window ends within ``dt`` of
    the change point are attached.
    """
    idx = next((i for i, s in enumerate(segments) if s.start == cp.t and i > 0), None)
    if idx is None:
        raise ChangeError(f"change point {cp.t} is not a segment boundary")
    before, after = segments[idx - 1], segments[idx]
    diff = after.centroid.weights - before.centroid.weights
    vocab = after.centroid.vocab
    rising = sorted(((vocab[i], float(d)) for i, d in enumerate(diff) if d > tol),
                    key=lambda x: (-x[1], x[0]))[:k]
    falling = sorted(((vocab[i], float(d)) for i, d in enumerate(diff) if d < -tol),
                     key=lambda x: (x[1], x[0]))[:k]
    structural = []
    if signs and dt is not None:
        for sign in signs:
            if cp.t - dt <= sign.window_end <= cp.t + dt:
                structural.extend(sign.changes)
    return ChangeExplanation(cp.t, before.trend_id, after.trend_id, before.label_items,
                             after.label_items, rising, falling, structural)
