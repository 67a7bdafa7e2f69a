"""Graph-based entropy (GBE) over sliding windows and structural change signs.

Inside each window the islands are rebuilt from that window's events, every
event is assigned to the islands it touches, and the entropy of that
assignment is the diversity reading.  Comparing consecutive windows' islands
by Jaccard overlap classifies appearance, disappearance, separation and
unification.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import kernels
from .cooccur import GraphConfig
from .entropy import UndefinedEntropy, entropy_bits
from .keygraph import Island, KeyGraphConfig, extract_bases
from .timeline import index_range, window_starts

MEMBERSHIP_RULES = ("any", "all")
CHANGE_KINDS = ("appearance", "disappearance", "separation", "unification")


@dataclass(frozen=True)
class ClusterDistribution:
    freqs: Dict[int, int]
    probs: Dict[int, float]

    @property
    def empty(self) -> bool:
        return not self.freqs


@dataclass(frozen=True)
class GbeConfig:
    window_len: float
    step: float
    graph: GraphConfig = field(default_factory=GraphConfig)
    membership: str = "any"
    jaccard_match: float = 0.5
    entropy_delta_threshold: float = 0.0
    printed_sign: bool = False

    def __post_init__(self):
        if self.window_len <= 0 or self.step <= 0:
            raise ValueError("window_len and step must be positive")
        if self.membership not in MEMBERSHIP_RULES:
            raise ValueError(f"membership must be one of {MEMBERSHIP_RULES}")
        if not 0.0 < self.jaccard_match <= 1.0:
            raise ValueError("jaccard_match must lie in (0, 1]")
        if self.entropy_delta_threshold < 0:
            raise ValueError("entropy_delta_threshold must be non-negative")
        if self.step > self.window_len:
            warnings.warn("step exceeds window_len; some events fall in no window",
                          stacklevel=2)


@dataclass(frozen=True)
class EntropyReading:
    window_start: float
    window_end: float
    Hg: Optional[float]
    islands: List[Island]
    n_events: int
    distribution: ClusterDistribution

    @property
    def flagged(self) -> bool:
        return self.Hg is None


@dataclass(frozen=True)
class StructuralChange:
    kind: str
    before: Tuple[int, ...]
    after: Tuple[int, ...]
    window_end: Optional[float] = None

    def __post_init__(self):
        if self.kind not in CHANGE_KINDS:
            raise ValueError(f"unknown change kind {self.kind!r}")
        nb, na = len(self.before), len(self.after)
        ok = {"appearance": nb == 0 and na >= 1,
              "disappearance": nb >= 1 and na == 0,
              "separation": nb == 1 and na >= 2,
              "unification": nb >= 2 and na == 1}[self.kind]
        if not ok:
            raise ValueError(f"{self.kind} with before={self.before} after={self.after}")


@dataclass(frozen=True)
class ChangeSign:
    window: int
    window_start: float
    window_end: float
    delta_hg: Optional[float]
    changes: List[StructuralChange]


def event_cluster_distribution(events, islands: Sequence[Island], membership: str = "any",
                               backend=None) -> ClusterDistribution:
    """Count, per island, the events that touch it (``any``) or contain it (``all``).

    One event may count toward several islands.
    """
    if membership not in MEMBERSHIP_RULES:
        raise ValueError(f"membership must be one of {MEMBERSHIP_RULES}")
    islands = list(islands)
    if not islands:
        return ClusterDistribution({}, {})
    groups = [sorted(g.items) for g in islands]
    packed = kernels.pack(events)
    hits = kernels.cluster_hits(packed, groups, require_all=membership == "all", backend=backend)
    freqs = {g.id: int(n) for g, n in zip(islands, hits) if n > 0}
    total = sum(freqs.values())
    probs = {gid: n / total for gid, n in freqs.items()}
    return ClusterDistribution(freqs, probs)


def gbe(dist: ClusterDistribution, printed_sign: bool = False) -> float:
    """Entropy in bits of the event-to-cluster distribution."""
    if dist.empty:
        raise UndefinedEntropy("undefined entropy: empty cluster distribution")
    return entropy_bits(dist.freqs.values(), printed_sign=printed_sign)


def _reading(window, cfg: GbeConfig) -> EntropyReading:
    start, end, events = window
    islands = extract_bases(events, KeyGraphConfig(graph=cfg.graph))
    dist = event_cluster_distribution(events, islands, cfg.membership)
    hg = None if dist.empty else gbe(dist, cfg.printed_sign)
    return EntropyReading(start, end, hg, islands, len(events), dist)


def gbe_series(stream, cfg: GbeConfig, jobs: int = 1) -> List[EntropyReading]:
    if not len(stream):
        return []
    events = list(stream)
    times = [e.t for e in events]
    windows = []
    for start in window_starts(times[0], times[-1], cfg.window_len, cfg.step):
        end = start + cfg.window_len
        lo, hi = index_range(times, start, end)
        windows.append((start, end, events[lo:hi]))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda w: _reading(w, cfg), windows))
    return [_reading(w, cfg) for w in windows]


def jaccard(a: frozenset, b: frozenset) -> float:
    union = len(a | b)
    return len(a & b) / union if union else 1.0


def diff_clusters(prev: Sequence[Island], nxt: Sequence[Island], tau: float = 0.5,
                  window_end=None) -> List[StructuralChange]:
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must lie in (0, 1]")
    matches = [(p, n) for p in prev for n in nxt if jaccard(p.items, n.items) >= tau]
    out = []
    for n in nxt:
        if not any(m[1] is n for m in matches):
            out.append(StructuralChange("appearance", (), (n.id,), window_end))
    for p in prev:
        hits = [m[1].id for m in matches if m[0] is p]
        if not hits:
            out.append(StructuralChange("disappearance", (p.id,), (), window_end))
        elif len(hits) >= 2:
            out.append(StructuralChange("separation", (p.id,), tuple(sorted(hits)), window_end))
    for n in nxt:
        hits = [m[0].id for m in matches if m[1] is n]
        if len(hits) >= 2:
            out.append(StructuralChange("unification", tuple(sorted(hits)), (n.id,), window_end))
    out.sort(key=lambda c: (CHANGE_KINDS.index(c.kind), c.before, c.after))
    return out


def change_signs(series: Sequence[EntropyReading], cfg: GbeConfig) -> List[ChangeSign]:
    """Consecutive-window transitions with a structural change or a large entropy jump.

    The entropy test only applies when ``entropy_delta_threshold > 0``.
    """
    signs = []
    for k in range(1, len(series)):
        prev, cur = series[k - 1], series[k]
        delta = None
        if prev.Hg is not None and cur.Hg is not None:
            delta = cur.Hg - prev.Hg
        changes = diff_clusters(prev.islands, cur.islands, cfg.jaccard_match, cur.window_end)
        jump = (cfg.entropy_delta_threshold > 0 and delta is not None
                and abs(delta) >= cfg.entropy_delta_threshold)
        if changes or jump:
            signs.append(ChangeSign(k, cur.window_start, cur.window_end, delta, changes))
    return signs
