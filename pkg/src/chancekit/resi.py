"""Regional entropy of epicenter clusters (RESI) and a rise-then-flat precursor test.

Epicenters falling in a time window are binned to a regular lat/lon grid;
occupied cells that touch (4- or 8-neighborhood) form a cluster, and the
entropy of the event share per cluster is the reading for that window.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .entropy import UndefinedEntropy, entropy_bits
from .ingest import Event, EventStream, SeismicEvent
from .timeline import window_starts

Cell = Tuple[int, int]


class PrecursorError(ValueError):
    pass


@dataclass(frozen=True)
class RegionSpec:
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float
    cell_deg: float

    def __post_init__(self):
        if not (self.lat_min < self.lat_max and self.lon_min < self.lon_max):
            raise ValueError("region needs min < max on both axes")
        if not self.cell_deg > 0:
            raise ValueError("cell_deg must be positive")

    @property
    def n_rows(self) -> int:
        return max(1, math.ceil((self.lat_max - self.lat_min) / self.cell_deg))

    @property
    def n_cols(self) -> int:
        return max(1, math.ceil((self.lon_max - self.lon_min) / self.cell_deg))

    def cell_of(self, lat: float, lon: float) -> Optional[Cell]:
        """Grid cell of a point, or ``None`` outside the region.

        Points on the max edge belong to the last row/column.
        """
        if not (self.lat_min <= lat <= self.lat_max and self.lon_min <= lon <= self.lon_max):
            return None
        row = min(int(math.floor((lat - self.lat_min) / self.cell_deg)), self.n_rows - 1)
        col = min(int(math.floor((lon - self.lon_min) / self.cell_deg)), self.n_cols - 1)
        return row, col


def cell_id(cell: Cell) -> str:
    return f"r{cell[0]}c{cell[1]}"


@dataclass(frozen=True)
class CellCounts:
    counts: Dict[Cell, int]
    dropped: int = 0


@dataclass(frozen=True)
class EpicenterCluster:
    id: int
    cells: frozenset
    n_events: int


@dataclass(frozen=True)
class ResiReading:
    t: float
    H: Optional[float]
    n_clusters: int
    n_events: int
    flagged: bool
    clusters: List[EpicenterCluster] = field(default_factory=list, compare=False)


@dataclass(frozen=True)
class PrecursorFlag:
    t: float
    rise_slope: float
    flat_slope: float
    index: int = -1  # position in the input series


@dataclass(frozen=True)
class ResiConfig:
    region: RegionSpec
    window: float
    step: float
    neighborhood: int = 8
    min_events_per_window: int = 1
    rise_lookback: int = 3
    flat_lookback: int = 2
    theta_up: float = 0.3
    theta_flat: float = 0.05
    printed_sign: bool = False

    def __post_init__(self):
        if self.window <= 0 or self.step <= 0:
            raise ValueError("window and step must be positive")
        if self.neighborhood not in (4, 8):
            raise ValueError("neighborhood must be 4 or 8")
        if self.rise_lookback < 2 or self.flat_lookback < 2:
            raise ValueError("rise_lookback and flat_lookback must be >= 2")
        if not self.theta_up > self.theta_flat >= 0:
            raise ValueError("need theta_up > theta_flat >= 0")
        if self.min_events_per_window < 1:
            raise ValueError("min_events_per_window must be >= 1")


def grid_events(catalog: Iterable[SeismicEvent], region: RegionSpec,
                window: Optional[Tuple[float, float]] = None) -> CellCounts:
    """Bin events in ``[start, end)`` to grid cells; out-of-region events are counted as dropped."""
    counts: Dict[Cell, int] = {}
    dropped = 0
    for e in catalog:
        if window is not None and not window[0] <= e.t < window[1]:
            continue
        cell = region.cell_of(e.lat, e.lon)
        if cell is None:
            dropped += 1
            continue
        counts[cell] = counts.get(cell, 0) + 1
    return CellCounts(counts, dropped)


_NEIGHBORS = {
    4: [(-1, 0), (1, 0), (0, -1), (0, 1)],
    8: [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)],
}


def cluster_epicenters(cells, neighborhood: int = 8) -> List[EpicenterCluster]:
    """Connected components of occupied cells, ordered by their smallest cell."""
    if isinstance(cells, CellCounts):
        cells = cells.counts
    occupied = {c: n for c, n in cells.items() if n > 0}
    steps = _NEIGHBORS[neighborhood]
    seen = set()
    comps = []
    for start in sorted(occupied):
        if start in seen:
            continue
        seen.add(start)
        stack, comp = [start], []
        while stack:
            r, c = stack.pop()
            comp.append((r, c))
            for dr, dc in steps:
                nb = (r + dr, c + dc)
                if nb in occupied and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(comp)
    return [EpicenterCluster(i, frozenset(comp), sum(occupied[c] for c in comp))
            for i, comp in enumerate(comps, start=1)]


def resi(clusters: Sequence[EpicenterCluster], printed_sign: bool = False) -> float:
    """Entropy in bits of the share of events per epicenter cluster."""
    if sum(c.n_events for c in clusters) <= 0:
        raise UndefinedEntropy("undefined entropy: no events in region")
    return entropy_bits((c.n_events for c in clusters), printed_sign=printed_sign)


def _reading(catalog, cfg: ResiConfig, end) -> ResiReading:
    counts = grid_events(catalog, cfg.region, (end - cfg.window, end))
    clusters = cluster_epicenters(counts, cfg.neighborhood)
    n = sum(c.n_events for c in clusters)
    h = resi(clusters, cfg.printed_sign) if n > 0 else None
    return ResiReading(end, h, len(clusters), n, n < cfg.min_events_per_window, clusters)


def resi_series(catalog: Sequence[SeismicEvent], cfg: ResiConfig, jobs: int = 1) -> List[ResiReading]:
    """Readings for windows ``[t - W, t)`` with ``t`` stepping from ``t_first + W``."""
    catalog = sorted(catalog, key=lambda e: e.t)
    if not catalog:
        return []
    ends = [s + cfg.window
            for s in window_starts(catalog[0].t, catalog[-1].t, cfg.window, cfg.step)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda t: _reading(catalog, cfg, t), ends))
    return [_reading(catalog, cfg, t) for t in ends]


def ls_slope(values: Sequence[float]) -> float:
    """Least-squares slope of ``values`` against their index."""
    n = len(values)
    xbar = (n - 1) / 2
    ybar = sum(values) / n
    num = sum((i - xbar) * (y - ybar) for i, y in enumerate(values))
    den = sum((i - xbar) ** 2 for i in range(n))
    return num / den


def detect_precursor(series: Sequence[ResiReading], cfg: ResiConfig) -> List[PrecursorFlag]:
    """Flag saturation: a rising stretch followed by a flat one.

    Flagged (sparse) readings are skipped.  At usable index ``k`` the rise
    window is ``(k-L1-L2, k-L2]`` and the flat window ``(k-L2, k]``.  Flags
    whose lookbacks overlap are merged into the earliest.
    """
    pos = [i for i, r in enumerate(series) if not r.flagged and r.H is not None]
    usable = [series[i] for i in pos]
    L1, L2 = cfg.rise_lookback, cfg.flat_lookback
    if len(usable) < L1 + L2:
        raise PrecursorError(f"series too short: {len(usable)} usable readings < {L1 + L2}")
    hs = [r.H for r in usable]
    flags = []
    last_k = None
    for k in range(L1 + L2 - 1, len(usable)):
        rise = ls_slope(hs[k - L1 - L2 + 1:k - L2 + 1])
        flat = ls_slope(hs[k - L2 + 1:k + 1])
        if rise >= cfg.theta_up and abs(flat) <= cfg.theta_flat:
            if last_k is None or k - last_k >= L1 + L2:
                flags.append(PrecursorFlag(usable[k].t, rise, flat, pos[k]))
            last_k = k
    return flags


def catalog_to_stream(catalog: Iterable[SeismicEvent], region: RegionSpec) -> EventStream:
    """One single-item event per in-region quake, the item being its cell id."""
    events = []
    for e in catalog:
        cell = region.cell_of(e.lat, e.lon)
        if cell is not None:
            events.append(Event(e.t, {cell_id(cell): 1}))
    return EventStream.from_events(events)
