"""KeyGraph: bases (islands), columns and roofs over a co-occurrence graph.

Phase 1 takes the connected components of the top co-occurrence graph as
islands.  Phase 2 measures each word's co-occurrence mass with every island
(a column).  Phase 3 scores words by how strongly they touch islands other
than their own and keeps the top scorers as roofs.  Roofs that are already
black nodes are keywords; the rest are red relay nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import kernels
from .cooccur import (
    CooccurrenceGraph,
    GraphConfig,
    build_graph,
    connected_components,
    item_frequencies,
)


@dataclass(frozen=True)
class Island:
    id: int
    items: frozenset

    def __post_init__(self):
        if not self.items:
            raise ValueError("island must not be empty")


@dataclass(frozen=True)
class Column:
    word: str
    island: int
    strength: float


@dataclass(frozen=True)
class KeyGraphConfig:
    graph: GraphConfig = field(default_factory=GraphConfig)
    top_roofs: int = 12
    columns_per_roof: int = 2

    def __post_init__(self):
        if self.top_roofs < 1:
            raise ValueError("top_roofs must be >= 1")
        if self.columns_per_roof < 1:
            raise ValueError("columns_per_roof must be >= 1")


@dataclass(frozen=True)
class KeyGraphMap:
    black_nodes: frozenset
    red_nodes: frozenset
    keyword_nodes: frozenset
    solid_edges: Dict[Tuple[str, str], int]
    dotted_edges: List[Column]
    islands: List[Island]
    roofs: List[str] = field(default_factory=list)
    key_scores: Dict[str, float] = field(default_factory=dict)
    frequencies: Dict[str, int] = field(default_factory=dict)

    def check(self) -> None:
        """Raise ``AssertionError`` if the node/edge classes are inconsistent."""
        assert not (self.red_nodes & self.black_nodes)
        assert self.keyword_nodes <= (self.black_nodes | self.red_nodes)
        roofs = self.red_nodes | self.keyword_nodes
        assert all(c.word in roofs for c in self.dotted_edges)
        home = {item: g.id for g in self.islands for item in g.items}
        for a, b in self.solid_edges:
            assert a in home and home[a] == home.get(b)
        seen = set()
        for g in self.islands:
            assert not (g.items & seen)
            seen |= g.items


def _islands_from_graph(graph: CooccurrenceGraph) -> List[Island]:
    return [Island(i, comp) for i, comp in enumerate(connected_components(graph), start=1)]


def extract_bases(stream, cfg: Optional[KeyGraphConfig] = None) -> List[Island]:
    cfg = cfg or KeyGraphConfig()
    return _islands_from_graph(build_graph(stream, cfg.graph))


def based(w: str, g: Island, stream) -> int:
    """Co-occurrence mass of ``w`` with the members of ``g`` other than ``w``."""
    total = 0
    for e in stream:
        cw = e.items.get(w, 0)
        if not cw:
            continue
        rest = sum(e.items.get(x, 0) for x in g.items if x != w)
        total += min(cw, rest)
    return total


def key_from_columns(columns: List[Tuple[float, float]]) -> float:
    """Combine ``(based, neighbors)`` pairs into a key score in [0, 1].

    Pairs with zero neighbor mass are skipped.
    """
    miss = 1.0
    for mass, neighbors in columns:
        if neighbors <= 0:
            continue
        ratio = min(max(mass / neighbors, 0.0), 1.0)
        miss *= 1.0 - ratio
    return 1.0 - miss


class ColumnTable:
    """All columns of a stream against a fixed island list, computed once."""

    def __init__(self, stream, islands: List[Island], backend=None):
        self.islands = list(islands)
        self.packed = kernels.pack(stream)
        groups = [sorted(g.items) for g in self.islands]
        self.mass = kernels.column_mass(self.packed, groups, backend=backend)
        self.neighbors = self.mass.sum(axis=0)
        self.home = {item: g.id for g in self.islands for item in g.items}

    def based(self, w: str, island_pos: int) -> int:
        i = self.packed.index.get(w)
        return 0 if i is None else int(self.mass[i, island_pos])

    def columns_of(self, w: str) -> List[Tuple[int, int, int]]:
        """``(island id, based, neighbors)`` for islands other than w's own."""
        own = self.home.get(w)
        return [(g.id, self.based(w, pos), int(self.neighbors[pos]))
                for pos, g in enumerate(self.islands) if g.id != own]

    def key(self, w: str) -> float:
        return key_from_columns([(m, n) for _, m, n in self.columns_of(w)])

    def scores(self) -> Dict[str, float]:
        return {w: self.key(w) for w in self.packed.vocab}


def key_score(w: str, islands: List[Island], stream) -> float:
    return ColumnTable(stream, islands).key(w)


def extract_roofs(stream, islands: List[Island], cfg: Optional[KeyGraphConfig] = None,
                  table: Optional[ColumnTable] = None):
    """Return ``(roofs, columns)``: top key-score items and their dotted edges."""
    cfg = cfg or KeyGraphConfig()
    if not islands:
        return [], []
    table = table or ColumnTable(stream, islands)
    scores = table.scores()
    ranked = sorted((w for w, s in scores.items() if s > 0), key=lambda w: (-scores[w], w))
    roofs = ranked[:cfg.top_roofs]
    columns = []
    for w in roofs:
        strong = sorted(((m, gid) for gid, m, _ in table.columns_of(w) if m > 0),
                        key=lambda x: (-x[0], x[1]))
        columns.extend(Column(w, gid, float(m)) for m, gid in strong[:cfg.columns_per_roof])
    return roofs, columns


def assemble_map(stream, cfg: Optional[KeyGraphConfig] = None) -> KeyGraphMap:
    cfg = cfg or KeyGraphConfig()
    graph = build_graph(stream, cfg.graph)
    islands = _islands_from_graph(graph)
    if islands:
        table = ColumnTable(stream, islands)
        roofs, columns = extract_roofs(stream, islands, cfg, table=table)
        scores = table.scores()
    else:
        roofs, columns, scores = [], [], {}
    black = frozenset(graph.nodes)
    roof_set = frozenset(roofs)
    freq = item_frequencies(stream)
    return KeyGraphMap(
        black_nodes=black,
        red_nodes=roof_set - black,
        keyword_nodes=roof_set & black,
        solid_edges=dict(graph.edges),
        dotted_edges=columns,
        islands=islands,
        roofs=roofs,
        key_scores={w: scores[w] for w in roofs},
        frequencies={w: freq[w] for w in sorted(black | roof_set)},
    )


def bridges(kmap: KeyGraphMap) -> List[Tuple[int, int, str]]:
    """``(island, island, via)`` for every roof with dotted edges to two islands."""
    reach: Dict[str, set] = {}
    for c in kmap.dotted_edges:
        reach.setdefault(c.word, set()).add(c.island)
    out = []
    for via, ids in reach.items():
        for a, b in combinations(sorted(ids), 2):
            out.append((a, b, via))
    return sorted(out)
