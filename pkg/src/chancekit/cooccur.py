"""Item frequencies, pairwise co-occurrence and the top-N/top-M graph.

Co-occurrence of two items in one event is the smaller of their two
multiplicities; for set-valued baskets that is simply "both present".
Every ranking breaks ties lexicographically on item id.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from . import kernels


@dataclass(frozen=True)
class GraphConfig:
    top_nodes: int = 30
    top_edges: Optional[int] = None  # None means top_nodes - 1

    def __post_init__(self):
        if self.top_nodes < 1:
            raise ValueError("top_nodes must be >= 1")
        if self.top_edges is not None and self.top_edges < 1:
            raise ValueError("top_edges must be >= 1")

    @property
    def edge_budget(self) -> int:
        if self.top_edges is None:
            return max(self.top_nodes - 1, 1)
        return self.top_edges


@dataclass(frozen=True)
class CooccurrenceGraph:
    nodes: Dict[str, int]
    edges: Dict[Tuple[str, str], int]

    def __post_init__(self):
        for (a, b), w in self.edges.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a!r}, {b!r}) leaves the node set")
            if w <= 0:
                raise ValueError("edge weights must be positive")

    def neighbors(self, item: str) -> List[str]:
        out = []
        for a, b in self.edges:
            if a == item:
                out.append(b)
            elif b == item:
                out.append(a)
        return sorted(out)


def item_frequencies(stream: Iterable) -> Counter:
    """Total multiplicity of every item over all events."""
    freq = Counter()
    for e in stream:
        freq.update(e.items)
    return freq


def cooccurrence(stream: Iterable, a: str, b: str) -> int:
    if a == b:
        raise ValueError("co-occurrence needs two distinct items")
    total = 0
    for e in stream:
        ca = e.items.get(a, 0)
        if ca:
            total += min(ca, e.items.get(b, 0))
    return total


def top_items(freq: Dict[str, int], n: int) -> List[str]:
    return sorted(freq, key=lambda item: (-freq[item], item))[:n]


def build_graph(stream, cfg: Optional[GraphConfig] = None,
                packed: Optional[kernels.PackedStream] = None) -> CooccurrenceGraph:
    cfg = cfg or GraphConfig()
    freq = item_frequencies(stream)
    nodes = sorted(top_items(freq, cfg.top_nodes))
    if len(nodes) < 2:
        return CooccurrenceGraph({n: freq[n] for n in nodes}, {})
    if packed is None:
        packed = kernels.pack(stream, vocab=nodes)
    weights = kernels.pair_weights(packed, nodes)
    candidates = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            w = int(weights[i, j])
            if w > 0:
                candidates.append((-w, nodes[i], nodes[j]))
    candidates.sort()
    edges = {(a, b): -negw for negw, a, b in candidates[:cfg.edge_budget]}
    return CooccurrenceGraph({n: freq[n] for n in nodes}, edges)


def connected_components(graph: CooccurrenceGraph) -> List[frozenset]:
    """Maximal connected node sets, ordered by their smallest member."""
    adj = {n: [] for n in graph.nodes}
    for a, b in graph.edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        seen.add(start)
        stack = [start]
        comp = []
        while stack:
            n = stack.pop()
            comp.append(n)
            for m in adj[n]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        comps.append(frozenset(comp))
    return comps
