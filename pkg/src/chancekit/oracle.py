"""Brute-force recomputation of counts, distributions and entropies.

Nothing here touches the kernels; everything is plain enumeration over the
events so it can be diffed against the fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional

import numpy as np

from . import kernels
from .diversity import event_cluster_distribution, gbe
from .keygraph import ColumnTable, KeyGraphConfig, extract_bases

FAULTS = ("cooccur", "distribution", "entropy", "columns")


def naive_cooccurrence(events) -> Dict[tuple, int]:
    table: Dict[tuple, int] = {}
    for e in events:
        for a, b in combinations(sorted(e.items), 2):
            table[a, b] = table.get((a, b), 0) + min(e.items[a], e.items[b])
    return table


def naive_based(events, w: str, island_items) -> int:
    total = 0
    for e in events:
        if w in e.items:
            rest = 0
            for x in island_items:
                if x != w and x in e.items:
                    rest += e.items[x]
            total += min(e.items[w], rest)
    return total


def naive_cluster_counts(events, islands, membership: str = "any") -> Dict[int, int]:
    freqs = {}
    for g in islands:
        n = 0
        for e in events:
            present = set(e.items) & set(g.items)
            if (membership == "any" and present) or (membership == "all" and present == set(g.items)):
                n += 1
        if n:
            freqs[g.id] = n
    return freqs


def naive_distribution(events, islands, membership: str = "any") -> Dict[int, Fraction]:
    freqs = naive_cluster_counts(events, islands, membership)
    total = sum(freqs.values())
    return {gid: Fraction(n, total) for gid, n in freqs.items()}


def naive_entropy(freqs) -> float:
    """``log2 N - (1/N) sum f log2 f`` -- algebraically ``-sum p log2 p``."""
    freqs = [f for f in freqs if f > 0]
    total = sum(freqs)
    return math.log2(total) - sum(f * math.log2(f) for f in freqs) / total


@dataclass
class OracleReport:
    checks: List[tuple] = field(default_factory=list)  # (name, passed, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    def lines(self) -> List[str]:
        return [f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else "")
                for name, ok, detail in self.checks]


def verify(stream, what: str = "all", cfg: Optional[KeyGraphConfig] = None,
           membership: str = "any", fault: Optional[str] = None, tol: float = 1e-9) -> OracleReport:
    """Diff the fast path against enumeration.

    ``what`` is one of ``cooccur``, ``distribution``, ``entropy`` or ``all``.
    ``fault`` deliberately corrupts one fast-path result (test seam).
    """
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    cfg = cfg or KeyGraphConfig()
    events = list(stream)
    report = OracleReport()
    if not events:
        report.add("empty input", True, "vacuous")
        return report
    want = {"cooccur", "distribution", "entropy"} if what == "all" else {what}

    if "cooccur" in want:
        packed = kernels.pack(events)
        fast = kernels.pair_weights(packed, packed.vocab).copy()
        if fault == "cooccur":
            fast[0, -1] += 1
        slow = naive_cooccurrence(events)
        vocab = packed.vocab
        bad = []
        for i, j in zip(*np.triu_indices(len(vocab), k=1)):
            if int(fast[i, j]) != slow.get((vocab[i], vocab[j]), 0):
                bad.append((vocab[i], vocab[j]))
        report.add("cooccurrence counts", not bad, f"{len(bad)} mismatched pairs" if bad else
                   f"{len(vocab) * (len(vocab) - 1) // 2} pairs exact")

    islands = extract_bases(events, cfg)
    if "cooccur" in want and islands:
        table = ColumnTable(events, islands)
        mass = table.mass.copy()
        if fault == "columns":
            mass[0, 0] += 1
        bad = [(w, g.id) for w in table.packed.vocab for pos, g in enumerate(islands)
               if int(mass[table.packed.index[w], pos]) != naive_based(events, w, g.items)]
        report.add("column masses", not bad, f"{len(bad)} mismatched" if bad else "exact")

    if want & {"distribution", "entropy"}:
        dist = event_cluster_distribution(events, islands, membership)
        slow = naive_distribution(events, islands, membership)
        probs = dict(dist.probs)
        if fault == "distribution" and probs:
            k = min(probs)
            probs[k] = probs[k] + 1e-3
        if "distribution" in want:
            same = set(probs) == set(slow) and all(probs[k] == float(slow[k]) for k in slow)
            same = same and dist.freqs == naive_cluster_counts(events, islands, membership)
            report.add("cluster distribution", same, f"{len(slow)} clusters")
        if "entropy" in want:
            if dist.empty:
                report.add("entropy", not slow, "undefined on both paths")
            else:
                h_fast = gbe(dist)
                if fault == "entropy":
                    h_fast += 1e-6
                h_slow = naive_entropy(naive_cluster_counts(events, islands, membership).values())
                report.add("entropy", abs(h_fast - h_slow) <= tol,
                           f"fast={h_fast!r} oracle={h_slow!r}")
    return report
