"""Counting kernels behind a single import point.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded.  Setting ``CHANCEKIT_PURE_PYTHON=1`` forces the fallback.
Both backends take the CSR arrays produced by :func:`pack`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _pykernels

if os.environ.get("CHANCEKIT_PURE_PYTHON", "") not in ("", "0"):
    _backend = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _backend
        BACKEND = "cython"
    except ImportError:
        _backend = _pykernels
        BACKEND = "python"


def backend_module(name: Optional[str] = None):
    """Return the kernel module for ``"cython"``/``"python"`` (default: active)."""
    if name is None:
        return _backend
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class PackedStream:
    """Events as CSR arrays over a sorted vocabulary."""

    vocab: tuple
    index: dict
    indptr: np.ndarray
    ids: np.ndarray
    counts: np.ndarray

    @property
    def n_events(self) -> int:
        return len(self.indptr) - 1


def pack(events: Iterable, vocab: Optional[Iterable[str]] = None) -> PackedStream:
    """Pack events; items outside an explicit ``vocab`` are dropped."""
    events = list(events)
    if vocab is None:
        vocab = sorted({item for e in events for item in e.items})
    vocab = tuple(vocab)
    index = {item: i for i, item in enumerate(vocab)}
    indptr = [0]
    ids = []
    counts = []
    for e in events:
        row = sorted((index[item], c) for item, c in e.items.items() if item in index)
        ids.extend(i for i, _ in row)
        counts.extend(c for _, c in row)
        indptr.append(len(ids))
    return PackedStream(
        vocab,
        index,
        np.asarray(indptr, dtype=np.int64),
        np.asarray(ids, dtype=np.int32),
        np.asarray(counts, dtype=np.int64),
    )


def _label_array(packed: PackedStream, groups) -> np.ndarray:
    label = np.full(len(packed.vocab), -1, dtype=np.int32)
    for g, members in enumerate(groups):
        for item in members:
            i = packed.index.get(item)
            if i is not None:
                label[i] = g
    return label


def pair_weights(packed: PackedStream, nodes, backend=None) -> np.ndarray:
    """Summed per-event min-multiplicity for every pair of ``nodes``."""
    nodes = list(nodes)
    node_of = _label_array(packed, [[n] for n in nodes])
    return backend_module(backend).pair_weights(
        packed.indptr, packed.ids, packed.counts, node_of, len(nodes))


def column_mass(packed: PackedStream, islands, backend=None) -> np.ndarray:
    """Matrix ``[word, island]`` of a word's co-occurrence mass with an island.

    The island members other than the word itself are pooled per event.
    """
    island_of = _label_array(packed, islands)
    return backend_module(backend).column_mass(
        packed.indptr, packed.ids, packed.counts, island_of, len(islands))


def cluster_hits(packed: PackedStream, islands, require_all=False, backend=None) -> np.ndarray:
    """Number of events touching (or containing, if ``require_all``) each island."""
    island_of = _label_array(packed, islands)
    sizes = np.asarray([len(g) for g in islands], dtype=np.int64)
    return backend_module(backend).cluster_hits(
        packed.indptr, packed.ids, island_of, sizes, bool(require_all))


def presence_counts(packed: PackedStream, lo: int = 0, hi: Optional[int] = None,
                    backend=None) -> np.ndarray:
    """Per-vocabulary-item number of events in ``[lo, hi)`` that contain it."""
    if hi is None:
        hi = packed.n_events
    return backend_module(backend).presence_counts(
        packed.indptr, packed.ids, len(packed.vocab), lo, hi)
