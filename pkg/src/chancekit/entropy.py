"""Shannon entropy over cluster counts, shared by GBE and RESI."""

from __future__ import annotations

import math
from typing import Iterable


class UndefinedEntropy(ValueError):
    """The distribution has no mass."""


def entropy_bits(counts: Iterable[float], printed_sign: bool = False) -> float:
    """``-sum p log2 p`` over the normalized counts, with ``0 log 0 = 0``.

    ``printed_sign=True`` drops the leading minus (the result is then <= 0).
    """
    counts = [c for c in counts if c > 0]
    total = sum(counts)
    if total <= 0:
        raise UndefinedEntropy("undefined entropy: no events in any cluster")
    h = 0.0
    for c in counts:
        p = c / total
        h -= p * math.log2(p)
    if h == 0.0:
        h = 0.0  # avoid -0.0
    return -h if printed_sign else h
