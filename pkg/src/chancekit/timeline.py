"""Window grids over a timestamp span."""

from __future__ import annotations

from bisect import bisect_left
from typing import List, Sequence, Tuple


def window_starts(t_first, t_last, length, step) -> List:
    """Starts ``t_first + k*step`` of windows ``[start, start + length)``.

    A window is kept while its last step-slice begins inside the span, i.e.
    ``start + length - step <= t_last``.  With integer ticks and ``step=1``
    that is exactly the set of windows lying inside ``[t_first, t_last]``.
    The first window is always kept.
    """
    if length <= 0 or step <= 0:
        raise ValueError("window length and step must be positive")
    starts = [t_first]
    k = 1
    while True:
        s = t_first + k * step
        if s > t_last or s + length - step > t_last:
            break
        starts.append(s)
        k += 1
    return starts


def index_range(times: Sequence, start, end) -> Tuple[int, int]:
    """Index range of sorted ``times`` falling in ``[start, end)``."""
    return bisect_left(times, start), bisect_left(times, end)
