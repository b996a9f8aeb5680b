"""Operation counters, scratch-allocation tracking and recursion split log.

The kernels add to a shared ``int64`` counter array, so counting costs one
add per row operation.  Everything here is process-global and meant for
tests and diagnostics.
"""

from __future__ import annotations

import weakref
from contextlib import contextmanager

import numpy as np

ROW_ADD = 0
TABLE_ADD = 1
ROW_SWAP = 2
COL_SWAP = 3
_NAMES = ("row_add", "table_add", "row_swap", "col_swap")

stats = np.zeros(len(_NAMES), dtype=np.int64)


class _AllocTracker:
    def __init__(self):
        self.live = {}
        self.peak = {}
        self.enabled = False

    def reset(self):
        self.live.clear()
        self.peak.clear()

    def _release(self, tag, nbytes):
        self.live[tag] = self.live.get(tag, 0) - nbytes

    def track(self, arr, tag):
        if not self.enabled:
            return arr
        n = int(arr.nbytes)
        cur = self.live.get(tag, 0) + n
        self.live[tag] = cur
        self.peak[tag] = max(self.peak.get(tag, 0), cur)
        weakref.finalize(arr, self._release, tag, n)
        return arr

    def peak_bytes(self, exclude=()):
        return sum(v for k, v in self.peak.items() if k not in exclude)


alloc = _AllocTracker()
splits: list[tuple[int, int, int]] = []
events: list[tuple[str, dict]] = []
_record_splits = [False]


def scratch(shape, dtype=np.uint64, tag="scratch"):
    """Allocate a zeroed scratch array and register it with the tracker."""
    return alloc.track(np.zeros(shape, dtype=dtype), tag)


def record_split(col_start, ncols, n0):
    if _record_splits[0]:
        splits.append((col_start, ncols, n0))


def record_event(name, **data):
    """Keep the last few notable decisions, e.g. where the hybrid switched."""
    events.append((name, data))
    del events[:-32]


def reset():
    stats[:] = 0
    alloc.reset()
    splits.clear()
    events.clear()


def snapshot():
    """Counter values as a dict."""
    return {name: int(stats[i]) for i, name in enumerate(_NAMES)}


@contextmanager
def recording(allocations=True, split_points=True):
    """Reset all instruments and enable the optional trackers for the block."""
    reset()
    prev = alloc.enabled, _record_splits[0]
    alloc.enabled = allocations
    _record_splits[0] = split_points
    try:
        yield
    finally:
        alloc.enabled, _record_splits[0] = prev
