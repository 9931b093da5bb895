"""Definition-level wildcard matching by direct window comparison.

This is the reference implementation everything hash-based is checked
against: no hashing, no incremental state, just the match definition
applied to every window (a position matches when the symbols are equal
or either side is '?').  Vectorized with numpy so oracle replays of long
update streams stay cheap.
"""

from __future__ import annotations

import numpy as np

from .hashing import WILDCARD_BYTE, as_bytes


def occurrence_positions(pattern, text) -> list[int]:
    """All 1-based window starts where the pattern matches the text."""
    p = np.frombuffer(as_bytes(pattern), dtype=np.uint8)
    t = np.frombuffer(as_bytes(text), dtype=np.uint8)
    m, n = len(p), len(t)
    if m == 0 or m > n:
        return []
    windows = np.lib.stride_tricks.sliding_window_view(t, m)
    ok = (windows == p) | (windows == WILDCARD_BYTE) | (p == WILDCARD_BYTE)
    return [int(i) + 1 for i in np.nonzero(ok.all(axis=1))[0]]


def count_occurrences(pattern, text) -> int:
    """Number of matching windows."""
    return len(occurrence_positions(pattern, text))


def matches(pattern, text) -> bool:
    """Whether the pattern occurs anywhere in the text."""
    p = np.frombuffer(as_bytes(pattern), dtype=np.uint8)
    t = np.frombuffer(as_bytes(text), dtype=np.uint8)
    m, n = len(p), len(t)
    if m == 0 or m > n:
        return False
    windows = np.lib.stride_tricks.sliding_window_view(t, m)
    ok = (windows == p) | (windows == WILDCARD_BYTE) | (p == WILDCARD_BYTE)
    return bool(ok.all(axis=1).any())
