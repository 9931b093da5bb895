"""Dynamic range-pair counting over a block-decomposed sequence.

``query(l, r, a, b, d)`` counts positions ``i`` in ``[l, r-d-1]`` with
``X_i == a`` and ``X_{i+d+1} == b``.  Short-distance pairs (gap < block
size) are kept exact in per-block Near tables on every update; across
blocks, Pair tables hold counts against a lazily synchronized snapshot,
built per ordered block pair by multiplying per-symbol coefficient
polynomials, and queries repair staleness from the per-block pending
sets.  A block is resynchronized once its pending set reaches the
rebuild threshold, keeping every pending set strictly below it between
operations.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from . import _kernels

#: refuse table allocations beyond this many int64 entries (~0.5 GB)
_TABLE_ENTRY_CAP = 64_000_000


class RangePairStructure:
    """Exact pair counting under substitutions, lazy across blocks."""

    def __init__(self, X, block_size: int, rebuild_threshold: int,
                 alphabet_size: int | None = None):
        X = np.asarray(X, dtype=np.int64).copy()
        n = len(X)
        if n < 1:
            raise ValueError("sequence must be non-empty")
        # N < B is legal: one partial block, no cross-block Pair tables
        if not 1 <= rebuild_threshold <= block_size:
            raise ValueError(
                "need 1 <= rebuild_threshold <= block_size, got "
                f"delta={rebuild_threshold}, B={block_size}"
            )
        lo = int(X.min())
        hi = int(X.max())
        if lo < 0:
            raise ValueError("symbols must be nonnegative codes")
        S = alphabet_size if alphabet_size is not None else hi + 1
        if hi >= S:
            raise ValueError(f"symbol {hi} outside the declared alphabet of size {S}")
        B = block_size
        M = (n + B - 1) // B
        entries = M * M * S * S * (2 * B - 1) + M * S * S * B
        if entries > _TABLE_ENTRY_CAP:
            raise ValueError(
                f"count tables would need {entries} entries; "
                "reduce the alphabet or raise the block size"
            )
        self.n = n
        self.B = B
        self.M = M
        self.S = S
        self.delta = rebuild_threshold
        self.X = X
        self.applied = X.copy()
        self.near = np.zeros((M, S, S, B), dtype=np.int64)
        self.pair = np.zeros((M, M, S, S, 2 * B - 1), dtype=np.int64)
        self.pend = np.zeros((M, rebuild_threshold), dtype=np.int64)
        self.pend_len = np.zeros(M, dtype=np.int64)
        _kernels.rp_build_near(self.X, B, self.near)
        for i in range(M):
            for j in range(i + 1, M):
                _kernels.rp_pair_slice(self.applied, B, i, j, self.pair[i, j])
        self.counters = Counter()

    # -- operations ----------------------------------------------------------

    def update(self, pos: int, sym: int) -> None:
        """Substitute the symbol at 1-based ``pos``."""
        if not 1 <= pos <= self.n:
            raise IndexError(f"position {pos} outside [1, {self.n}]")
        c = int(sym)
        if not 0 <= c < self.S:
            raise ValueError(f"unknown symbol code {c} (alphabet size {self.S})")
        touches, rebuilt = _kernels.rp_update(
            self.X, self.applied, self.near, self.pair,
            self.pend, self.pend_len, self.B, self.delta, pos - 1, np.int64(c),
        )
        self.counters["updates"] += 1
        self.counters["near_touches"] += int(touches)
        self.counters["last_near_touches"] = int(touches)
        self.counters["rebuilds"] += int(rebuilt)

    def query(self, l: int, r: int, a: int, b: int, d: int) -> int:
        """Count of i in [l, r-d-1] with X_i == a and X_{i+d+1} == b."""
        if not 1 <= l <= r <= self.n:
            raise ValueError(f"range [{l}, {r}] invalid for length {self.n}")
        if d < 0:
            raise ValueError("gap d must be nonnegative")
        self.counters["queries"] += 1
        a, b = int(a), int(b)
        if not (0 <= a < self.S and 0 <= b < self.S):
            return 0
        return int(
            _kernels.rp_query(
                self.X, self.applied, self.near, self.pair,
                self.pend, self.pend_len, self.B,
                l - 1, r - d - 2, a, b, d,
            )
        )

    # -- introspection (tests, benchmarks) ------------------------------------

    def pending_sizes(self) -> list[int]:
        return [int(x) for x in self.pend_len]

    def rebuild_all(self) -> None:
        """Force-synchronize every block (Pair tables equal a fresh build)."""
        for blk in range(self.M):
            _kernels.rp_rebuild_block(
                self.X, self.applied, self.pair, self.pend, self.pend_len, self.B, blk
            )
