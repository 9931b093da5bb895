"""Matcher for a pattern whose wildcard positions are fixed for its lifetime.

Keeps one masked hash per text window -- the polynomial hash restricted
to the pattern's solid coordinates -- together with a multiset of those
values.  A pattern substitution shifts a single coefficient of the
pattern hash; a text substitution at position j touches exactly the
windows that align j under a solid coordinate (at most one per solid
position).  A query is a multiset membership probe, so a true match is
never missed: the matching window's masked hash equals the pattern hash
by construction.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from . import _kernels
from .hashing import (
    MERSENNE61,
    PLACEHOLDER_BYTE,
    WILDCARD_BYTE,
    as_bytes,
    choose_context,
)
from .text_index import TextIndex
from .verdict import MatchVerdict


class SparseMatcher:
    """Masked window-hash matching with O(1)-coefficient delta updates."""

    def __init__(self, text, pattern, wildcard_set=None, seed: int = 0):
        text = as_bytes(text)
        pattern = as_bytes(pattern)
        n, m = len(text), len(pattern)
        if m == 0:
            raise ValueError("pattern must be non-empty")
        if m > n:
            raise ValueError(f"pattern length {m} exceeds text length {n}")
        if WILDCARD_BYTE in text:
            raise ValueError("the fixed-wildcard regime forbids '?' in the text")
        if PLACEHOLDER_BYTE in text or PLACEHOLDER_BYTE in pattern:
            raise ValueError("'#' is reserved")
        derived = {i for i, c in enumerate(pattern, start=1) if c == WILDCARD_BYTE}
        if wildcard_set is not None and set(wildcard_set) != derived:
            raise ValueError("wildcard set inconsistent with the pattern's '?' positions")
        self.W = frozenset(derived)
        self.C = [i for i in range(1, m + 1) if i not in self.W]
        self.omega = len(self.C)
        self.n = n
        self.m = m
        self.ctx = choose_context(max(n, 1), seed)
        self.text = bytearray(text)
        self.pattern = bytearray(pattern)
        self._codes = self.ctx.codes_of(text).copy()
        # exponent of coordinate q: solid symbols right of q in the pattern
        self._exp = {q: self.omega - 1 - t for t, q in enumerate(self.C)}
        cpos = np.array([q - 1 for q in self.C], dtype=np.int64)
        cexp = np.array([self._exp[q] for q in self.C], dtype=np.int64)
        self.A = np.zeros(n - m + 1, dtype=np.int64)
        if self.omega:
            _kernels.sparse_vector_build(self._codes, cpos, cexp, self.ctx.powers, n, m, self.A)
        self.multiset = Counter(int(h) for h in self.A)
        self.pattern_hash = self._masked_pattern_hash()
        self.counters = Counter()
        self.last_recomputed: list[int] = []

    def _masked_pattern_hash(self) -> int:
        h = 0
        for q in self.C:
            h = (h + self.ctx.code_of(self.pattern[q - 1]) * self.ctx.power(self._exp[q])) % MERSENNE61
        return h

    # -- updates ---------------------------------------------------------------

    def substitute_pattern(self, i: int, sym) -> None:
        """Replace a solid pattern symbol; wildcard slots are immutable."""
        if not 1 <= i <= self.m:
            raise IndexError(f"pattern position {i} outside [1, {self.m}]")
        if i in self.W:
            raise ValueError(f"pattern position {i} is a fixed wildcard slot")
        c = TextIndex._sym(sym)
        if c == WILDCARD_BYTE or c == PLACEHOLDER_BYTE:
            raise ValueError("cannot write '?' or '#' into a solid slot")
        old = self.pattern[i - 1]
        if c == old:
            return
        delta = self.ctx.code_of(c) - self.ctx.code_of(old)
        self.pattern_hash = (self.pattern_hash + delta * self.ctx.power(self._exp[i])) % MERSENNE61
        self.pattern[i - 1] = c
        self.counters["pattern_updates"] += 1

    def substitute_text(self, j: int, sym) -> None:
        """Replace a text symbol, refreshing only the aligned windows."""
        if not 1 <= j <= self.n:
            raise IndexError(f"position {j} outside [1, {self.n}]")
        c = TextIndex._sym(sym)
        if c == WILDCARD_BYTE or c == PLACEHOLDER_BYTE:
            raise ValueError("cannot write '?' or '#' into the text in this regime")
        old = self.text[j - 1]
        self.counters["text_updates"] += 1
        if c == old:
            self.last_recomputed = []
            return
        delta = self.ctx.code_of(c) - self.ctx.code_of(old)
        total = self.n - self.m + 1
        touched = []
        for q in self.C:
            s = j - q + 1
            if 1 <= s <= total:
                h_old = int(self.A[s - 1])
                h_new = (h_old + delta * self.ctx.power(self._exp[q])) % MERSENNE61
                self.A[s - 1] = h_new
                cnt = self.multiset[h_old] - 1
                if cnt:
                    self.multiset[h_old] = cnt
                else:
                    del self.multiset[h_old]
                self.multiset[h_new] += 1
                touched.append(s)
        self.text[j - 1] = c
        self._codes[j - 1] = self.ctx.code_of(c)
        self.last_recomputed = touched
        self.counters["windows_recomputed"] += len(touched)

    # -- queries ---------------------------------------------------------------

    def query(self) -> MatchVerdict:
        """Multiset membership of the pattern hash; O(log n)-class probe."""
        self.counters["queries"] += 1
        if self.multiset.get(self.pattern_hash, 0) == 0:
            return MatchVerdict(False)
        s = int(np.nonzero(self.A == self.pattern_hash)[0][0]) + 1
        return MatchVerdict(True, witness=s)
