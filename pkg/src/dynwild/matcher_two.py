"""Matcher for patterns with at most two non-wildcard symbols.

The text is remapped onto a small code alphabet: rare symbols collapse
to 0, each frequent symbol gets a distinct nonzero code, and the text
wildcard '?' permanently holds code 1.  Occurrence existence and exact
counts then reduce to range-pair queries on the mapped text (plus the
wildcard-code variants), while endpoints that currently hold code 0 are
scanned directly through their occurrence sets.  Code assignment is
hysteretic: a symbol is promoted once its count exceeds tau and demoted
only after dropping to tau/2, so retagging work is paid for by at least
tau/2 intervening updates.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter

import numpy as np

from .hashing import PLACEHOLDER_BYTE, WILDCARD_BYTE, as_bytes, choose_context
from .range_pair import RangePairStructure
from .text_index import TextIndex
from .verdict import MatchVerdict

WILDCARD_CODE = 1


class SymbolMap:
    """Hysteretic symbol-to-code assignment onto {0 .. ceil(2n/tau)}."""

    def __init__(self, n: int, tau: int):
        self.tau = tau
        self.max_code = max(1, math.ceil(2 * n / tau))
        self.alphabet_size = self.max_code + 1
        self.theta: dict[int, int] = {WILDCARD_BYTE: WILDCARD_CODE}
        self.reverse: dict[int, int] = {}
        self.pool: list[int] = list(range(2, self.max_code + 1))
        heapq.heapify(self.pool)

    def code(self, sym: int) -> int:
        return self.theta.get(sym, 0)

    def promote(self, sym: int) -> int:
        code = heapq.heappop(self.pool)
        self.theta[sym] = code
        self.reverse[code] = sym
        return code

    def demote(self, sym: int) -> int:
        code = self.theta.pop(sym)
        del self.reverse[code]
        heapq.heappush(self.pool, code)
        return code


class TwoMatcher:
    """Existence and counting queries for <=2 concrete pattern symbols."""

    def __init__(self, text, pattern, tau: int | None = None,
                 block_size: int | None = None, rebuild_threshold: int | None = None,
                 seed: int = 0):
        text = as_bytes(text)
        n = len(text)
        if tau is None:
            tau = max(1, math.ceil(n ** 0.8))
        if block_size is None:
            block_size = min(max(1, n), max(1, math.ceil(n ** 0.8)))
        if rebuild_threshold is None:
            rebuild_threshold = min(block_size, max(1, math.ceil(n ** 0.6)))
        self.index = TextIndex(text, tau, choose_context(max(n, 1), seed))
        self.tau = tau
        self.map = SymbolMap(max(n, 1), tau)
        for c, lst in self.index.occ.items():
            if c != WILDCARD_BYTE and len(lst) > tau:
                self.map.promote(c)
        mapped = np.array([self.map.code(c) for c in text], dtype=np.int64)
        self.rp = (
            RangePairStructure(mapped, block_size, rebuild_threshold,
                               alphabet_size=self.map.alphabet_size)
            if n > 0 else None
        )
        self.m = 0
        self.C: dict[int, int] = {}
        self.counters = Counter()
        self._set_pattern(as_bytes(pattern))

    def _set_pattern(self, p: bytes) -> None:
        if not p:
            raise ValueError("pattern must be non-empty")
        if PLACEHOLDER_BYTE in p:
            raise ValueError("'#' is reserved and cannot appear in a pattern")
        C = {i: c for i, c in enumerate(p, start=1) if c != WILDCARD_BYTE}
        if len(C) > 2:
            raise ValueError("pattern may hold at most two non-wildcard symbols")
        self.m = len(p)
        self.C = C

    @property
    def n(self) -> int:
        return self.index.n

    # -- pattern updates (O(1) bookkeeping on C and m) -----------------------

    def substitute_pattern(self, i: int, sym) -> None:
        if not 1 <= i <= self.m:
            raise IndexError(f"pattern position {i} outside [1, {self.m}]")
        c = TextIndex._sym(sym)
        self._check_pattern_symbol(c, adding=i not in self.C)
        if c == WILDCARD_BYTE:
            self.C.pop(i, None)
        else:
            self.C[i] = c

    def insert_pattern(self, i: int, sym) -> None:
        if not 1 <= i <= self.m + 1:
            raise IndexError(f"insert position {i} outside [1, {self.m + 1}]")
        c = TextIndex._sym(sym)
        self._check_pattern_symbol(c, adding=True)
        self.C = {(p + 1 if p >= i else p): s for p, s in self.C.items()}
        if c != WILDCARD_BYTE:
            self.C[i] = c
        self.m += 1

    def delete_pattern(self, i: int) -> None:
        if not 1 <= i <= self.m:
            raise IndexError(f"pattern position {i} outside [1, {self.m}]")
        if self.m == 1:
            raise ValueError("pattern must stay non-empty")
        self.C.pop(i, None)
        self.C = {(p - 1 if p > i else p): s for p, s in self.C.items()}
        self.m -= 1

    def _check_pattern_symbol(self, c: int, adding: bool) -> None:
        if c == PLACEHOLDER_BYTE:
            raise ValueError("'#' is reserved and cannot appear in a pattern")
        if c != WILDCARD_BYTE and adding and len(self.C) >= 2:
            raise ValueError("operation would create a third non-wildcard symbol")

    # -- text updates ----------------------------------------------------------

    def substitute_text(self, i: int, sym) -> None:
        c_new = TextIndex._sym(sym)
        c_old = self.index.text[i - 1] if 1 <= i <= self.n else None
        self.index.substitute(i, c_new)
        self.counters["text_updates"] += 1
        if c_old != c_new:
            if (
                c_old != WILDCARD_BYTE
                and self.map.code(c_old) != 0
                and self.index.count(c_old) <= self.tau // 2
            ):
                self._demote(c_old)
            if (
                c_new != WILDCARD_BYTE
                and self.map.code(c_new) == 0
                and self.index.count(c_new) > self.tau
            ):
                self._promote(c_new)
        self.rp.update(i, self.map.code(c_new))
        self.counters["rp_updates"] += 1

    def _demote(self, sym: int) -> None:
        self.map.demote(sym)
        for pos in self.index.positions(sym):
            self.rp.update(pos, 0)
            self.counters["rp_updates"] += 1
        self.counters["demotions"] += 1

    def _promote(self, sym: int) -> None:
        if not self.map.pool:
            victim = next(
                (s for code, s in sorted(self.map.reverse.items())
                 if self.index.count(s) <= self.tau // 2),
                None,
            )
            if victim is None:
                raise RuntimeError("code pool exhausted with no demotable symbol")
            self._demote(victim)
        code = self.map.promote(sym)
        for pos in self.index.positions(sym):
            self.rp.update(pos, code)
            self.counters["rp_updates"] += 1
        self.counters["promotions"] += 1

    # -- queries ----------------------------------------------------------------

    def query(self) -> MatchVerdict:
        self.counters["queries"] += 1
        n, m = self.n, self.m
        if m > n:
            return MatchVerdict(False, count=0)
        if not self.C:
            return MatchVerdict(True, count=n - m + 1)
        if len(self.C) == 1:
            ((i, a),) = self.C.items()
            lo, hi = i, n - m + i
            cnt = self.index.count_in_range(a, lo, hi)
            cnt += self.index.count_in_range(WILDCARD_BYTE, lo, hi)
            return MatchVerdict(cnt > 0, count=cnt)
        (i, a), (j, b) = sorted(self.C.items())
        d = j - i - 1
        lo, hi = i, n - m + i
        ca, cb = self.map.code(a), self.map.code(b)
        cnt = 0
        if ca and cb:
            for x, y in ((ca, cb), (ca, WILDCARD_CODE), (WILDCARD_CODE, cb),
                         (WILDCARD_CODE, WILDCARD_CODE)):
                cnt += self._rpq(lo, hi, x, y, d)
        elif not ca and cb:
            cnt += self._scan_left(a, b, lo, hi, d, partner_wild=True)
            cnt += self._rpq(lo, hi, WILDCARD_CODE, cb, d)
            cnt += self._rpq(lo, hi, WILDCARD_CODE, WILDCARD_CODE, d)
        elif ca and not cb:
            cnt += self._scan_right(a, b, lo, hi, d, partner_wild=True)
            cnt += self._rpq(lo, hi, ca, WILDCARD_CODE, d)
            cnt += self._rpq(lo, hi, WILDCARD_CODE, WILDCARD_CODE, d)
        else:
            cnt += self._scan_left(a, b, lo, hi, d, partner_wild=True)
            cnt += self._scan_right(None, b, lo, hi, d, partner_wild=False)
            cnt += self._rpq(lo, hi, WILDCARD_CODE, WILDCARD_CODE, d)
        return MatchVerdict(cnt > 0, count=cnt)

    def _rpq(self, lo: int, hi: int, a: int, b: int, d: int) -> int:
        self.counters["rp_queries"] += 1
        return self.rp.query(lo, hi + d + 1, a, b, d)

    def _scan_left(self, a: int, b: int, lo: int, hi: int, d: int,
                   partner_wild: bool) -> int:
        """Count u in occ(a) within [lo, hi] whose partner u+d+1 matches b (/'?')."""
        text = self.index.text
        n = self.n
        cnt = 0
        for u in self.index.positions(a):
            if u < lo:
                continue
            if u > hi:
                break
            v = u + d + 1
            if v > n:
                continue
            tv = text[v - 1]
            if tv == b or (partner_wild and tv == WILDCARD_BYTE):
                cnt += 1
        self.counters["scans"] += 1
        return cnt

    def _scan_right(self, a: int | None, b: int, lo: int, hi: int, d: int,
                    partner_wild: bool) -> int:
        """Count v in occ(b) with u = v-d-1 in [lo, hi] and T_u matching.

        With ``a=None`` only a wildcard left endpoint counts (used when
        the a-side was already covered by a left scan).
        """
        text = self.index.text
        cnt = 0
        for v in self.index.positions(b):
            u = v - d - 1
            if u < lo:
                continue
            if u > hi:
                break
            tu = text[u - 1]
            if (a is not None and tu == a) or \
               ((partner_wild or a is None) and tu == WILDCARD_BYTE):
                cnt += 1
        self.counters["scans"] += 1
        return cnt

    # -- introspection -----------------------------------------------------------

    def mapped_text(self) -> np.ndarray:
        """Current range-pair input (a copy)."""
        return self.rp.X.copy()

    def theta_of(self, sym) -> int:
        return self.map.code(TextIndex._sym(sym))
