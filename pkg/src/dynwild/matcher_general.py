"""Fully dynamic matching with up to k wildcards across pattern and text.

Query dispatch: if the pattern holds a symbol that is currently rare in
the text, every match must align that symbol with one of its few text
occurrences (or a text wildcard), so those alignments are verified
directly with block-hash comparisons.  Otherwise every pattern symbol is
frequent, and the wildcards of the pattern and of the masked text T' are
jointly completed over (frequent symbols + '#') in Gray order, one
substitution per step, asking a substring oracle whether the completed
pattern occurs in the completed text.
"""

from __future__ import annotations

import math
from bisect import insort
from collections import Counter

import numpy as np

from . import _kernels
from .hashing import (
    PLACEHOLDER_BYTE,
    WILDCARD_BYTE,
    HashContext,
    RangeHashTree,
    choose_context,
    as_bytes,
)
from .text_index import TextIndex
from .verdict import MatchVerdict

_EMPTY = np.zeros(0, dtype=np.int64)


def _tau_raw(n: int, k: int) -> float:
    """Unclamped threshold (n^k * log2(n)^7)^(1/(k+1)), n >= 2."""
    return math.exp((k * math.log(n) + 7.0 * math.log(math.log2(n))) / (k + 1))


def default_tau(n: int, k: int) -> int:
    """Frequency threshold for the general matcher, clamped to [1, n]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 2:
        return 1
    return min(n, max(1, math.ceil(_tau_raw(n, k))))


class PatternStore:
    """The live pattern: bytes, sorted wildcard positions, hash tree."""

    def __init__(self, pattern, ctx: HashContext):
        raw = as_bytes(pattern)
        if not raw:
            raise ValueError("pattern must be non-empty")
        if PLACEHOLDER_BYTE in raw:
            raise ValueError("'#' is reserved and cannot appear in a pattern")
        self.p = bytearray(raw)
        self.m = len(raw)
        self.ctx = ctx
        self.wildcards = [i for i, c in enumerate(raw, start=1) if c == WILDCARD_BYTE]
        self.symbol_counts = Counter(c for c in raw if c != WILDCARD_BYTE)
        self.tree = RangeHashTree(raw, ctx)

    @property
    def wildcard_count(self) -> int:
        return len(self.wildcards)

    def substitute(self, j: int, sym) -> None:
        if not 1 <= j <= self.m:
            raise IndexError(f"pattern position {j} outside [1, {self.m}]")
        c_new = TextIndex._sym(sym)
        if c_new == PLACEHOLDER_BYTE:
            raise ValueError("'#' is reserved and cannot appear in a pattern")
        c_old = self.p[j - 1]
        if c_new == c_old:
            return
        if c_old == WILDCARD_BYTE:
            self.wildcards.remove(j)
        else:
            self.symbol_counts -= Counter((c_old,))
        if c_new == WILDCARD_BYTE:
            insort(self.wildcards, j)
        else:
            self.symbol_counts[c_new] += 1
        self.p[j - 1] = c_new
        self.tree.update(j, c_new)

    def first_position_of(self, sym: int) -> int:
        return self.p.index(sym) + 1


class CompletionEnumerator:
    """Reflected Gray enumeration of completion vectors.

    Emits every vector in ``symbols^k`` exactly once, consecutive
    vectors differing in one coordinate; the last coordinate varies
    fastest, alternating sweep direction block by block.
    """

    def __init__(self, symbols, k: int):
        self.symbols = [TextIndex._sym(s) for s in symbols]
        if k > 0 and not self.symbols:
            raise ValueError("need at least one symbol to complete wildcards")
        self.k = k
        self.radix = len(self.symbols)
        self.total = self.radix**k if k else 1
        self._t = 0
        self._digits = self._gray_digits(0)

    def _gray_digits(self, t: int) -> list[int]:
        # digit j sweeps forward when the base-R prefix value above it is
        # even, backward when odd (reflected construction)
        out = []
        div = self.radix ** (self.k - 1) if self.k else 1
        for _ in range(self.k):
            q = t // div
            d = q % self.radix
            out.append(d if (q // self.radix) % 2 == 0 else self.radix - 1 - d)
            div //= self.radix
        return out

    @property
    def current(self) -> tuple[int, ...]:
        return tuple(self.symbols[d] for d in self._digits)

    def advance(self) -> tuple[int, int] | None:
        """Move to the next vector; returns (0-based coordinate, new symbol)."""
        if self._t + 1 >= self.total:
            return None
        self._t += 1
        nxt = self._gray_digits(self._t)
        for j in range(self.k):
            if nxt[j] != self._digits[j]:
                self._digits = nxt
                return j, self.symbols[nxt[j]]
        raise AssertionError("consecutive Gray words must differ")


#: refuse completion spaces beyond this many vectors
_COMPLETION_CAP = 10**9


class _MultisetOracle:
    """Substring oracle backed by an ordered multiset of window hashes.

    Keeps the hash of every length-m window of the completed-text
    universe; a substitution refreshes at most m windows, a query is a
    membership probe.  External text changes are batched lazily and
    flushed on the next query.
    """

    name = "multiset"

    def __init__(self, index: TextIndex, pattern: PatternStore):
        self.index = index
        self.pattern = pattern
        self.win: np.ndarray | None = None
        self.counts: dict[int, int] = {}
        self._dirty: set[int] = set()
        self._text_slots: dict[int, int] = {}
        self._pat_slots: dict[int, int] = {}
        self.window_refreshes = 0

    def mark_dirty(self, positions) -> None:
        self._dirty.update(positions)

    def set_text_slot(self, pos: int, sym: int) -> None:
        self._text_slots[pos] = sym
        self.index.tree_tprime.update(pos, sym)
        self._refresh([pos])

    def set_pattern_slot(self, pos: int, sym: int) -> None:
        self._pat_slots[pos] = sym
        self.pattern.tree.update(pos, sym)

    def reset_slots(self) -> None:
        for pos in self._text_slots:
            self.index.tree_tprime.update(pos, self.index.tprime[pos - 1])
        self.mark_dirty(self._text_slots)
        for pos in self._pat_slots:
            self.pattern.tree.update(pos, self.pattern.p[pos - 1])
        self._text_slots.clear()
        self._pat_slots.clear()

    def _build(self) -> None:
        n, m = self.index.n, self.pattern.m
        total = n - m + 1
        self.win = np.zeros(total, dtype=np.int64)
        tt = self.index.tree_tprime
        _kernels.window_hash_range(tt.hs, tt.ln, self.index.ctx.powers, m, 0, total - 1, self.win)
        self.counts = Counter(self.win.tolist())
        self._dirty.clear()

    def _refresh(self, positions) -> None:
        if self.win is None:
            return
        n, m = self.index.n, self.pattern.m
        total = n - m + 1
        starts: set[int] = set()
        for pos in positions:
            lo = max(1, pos - m + 1)
            hi = min(total, pos)
            starts.update(range(lo, hi + 1))
        if not starts:
            return
        tt = self.index.tree_tprime
        pows = self.index.ctx.powers
        for s in sorted(starts):
            old = int(self.win[s - 1])
            new = int(_kernels.st_range(tt.hs, tt.ln, pows, s - 1, s + m - 2))
            if new != old:
                c = self.counts[old] - 1
                if c:
                    self.counts[old] = c
                else:
                    del self.counts[old]
                self.counts[new] = self.counts.get(new, 0) + 1
                self.win[s - 1] = new
        self.window_refreshes += len(starts)

    def query(self) -> int:
        if self.win is None:
            self._build()
        elif self._dirty:
            self._refresh(self._dirty)
            self._dirty.clear()
        target = self.pattern.tree.full_hash
        if self.counts.get(target, 0) == 0:
            return -1
        tt = self.index.tree_tprime
        return int(
            _kernels.scan_windows_equal(
                tt.hs, tt.ln, self.index.ctx.powers,
                self.pattern.m, self.index.n, np.int64(target),
            )
        )


class GeneralMatcher:
    """Dispatcher over the rare-symbol scan and the joint-completion search.

    ``oracle`` selects the substring oracle for the completion search:
    ``"scan"`` re-sweeps every window hash per completion inside one
    compiled kernel, ``"multiset"`` maintains an ordered multiset of
    window hashes with one refresh per substitution.  Both give the same
    verdicts.
    """

    def __init__(self, text, pattern, k: int | None = None, tau: int | None = None,
                 seed: int = 0, oracle: str = "scan"):
        text = as_bytes(text)
        pattern = as_bytes(pattern)
        n, m = len(text), len(pattern)
        ctx = choose_context(max(n, m, 1), seed)
        wild_total = text.count(WILDCARD_BYTE) + pattern.count(WILDCARD_BYTE)
        self.k = k if k is not None else max(1, wild_total)
        if wild_total > self.k:
            raise ValueError(f"{wild_total} wildcards exceed the budget k={self.k}")
        self.tau = tau if tau is not None else default_tau(n, self.k)
        self.index = TextIndex(text, self.tau, ctx)
        self.pattern = PatternStore(pattern, ctx)
        if oracle not in ("scan", "multiset"):
            raise ValueError(f"unknown oracle {oracle!r}")
        self.oracle_kind = oracle
        self.oracle = _MultisetOracle(self.index, self.pattern) if oracle == "multiset" else None
        self.counters = Counter()

    # -- updates -----------------------------------------------------------

    def _check_budget(self, adds_wildcard: bool, drops_wildcard: bool) -> None:
        total = len(self.index.wildcard_positions()) + self.pattern.wildcard_count
        total += int(adds_wildcard) - int(drops_wildcard)
        if total > self.k:
            raise ValueError(f"update would exceed the wildcard budget k={self.k}")

    def substitute_text(self, i: int, sym) -> None:
        if not 1 <= i <= self.index.n:
            raise IndexError(f"position {i} outside [1, {self.index.n}]")
        c = TextIndex._sym(sym)
        self._check_budget(c == WILDCARD_BYTE, self.index.text[i - 1] == WILDCARD_BYTE)
        changed = self.index.substitute(i, c)
        if self.oracle is not None:
            self.oracle.mark_dirty(changed)
        self.counters["text_updates"] += 1

    def substitute_pattern(self, j: int, sym) -> None:
        if not 1 <= j <= self.pattern.m:
            raise IndexError(f"pattern position {j} outside [1, {self.pattern.m}]")
        c = TextIndex._sym(sym)
        self._check_budget(c == WILDCARD_BYTE, self.pattern.p[j - 1] == WILDCARD_BYTE)
        self.pattern.substitute(j, c)
        self.counters["pattern_updates"] += 1

    # -- queries -----------------------------------------------------------

    def query(self) -> MatchVerdict:
        self.counters["queries"] += 1
        if self.pattern.m > self.index.n:
            return MatchVerdict(False)
        rare = [
            c for c in self.pattern.symbol_counts
            if self.pattern.symbol_counts[c] > 0 and self.index.is_rare(c)
        ]
        if rare:
            c = min(rare, key=lambda c: (self.index.count(c), c))
            return self._query_case1(c)
        return self._query_case2()

    def _query_case1(self, c: int) -> MatchVerdict:
        self.counters["case1_queries"] += 1
        idx, pat = self.index, self.pattern
        pos0 = pat.first_position_of(c) - 1
        cands = sorted(idx.positions(c) + idx.wildcard_positions())
        self.counters["case1_candidates"] += len(cands)
        if not cands:
            return MatchVerdict(False)
        cand0 = np.array(cands, dtype=np.int64) - 1
        pwild = np.array(pat.wildcards, dtype=np.int64) - 1 if pat.wildcards else _EMPTY
        tw = idx.wildcard_positions()
        twild = np.array(tw, dtype=np.int64) - 1 if tw else _EMPTY
        s0 = int(
            _kernels.case1_scan(
                cand0, pos0, pat.m, idx.n,
                pat.tree.hs, pat.tree.ln, idx.tree_text.hs, idx.tree_text.ln,
                idx.ctx.powers, pwild, twild,
            )
        )
        return MatchVerdict(s0 >= 0, witness=s0 + 1 if s0 >= 0 else None)

    def _query_case2(self) -> MatchVerdict:
        self.counters["case2_queries"] += 1
        idx, pat = self.index, self.pattern
        slots = [("P", pos) for pos in pat.wildcards]
        slots += [("T", pos) for pos in idx.wildcard_positions()]
        symbols = sorted(idx.frequent) + [PLACEHOLDER_BYTE]
        total = len(symbols) ** len(slots)
        if total > _COMPLETION_CAP:
            raise ValueError(
                f"{total} joint completions exceed the enumeration cap; raise tau"
            )
        if self.oracle_kind == "scan":
            found, tried = self._enumerate_scan(slots, symbols, total)
        else:
            found, tried = self._enumerate_multiset(slots, symbols)
        self.counters["completions_tried"] += tried
        return MatchVerdict(found >= 0, witness=found + 1 if found >= 0 else None)

    def _enumerate_scan(self, slots, symbols, total) -> tuple[int, int]:
        """Whole Gray enumeration in one kernel call on scratch tree copies."""
        idx, pat = self.index, self.pattern
        ctx = idx.ctx
        slot_text = np.array([1 if side == "T" else 0 for side, _ in slots], dtype=np.int64)
        slot_pos0 = np.array([pos - 1 for _, pos in slots], dtype=np.int64)
        sym_codes = np.array([ctx.codes[s] for s in symbols], dtype=np.int64)
        phs = pat.tree.hs.copy()
        pln = pat.tree.ln
        tt = idx.tree_tprime
        ths = tt.hs.copy()
        found, tried = _kernels.case2_enumerate(
            phs, pln, ths, tt.ln, ctx.powers, pat.m, idx.n,
            slot_text, slot_pos0, sym_codes, total,
        )
        return int(found), int(tried)

    def _enumerate_multiset(self, slots, symbols) -> tuple[int, int]:
        """Gray enumeration against the persistent window-multiset oracle."""
        enum = CompletionEnumerator(symbols, len(slots))
        oracle = self.oracle
        found = -1
        tried = 0
        try:
            for (side, pos), sym in zip(slots, enum.current):
                if side == "P":
                    oracle.set_pattern_slot(pos, sym)
                else:
                    oracle.set_text_slot(pos, sym)
            while True:
                tried += 1
                found = oracle.query()
                if found >= 0:
                    break
                step = enum.advance()
                if step is None:
                    break
                coord, sym = step
                side, pos = slots[coord]
                if side == "P":
                    oracle.set_pattern_slot(pos, sym)
                else:
                    oracle.set_text_slot(pos, sym)
        finally:
            oracle.reset_slots()
        return found, tried
