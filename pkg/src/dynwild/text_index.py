"""Dynamic text bookkeeping: occurrence sets, rare/frequent classes, T'.

Maintains, under single-symbol substitutions:

* the live text T over the byte alphabet plus the wildcard '?',
* per-symbol ordered occurrence sets (wildcards tracked like a symbol
  but exempt from frequency classification),
* the masked text T' where every rare symbol is replaced by the
  placeholder '#' (rare = fewer than ``tau`` occurrences; '?' copied
  verbatim),
* rolling-hash trees over both T and T'.

Occurrence sets are bisect-maintained sorted lists: logarithmic lookup,
C-speed memmove on change, which beats tree constants at the scales this
package targets.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort

from .hashing import (
    PLACEHOLDER_BYTE,
    WILDCARD_BYTE,
    HashContext,
    RangeHashTree,
    as_bytes,
    choose_context,
)


class TextIndex:
    """Occurrence sets, frequent set, and the masked text T' for a live text."""

    def __init__(self, text, tau: int, ctx: HashContext | None = None):
        if tau < 1:
            raise ValueError("tau must be >= 1")
        raw = as_bytes(text)
        if PLACEHOLDER_BYTE in raw:
            raise ValueError("input text may not contain the reserved byte '#'")
        self.tau = tau
        self.n = len(raw)
        self.text = bytearray(raw)
        self.ctx = ctx if ctx is not None else choose_context(max(self.n, 1))
        self.occ: dict[int, list[int]] = {}
        for i, c in enumerate(raw, start=1):
            self.occ.setdefault(c, []).append(i)
        self.frequent: set[int] = {
            c for c, lst in self.occ.items()
            if c != WILDCARD_BYTE and len(lst) >= tau
        }
        self.tprime = bytearray(
            c if (c == WILDCARD_BYTE or c in self.frequent) else PLACEHOLDER_BYTE
            for c in raw
        )
        self.tree_text = RangeHashTree(self.text, self.ctx)
        self.tree_tprime = RangeHashTree(self.tprime, self.ctx)

    # -- queries -----------------------------------------------------------

    def count(self, sym) -> int:
        return len(self.occ.get(self._sym(sym), ()))

    def is_rare(self, sym) -> bool:
        """Strictly fewer than tau occurrences ('?' is never classified)."""
        c = self._sym(sym)
        if c == WILDCARD_BYTE:
            return False
        return len(self.occ.get(c, ())) < self.tau

    def positions(self, sym) -> list[int]:
        """The ordered occurrence set of a symbol (live view, do not mutate)."""
        return self.occ.get(self._sym(sym), [])

    def lower_bound(self, sym, from_pos: int) -> int | None:
        """Smallest occurrence >= from_pos, or None."""
        lst = self.occ.get(self._sym(sym), ())
        k = bisect_left(lst, from_pos)
        return lst[k] if k < len(lst) else None

    def count_in_range(self, sym, lo: int, hi: int) -> int:
        """Occurrences inside [lo, hi] by rank difference."""
        if hi < lo:
            return 0
        lst = self.occ.get(self._sym(sym), ())
        return bisect_right(lst, hi) - bisect_left(lst, lo)

    def wildcard_positions(self) -> list[int]:
        return self.occ.get(WILDCARD_BYTE, [])

    # -- updates -----------------------------------------------------------

    def substitute(self, i: int, sym) -> list[int]:
        """Set T_i to a new symbol; returns the T' positions that changed.

        Crossing the threshold downwards masks every occurrence of the
        old symbol in T'; crossing upwards restores the new symbol's
        occurrences.  Only the two symbols involved can change class.
        """
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside [1, {self.n}]")
        c_new = self._sym(sym)
        if c_new == PLACEHOLDER_BYTE:
            raise ValueError("'#' is reserved and cannot be written into the text")
        c_old = self.text[i - 1]
        if c_new == c_old:
            return []

        old_lst = self.occ[c_old]
        del old_lst[bisect_left(old_lst, i)]
        insort(self.occ.setdefault(c_new, []), i)
        self.text[i - 1] = c_new
        self.tree_text.update(i, c_new)

        changed: dict[int, int] = {}
        if c_old != WILDCARD_BYTE and len(old_lst) == self.tau - 1:
            # old symbol just became rare: mask its remaining occurrences
            self.frequent.discard(c_old)
            for j in old_lst:
                changed[j] = PLACEHOLDER_BYTE
        new_lst = self.occ[c_new]
        if c_new != WILDCARD_BYTE and len(new_lst) == self.tau:
            # new symbol just became frequent: restore it everywhere
            self.frequent.add(c_new)
            for j in new_lst:
                changed[j] = c_new
        if c_new == WILDCARD_BYTE or c_new in self.frequent:
            changed[i] = c_new
        else:
            changed[i] = PLACEHOLDER_BYTE

        out = []
        for j, b in changed.items():
            if self.tprime[j - 1] != b:
                self.tprime[j - 1] = b
                self.tree_tprime.update(j, b)
                out.append(j)
        return out

    @staticmethod
    def _sym(sym) -> int:
        if isinstance(sym, str):
            return ord(sym)
        if isinstance(sym, (bytes, bytearray)):
            return sym[0]
        return int(sym)
