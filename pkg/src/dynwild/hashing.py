"""Polynomial rolling hashes with dynamic range queries and wildcard masking.

The hash of a sequence S is ``sum(code(S_i) * b^(|S|-i)) mod p`` with a
seeded random base ``b`` and a fixed 61-bit Mersenne prime modulus, large
enough that ``p > n^3`` holds for every supported sequence length (by the
union bound this keeps the per-run collision probability below ``1/n``).
Symbol codes are ``byte value + 1`` so no symbol hashes to zero; the
reserved placeholder byte ``'#'`` gets a code above the byte range so it
can never alias an ordinary symbol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

import numpy as np

from . import _kernels
from ._backend import NUMBA_ENABLED

MERSENNE61 = _kernels.MOD

WILDCARD_BYTE = 0x3F  # '?'
PLACEHOLDER_BYTE = 0x23  # '#', reserved: rejected in input, used internally
PLACEHOLDER_CODE = 257

#: largest sequence length for which the fixed prime satisfies p > n^3
MAX_SUPPORTED_LEN = 1_321_122

_DEFAULT_CODES = np.arange(1, 257, dtype=np.int64)
_DEFAULT_CODES[PLACEHOLDER_BYTE] = PLACEHOLDER_CODE


def default_symbol_codes() -> np.ndarray:
    """Per-byte symbol codes: value+1, with '#' remapped above the byte range."""
    return _DEFAULT_CODES.copy()


def as_bytes(s) -> bytes:
    """Coerce str/bytes/bytearray/iterable-of-ints to raw bytes."""
    if isinstance(s, bytes):
        return s
    if isinstance(s, (bytearray, memoryview)):
        return bytes(s)
    if isinstance(s, str):
        return s.encode("latin-1")
    return bytes(s)


def _sym_value(sym) -> int:
    if isinstance(sym, str):
        if len(sym) != 1:
            raise ValueError(f"expected a single symbol, got {sym!r}")
        return ord(sym)
    if isinstance(sym, (bytes, bytearray)):
        if len(sym) != 1:
            raise ValueError(f"expected a single symbol, got {sym!r}")
        return sym[0]
    return int(sym)


@dataclass
class HashContext:
    """Immutable hashing parameters shared by every structure of a run.

    ``codes[v] == 0`` marks a symbol without a code; hashing it is a
    configuration error.  ``powers[e] == base^e mod modulus`` for
    ``e <= max_len``.
    """

    base: int
    modulus: int
    max_len: int
    codes: np.ndarray = field(default_factory=default_symbol_codes)
    powers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (1 <= self.base < self.modulus):
            raise ValueError("base must lie in [1, modulus-1]")
        if self.max_len < 0:
            raise ValueError("max_len must be nonnegative")
        pows = np.ones(self.max_len + 1, dtype=np.int64)
        b = self.base % self.modulus
        acc = 1
        for e in range(1, self.max_len + 1):
            acc = (acc * b) % self.modulus
            pows[e] = acc
        self.powers = pows

    @property
    def is_default_modulus(self) -> bool:
        return self.modulus == MERSENNE61

    def code_of(self, sym) -> int:
        v = _sym_value(sym)
        c = int(self.codes[v])
        if c == 0:
            raise ValueError(f"symbol {chr(v)!r} (byte {v}) has no hash code")
        return c

    def codes_of(self, s) -> np.ndarray:
        raw = np.frombuffer(as_bytes(s), dtype=np.uint8)
        out = self.codes[raw]
        if out.size and not out.all():
            bad = int(raw[np.argmin(out != 0)])
            raise ValueError(f"symbol {chr(bad)!r} (byte {bad}) has no hash code")
        return out

    def power(self, e: int) -> int:
        if e > self.max_len:
            raise ValueError(f"power table overflow: b^{e} with max_len={self.max_len}")
        return int(self.powers[e])


def choose_context(n: int, seed: int = 0, symbol_codes: np.ndarray | None = None) -> HashContext:
    """Deterministically draw a context for sequences up to length ``n``.

    The modulus is the fixed prime 2^61-1; the base is uniform on
    [1, p-1] from the seeded generator.  Raises if ``n^3`` would reach
    the fixed prime.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_SUPPORTED_LEN:
        raise ValueError(
            f"n={n} too large for the fixed prime (need modulus > n^3)"
        )
    base = Random(seed).randrange(1, MERSENNE61)
    codes = default_symbol_codes() if symbol_codes is None else symbol_codes
    return HashContext(base=base, modulus=MERSENNE61, max_len=n, codes=codes)


def hash_full(s, ctx: HashContext) -> int:
    """Rolling hash of a whole sequence; the empty sequence hashes to 0."""
    codes = ctx.codes_of(s)
    if len(codes) > ctx.max_len:
        raise ValueError("sequence longer than the context's max_len")
    if ctx.is_default_modulus:
        return int(_kernels.hash_codes(codes, np.int64(ctx.base)))
    h = 0
    for c in codes:
        h = (h * ctx.base + int(c)) % ctx.modulus
    return h


def hash_concat(h1: int, len1: int, h2: int, len2: int, ctx: HashContext) -> int:
    """Hash of a concatenation from the part hashes: h1 * b^len2 + h2."""
    return (h1 * ctx.power(len2) + h2) % ctx.modulus


def masked_hash(s, wildcard_positions, ctx: HashContext) -> int:
    """Hash of ``s`` with the given 1-based positions deleted.

    Concatenates the maximal solid intervals between consecutive masked
    positions via the concatenation rule; masking everything yields 0.
    """
    b = as_bytes(s)
    masked = sorted(set(int(p) for p in wildcard_positions))
    for p in masked:
        if not 1 <= p <= len(b):
            raise ValueError(f"masked position {p} outside [1, {len(b)}]")
    h = 0
    total = 0
    prev = 0
    bounds = masked + [len(b) + 1]
    for cut in bounds:
        block = b[prev : cut - 1]
        if block:
            h = hash_concat(h, total, hash_full(block, ctx), len(block), ctx)
            total += len(block)
        prev = cut
    return h


class RangeHashTree:
    """Array-backed segment tree of rolling hashes with point updates.

    Supports ``range_hash(l, r)`` and ``update(i, sym)`` in O(log len),
    1-based like every public index in this package.  Requires the
    default modulus (the compiled kernels are specialized to it).
    """

    __slots__ = ("ctx", "length", "hs", "ln")

    def __init__(self, s, ctx: HashContext):
        if not ctx.is_default_modulus:
            raise ValueError("RangeHashTree requires the default 61-bit modulus")
        codes = ctx.codes_of(s)
        if len(codes) > ctx.max_len:
            raise ValueError("sequence longer than the context's max_len")
        self.ctx = ctx
        self.length = len(codes)
        self.hs, self.ln = _kernels.st_build(codes, ctx.powers)

    def update(self, i: int, sym) -> None:
        """Replace the symbol at 1-based position ``i``."""
        if not 1 <= i <= self.length:
            raise IndexError(f"position {i} outside [1, {self.length}]")
        _kernels.st_update(self.hs, self.ln, self.ctx.powers, i - 1, self.ctx.code_of(sym))

    def range_hash(self, l: int, r: int) -> int:
        """Hash of positions [l, r], 1-based inclusive."""
        if not 1 <= l <= r <= self.length:
            raise IndexError(f"range [{l}, {r}] invalid for length {self.length}")
        return int(_kernels.st_range(self.hs, self.ln, self.ctx.powers, l - 1, r - 1))

    @property
    def full_hash(self) -> int:
        """Hash of the whole current sequence (0 when empty)."""
        return int(self.hs[1])


def warm_kernels() -> None:
    """Trigger one tiny compilation/run of every kernel (a no-op backend-wise).

    Useful before timed sections so numba's first-call compilation does
    not land inside a measurement; results are cached on disk afterwards.
    """
    ctx = choose_context(8, seed=0)
    t = RangeHashTree(b"abcdefgh", ctx)
    t.update(1, "b")
    t.range_hash(2, 7)
    hash_full(b"ab", ctx)
    wild = np.array([3], dtype=np.int64)
    empt = np.zeros(0, dtype=np.int64)
    _kernels.is_match_tree(t.hs, t.ln, t.hs, t.ln, ctx.powers, 0, 3, 4, 7, wild, empt)
    _kernels.case1_scan(
        np.array([2], dtype=np.int64), 1, 2, 8, t.hs, t.ln, t.hs, t.ln, ctx.powers, empt, empt
    )
    out = np.zeros(3, dtype=np.int64)
    _kernels.window_hash_range(t.hs, t.ln, ctx.powers, 2, 0, 2, out)
    _kernels.scan_windows_equal(t.hs, t.ln, ctx.powers, 2, 8, np.int64(1))
    out6 = np.zeros(6, dtype=np.int64)
    _kernels.sparse_vector_build(
        ctx.codes_of(b"abcdefgh"),
        np.array([0, 2], dtype=np.int64),
        np.array([1, 0], dtype=np.int64),
        ctx.powers,
        8,
        3,
        out6,
    )
    X = np.array([0, 1, 0, 1, 2, 0], dtype=np.int64)
    B, S, delta = 2, 3, 2
    M = (len(X) + B - 1) // B
    near = np.zeros((M, S, S, B), dtype=np.int64)
    pair = np.zeros((M, M, S, S, 2 * B - 1), dtype=np.int64)
    pend = np.zeros((M, delta), dtype=np.int64)
    pend_len = np.zeros(M, dtype=np.int64)
    applied = X.copy()
    _kernels.rp_build_near(X, B, near)
    for i in range(M):
        for j in range(i + 1, M):
            _kernels.rp_pair_slice(applied, B, i, j, pair[i, j])
    _kernels.rp_update(X, applied, near, pair, pend, pend_len, B, delta, 1, np.int64(2))
    _kernels.rp_query(X, applied, near, pair, pend, pend_len, B, 0, 3, 0, 1, 2)
