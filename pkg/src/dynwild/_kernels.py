"""Hot numeric kernels shared by the matchers.

Every public function here operates on flat numpy arrays so the whole
module can be compiled by numba.  On the Python backend the identical
code runs interpreted (exact, just slower); only the modular multiply
differs, because the overflow-free 61-bit trick needs wrapping uint64
arithmetic while plain Python gets exact big integers for free.

All segment-tree state is a pair of arrays ``(hs, ln)`` of length
``2*size`` (size = smallest power of two >= sequence length): ``hs[v]``
is the rolling hash of the real symbols below node ``v`` and ``ln[v]``
their count, so padding leaves carry (0, 0) and the root hash equals the
hash of the whole sequence.  Node 1 is the root, leaves start at ``size``.
"""

from __future__ import annotations

import numpy as np

from ._backend import NUMBA_ENABLED

MOD = (1 << 61) - 1  # Mersenne prime 2^61 - 1

_U = np.uint64
_MASK31 = _U(0x7FFFFFFF)
_MASK30 = _U(0x3FFFFFFF)


if NUMBA_ENABLED:

    def _mulmod(a, b):
        # 61-bit multiply-mod with 31/30-bit splitting; every intermediate
        # fits in uint64 (largest sum < 2^63 + 2^33).
        au = _U(a) >> _U(31)
        ad = _U(a) & _MASK31
        bu = _U(b) >> _U(31)
        bd = _U(b) & _MASK31
        mid = ad * bu + au * bd
        t = (
            au * bu * _U(2)
            + (mid >> _U(30))
            + ((mid & _MASK30) << _U(31))
            + ad * bd
        )
        t = (t >> _U(61)) + (t & _U(MOD))
        if t >= _U(MOD):
            t -= _U(MOD)
        return np.int64(t)

else:

    def _mulmod(a, b):
        return (int(a) * int(b)) % MOD


def lower_bound(arr, x):
    """First index ``i`` with ``arr[i] >= x`` in a sorted int64 array."""
    lo = 0
    hi = arr.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def hash_codes(codes, base):
    """Polynomial rolling hash of a code sequence (Horner evaluation)."""
    h = np.int64(0)
    for i in range(codes.shape[0]):
        h = (_mulmod(h, base) + codes[i]) % MOD
    return h


def st_build(codes, pows):
    """Build segment-tree arrays over a code sequence."""
    n = codes.shape[0]
    size = 1
    while size < n:
        size *= 2
    hs = np.zeros(2 * size, dtype=np.int64)
    ln = np.zeros(2 * size, dtype=np.int64)
    for i in range(n):
        hs[size + i] = codes[i]
        ln[size + i] = 1
    for v in range(size - 1, 0, -1):
        left = 2 * v
        right = 2 * v + 1
        ln[v] = ln[left] + ln[right]
        hs[v] = (_mulmod(hs[left], pows[ln[right]]) + hs[right]) % MOD
    return hs, ln


def st_update(hs, ln, pows, i0, code):
    """Replace leaf ``i0`` (0-based) and refresh the root path."""
    size = hs.shape[0] >> 1
    v = size + i0
    hs[v] = code
    v >>= 1
    while v >= 1:
        left = 2 * v
        right = 2 * v + 1
        hs[v] = (_mulmod(hs[left], pows[ln[right]]) + hs[right]) % MOD
        v >>= 1


def st_range(hs, ln, pows, l0, r0):
    """Hash of positions ``[l0, r0]`` (0-based, inclusive, caller-validated).

    Left-to-right sweep over the canonical segments with the accumulator
    rule acc <- acc * b^len(v) + hash(v), folded from both edges.
    """
    size = hs.shape[0] >> 1
    acc_l = np.int64(0)
    acc_r = np.int64(0)
    len_r = np.int64(0)
    lo = l0 + size
    hi = r0 + size + 1
    cur = np.int64(1)
    while lo < hi:
        if lo & 1:
            acc_l = (_mulmod(acc_l, pows[cur]) + hs[lo]) % MOD
            lo += 1
        if hi & 1:
            hi -= 1
            acc_r = (_mulmod(hs[hi], pows[len_r]) + acc_r) % MOD
            len_r += cur
        lo >>= 1
        hi >>= 1
        cur *= 2
    return (_mulmod(acc_l, pows[len_r]) + acc_r) % MOD


def is_match_tree(phs, pln, ths, tln, pows, l1, r1, l2, r2, pwild, twild):
    """Wildcard-aware equality of two equal-length tree slices (0-based).

    Cuts both slices at the union of their wildcard offsets, drops the
    wildcard columns, and compares the two concatenated block hashes in
    one final comparison.  ``pwild``/``twild`` are sorted global wildcard
    positions of the underlying sequences.
    """
    length = r1 - l1 + 1
    ip = lower_bound(pwild, l1)
    it = lower_bound(twild, l2)
    acc_p = np.int64(0)
    acc_t = np.int64(0)
    seg = 0
    while True:
        if ip < pwild.shape[0] and pwild[ip] <= r1:
            op = pwild[ip] - l1
        else:
            op = length
        if it < twild.shape[0] and twild[it] <= r2:
            ot = twild[it] - l2
        else:
            ot = length
        cut = op if op < ot else ot
        if cut > seg:
            seglen = cut - seg
            hp = st_range(phs, pln, pows, l1 + seg, l1 + cut - 1)
            ht = st_range(ths, tln, pows, l2 + seg, l2 + cut - 1)
            acc_p = (_mulmod(acc_p, pows[seglen]) + hp) % MOD
            acc_t = (_mulmod(acc_t, pows[seglen]) + ht) % MOD
        if cut >= length:
            break
        if op == cut:
            ip += 1
        if ot == cut:
            it += 1
        seg = cut + 1
    return acc_p == acc_t


def case1_scan(cands, pos0, m, n, phs, pln, ths, tln, pows, pwild, twild):
    """First 0-based window start among candidate alignments, or -1.

    ``cands`` holds 0-based text positions that must align with pattern
    offset ``pos0``; windows clipped by the text boundary are skipped.
    """
    for idx in range(cands.shape[0]):
        s = cands[idx] - pos0
        if s < 0 or s + m > n:
            continue
        if is_match_tree(phs, pln, ths, tln, pows, 0, m - 1, s, s + m - 1, pwild, twild):
            return s
    return np.int64(-1)


def window_hash_range(ths, tln, pows, m, s_lo, s_hi, out):
    """Fill ``out[t]`` with the hash of window ``[s, s+m-1]``, s = s_lo+t."""
    for s in range(s_lo, s_hi + 1):
        out[s - s_lo] = st_range(ths, tln, pows, s, s + m - 1)


def scan_windows_equal(ths, tln, pows, m, n, target):
    """First 0-based window start whose hash equals ``target``, or -1."""
    for s in range(n - m + 1):
        if st_range(ths, tln, pows, s, s + m - 1) == target:
            return np.int64(s)
    return np.int64(-1)


def sparse_vector_build(codes, cpos, cexp, pows, n, m, out):
    """Masked window hashes: out[s] = sum_t code[s+cpos[t]] * b^cexp[t]."""
    for s in range(n - m + 1):
        h = np.int64(0)
        for t in range(cpos.shape[0]):
            h = (h + _mulmod(codes[s + cpos[t]], pows[cexp[t]])) % MOD
        out[s] = h


def case2_enumerate(phs, pln, ths, tln, pows, m, n,
                    slot_text, slot_pos0, sym_codes, total):
    """Joint-completion search in reflected Gray order, fully in-kernel.

    ``slot_pos0[j]`` is the 0-based position of the j-th wildcard slot,
    in the pattern tree when ``slot_text[j] == 0`` and in the text tree
    otherwise (pattern slots come first).  Each Gray step rewrites one
    leaf and rescans the window hashes against the current pattern hash.
    Mutates the tree arrays, so callers pass scratch copies.

    Returns (0-based witness window or -1, completions tried).
    """
    k = slot_pos0.shape[0]
    tried = np.int64(0)
    if k == 0:
        tried = np.int64(1)
        return scan_windows_equal(ths, tln, pows, m, n, phs[1]), tried
    R = sym_codes.shape[0]
    digs = np.zeros(k, dtype=np.int64)
    rpow = np.ones(k, dtype=np.int64)
    for j in range(k - 2, -1, -1):
        rpow[j] = rpow[j + 1] * R
    for j in range(k):
        if slot_text[j] == 1:
            st_update(ths, tln, pows, slot_pos0[j], sym_codes[0])
        else:
            st_update(phs, pln, pows, slot_pos0[j], sym_codes[0])
    t = np.int64(0)
    while True:
        tried += 1
        s = scan_windows_equal(ths, tln, pows, m, n, phs[1])
        if s >= 0:
            return s, tried
        t += 1
        if t >= total:
            break
        for j in range(k):
            q = t // rpow[j]
            d = q % R
            # reflected: sweep direction follows the prefix value's parity
            g = d if (q // R) % 2 == 0 else R - 1 - d
            if g != digs[j]:
                digs[j] = g
                if slot_text[j] == 1:
                    st_update(ths, tln, pows, slot_pos0[j], sym_codes[g])
                else:
                    st_update(phs, pln, pows, slot_pos0[j], sym_codes[g])
    return np.int64(-1), tried


# ---------------------------------------------------------------------------
# Range-pair block-decomposition kernels.
#
# State arrays: X (current codes), applied (snapshot the Pair tables were
# computed from), near[M, S, S, B], pair[M, M, S, S, 2B-1],
# pend[M, delta] (per-block pending positions, sorted), pend_len[M].
# ---------------------------------------------------------------------------


def _pend_contains(pend, pend_len, blk, pos):
    for t in range(pend_len[blk]):
        if pend[blk, t] == pos:
            return True
    return False


def _pend_refresh(pend, pend_len, blk, pos, should_hold):
    at = -1
    for t in range(pend_len[blk]):
        if pend[blk, t] == pos:
            at = t
            break
    if should_hold:
        if at < 0:
            t = pend_len[blk]
            while t > 0 and pend[blk, t - 1] > pos:
                pend[blk, t] = pend[blk, t - 1]
                t -= 1
            pend[blk, t] = pos
            pend_len[blk] += 1
    else:
        if at >= 0:
            for t in range(at, pend_len[blk] - 1):
                pend[blk, t] = pend[blk, t + 1]
            pend_len[blk] -= 1


def rp_build_near(X, B, near):
    """Eager short-distance pair census over the current sequence."""
    n = X.shape[0]
    near[:, :, :, :] = 0
    for u in range(n):
        bi = u // B
        for d in range(B):
            v = u + d + 1
            if v >= n:
                break
            near[bi, X[u], X[v], d] += 1


def rp_pair_slice(applied, B, i, j, pair_ij):
    """Cross-block pair counts for ordered blocks (i, j), i < j.

    Multiplies the per-symbol coefficient polynomials
    P_{i,a}(x) = sum x^(end_i - u) and Q_{j,b}(x) = sum x^(v - start_j)
    by exact schoolbook convolution; the coefficient of x^{d'} is the
    count at local distance d'.
    """
    n = applied.shape[0]
    S = pair_ij.shape[0]
    pair_ij[:, :, :] = 0
    si = i * B
    ei = min(si + B, n) - 1
    sj = j * B
    ej = min(sj + B, n) - 1
    pc = np.zeros((S, B), dtype=np.int64)
    qc = np.zeros((S, B), dtype=np.int64)
    ptot = np.zeros(S, dtype=np.int64)
    qtot = np.zeros(S, dtype=np.int64)
    for u in range(si, ei + 1):
        pc[applied[u], ei - u] += 1
        ptot[applied[u]] += 1
    for v in range(sj, ej + 1):
        qc[applied[v], v - sj] += 1
        qtot[applied[v]] += 1
    for a in range(S):
        if ptot[a] == 0:
            continue
        for b in range(S):
            if qtot[b] == 0:
                continue
            for e1 in range(B):
                c1 = pc[a, e1]
                if c1 == 0:
                    continue
                for e2 in range(B):
                    c2 = qc[b, e2]
                    if c2 != 0:
                        pair_ij[a, b, e1 + e2] += c1 * c2


def rp_rebuild_block(X, applied, pair, pend, pend_len, B, blk):
    """Synchronize ``applied`` on one block and recompute its Pair slices."""
    n = X.shape[0]
    M = pair.shape[0]
    start = blk * B
    end = min(start + B, n)
    for t in range(start, end):
        applied[t] = X[t]
    pend_len[blk] = 0
    for j in range(M):
        if j > blk:
            rp_pair_slice(applied, B, blk, j, pair[blk, j])
        elif j < blk:
            rp_pair_slice(applied, B, j, blk, pair[j, blk])


def rp_update(X, applied, near, pair, pend, pend_len, B, delta, pos, c):
    """Point substitution; returns (near pair-slots touched, rebuild flag)."""
    n = X.shape[0]
    old = X[pos]
    touches = np.int64(0)
    if old != c:
        X[pos] = c
        bi = pos // B
        for d in range(B):
            v = pos + d + 1
            if v >= n:
                break
            near[bi, old, X[v], d] -= 1
            near[bi, c, X[v], d] += 1
            touches += 1
        for d in range(B):
            u = pos - d - 1
            if u < 0:
                break
            bu = u // B
            near[bu, X[u], old, d] -= 1
            near[bu, X[u], c, d] += 1
            touches += 1
    blk = pos // B
    _pend_refresh(pend, pend_len, blk, pos, X[pos] != applied[pos])
    rebuilt = np.int64(0)
    if pend_len[blk] >= delta:
        rp_rebuild_block(X, applied, pair, pend, pend_len, B, blk)
        rebuilt = np.int64(1)
    return touches, rebuilt


def rp_query(X, applied, near, pair, pend, pend_len, B, l0, hi0, a, b, d):
    """Count u in [l0, hi0] (0-based) with X[u]==a and X[u+d+1]==b.

    Boundary fragments scan the live sequence; full blocks read the Near
    table (d < B) or the lazy Pair tables plus pending-set corrections
    (d >= B).  Every stale pair is corrected exactly once: left-pending
    pairs in the left pass, the rest in the right pass guarded by
    ``u not in Pending_i``.
    """
    n = X.shape[0]
    M = near.shape[0]
    S = near.shape[1]
    cnt = np.int64(0)
    if hi0 < l0 or a < 0 or a >= S or b < 0 or b >= S:
        return cnt
    fb = (l0 + B - 1) // B
    head_end = min(fb * B - 1, hi0)
    for u in range(l0, head_end + 1):
        v = u + d + 1
        if v < n and X[u] == a and X[v] == b:
            cnt += 1
    i = fb
    while i < M and min(i * B + B, n) - 1 <= hi0:
        si = i * B
        ei = min(si + B, n) - 1
        if d < B:
            cnt += near[i, a, b, d]
        else:
            target = si + d + 1
            if target < n:
                j = target // B
                dd1 = d - (j - i - 1) * B
                if j < M and 0 <= dd1 <= 2 * B - 2:
                    cnt += pair[i, j, a, b, dd1]
                dd2 = d - (j - i) * B
                if j + 1 < M and 0 <= dd2 <= 2 * B - 2:
                    cnt += pair[i, j + 1, a, b, dd2]
                for t in range(pend_len[i]):
                    u = pend[i, t]
                    v = u + d + 1
                    if v < n:
                        if applied[u] == a and applied[v] == b:
                            cnt -= 1
                        if X[u] == a and X[v] == b:
                            cnt += 1
                for jj in range(j, min(j + 2, M)):
                    for t in range(pend_len[jj]):
                        v = pend[jj, t]
                        u = v - d - 1
                        if si <= u <= ei and not _pend_contains(pend, pend_len, i, u):
                            if applied[u] == a and applied[v] == b:
                                cnt -= 1
                            if X[u] == a and X[v] == b:
                                cnt += 1
        i += 1
    for u in range(max(i * B, l0), hi0 + 1):
        v = u + d + 1
        if v < n and X[u] == a and X[v] == b:
            cnt += 1
    return cnt


if NUMBA_ENABLED:
    from numba import njit

    _mulmod = njit(cache=True, inline="always")(_mulmod)
    lower_bound = njit(cache=True)(lower_bound)
    hash_codes = njit(cache=True)(hash_codes)
    st_build = njit(cache=True)(st_build)
    st_update = njit(cache=True)(st_update)
    st_range = njit(cache=True)(st_range)
    is_match_tree = njit(cache=True)(is_match_tree)
    case1_scan = njit(cache=True)(case1_scan)
    window_hash_range = njit(cache=True)(window_hash_range)
    scan_windows_equal = njit(cache=True)(scan_windows_equal)
    sparse_vector_build = njit(cache=True)(sparse_vector_build)
    case2_enumerate = njit(cache=True)(case2_enumerate)
    _pend_contains = njit(cache=True)(_pend_contains)
    _pend_refresh = njit(cache=True)(_pend_refresh)
    rp_build_near = njit(cache=True)(rp_build_near)
    rp_pair_slice = njit(cache=True)(rp_pair_slice)
    rp_rebuild_block = njit(cache=True)(rp_rebuild_block)
    rp_update = njit(cache=True)(rp_update)
    rp_query = njit(cache=True)(rp_query)
