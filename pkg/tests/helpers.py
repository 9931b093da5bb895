"""Shared oracles and stream generators for the test suite.

Everything here recomputes answers from definitions, independent of the
incremental structures under test.
"""

from __future__ import annotations

import random

from dynwild.hashing import PLACEHOLDER_BYTE, WILDCARD_BYTE


def pair_count_oracle(X, l: int, r: int, a: int, b: int, d: int) -> int:
    """Quadratic census: #(i in [l, r-d-1]) with X_i==a and X_{i+d+1}==b."""
    n = len(X)
    cnt = 0
    for u in range(l, r - d):
        v = u + d + 1
        if v <= n and X[u - 1] == a and X[v - 1] == b:
            cnt += 1
    return cnt


def tprime_oracle(text: bytes, tau: int) -> bytes:
    """Recompute the masked text from scratch."""
    out = bytearray()
    for c in text:
        if c == WILDCARD_BYTE:
            out.append(c)
        elif text.count(c) < tau:
            out.append(PLACEHOLDER_BYTE)
        else:
            out.append(c)
    return bytes(out)


def occ_oracle(text: bytes) -> dict[int, list[int]]:
    """Occurrence sets recomputed by full scan."""
    occ: dict[int, list[int]] = {}
    for i, c in enumerate(text, start=1):
        occ.setdefault(c, []).append(i)
    return occ


class StreamCase:
    """A random instance plus a replayable substitution stream."""

    def __init__(self, seed: int, n_max: int = 200, m_max: int = 20,
                 k_max: int = 3, sigma_max: int = 5, tau_choices=(None,)):
        rnd = random.Random(seed)
        self.rnd = rnd
        self.n = rnd.randint(max(4, n_max // 10), n_max)
        self.m = rnd.randint(1, m_max)
        self.sigma = rnd.randint(2, sigma_max)
        self.k = rnd.randint(1, k_max)
        self.alpha = [chr(97 + t) for t in range(self.sigma)]
        self.text = "".join(rnd.choice(self.alpha) for _ in range(self.n))
        self.pattern = "".join(rnd.choice(self.alpha) for _ in range(self.m))
        self.tau = rnd.choice(tau_choices)

    def wildcards(self) -> int:
        return self.text.count("?") + self.pattern.count("?")

    def next_substitution(self):
        """(target, pos, sym) respecting the wildcard budget; applies locally."""
        rnd = self.rnd
        for _ in range(30):
            if rnd.random() < 0.5:
                i = rnd.randrange(self.n) + 1
                s = rnd.choice(self.alpha + ["?"])
                cand = self.text[: i - 1] + s + self.text[i:]
                if cand.count("?") + self.pattern.count("?") <= self.k:
                    self.text = cand
                    return "T", i, s
            else:
                j = rnd.randrange(self.m) + 1
                s = rnd.choice(self.alpha + ["?"])
                cand = self.pattern[: j - 1] + s + self.pattern[j:]
                if cand.count("?") + self.text.count("?") <= self.k:
                    self.pattern = cand
                    return "P", j, s
        # budget saturated with wildcards everywhere: overwrite one with a letter
        i = self.rnd.randrange(self.n) + 1
        s = self.alpha[0]
        self.text = self.text[: i - 1] + s + self.text[i:]
        return "T", i, s
