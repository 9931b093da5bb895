"""Orthogonal-vectors reduction driven through a live matcher.

A set of binary vectors maps to one text listing every vector between
delimiters; vector i becomes a pattern template with each 1 forced to
'0' and each 0 relaxed to '?'.  The template of vector i matches the
slot of vector j exactly when the two vectors are orthogonal, so one
pass that rewrites the live pattern into each template and queries after
each rewrite decides the instance with n queries and at most d
substitutions per step.  A brute-force inner-product solver provides the
reference answer.

Orthogonality is required between *distinct* vectors, while the matcher
also sees the template aligned with its own slot; a position-reporting
brute scan therefore filters out self-only matches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bruteforce
from .matcher_general import GeneralMatcher

_ENGINE_DELIMITER = ord("$")  # stands in for '#', which the text interface reserves


@dataclass(frozen=True)
class OVInstance:
    """A set of equal-dimension binary vectors plus the encoding delimiter."""

    vectors: tuple[tuple[int, ...], ...]
    delimiter: str = "#"

    def __init__(self, vectors, delimiter: str = "#"):
        vecs = tuple(tuple(int(x) for x in v) for v in vectors)
        if not vecs:
            raise ValueError("need at least one vector")
        d = len(vecs[0])
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if any(len(v) != d for v in vecs):
            raise ValueError("all vectors must share one dimension")
        if any(x not in (0, 1) for v in vecs for x in v):
            raise ValueError("vectors must be binary")
        if delimiter in ("0", "1", "?") or len(delimiter) != 1:
            raise ValueError("delimiter must be a single symbol outside {0, 1, ?}")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "delimiter", delimiter)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def d(self) -> int:
        return len(self.vectors[0])


def ov_reduce(inst: OVInstance) -> tuple[bytes, list[bytes]]:
    """Text and per-vector pattern templates of the reduction.

    Text: ``# V_1 # V_2 # ... # V_n #``.  Template for V_i: ``# V'_i #``
    with every 1 of V_i written as '0' and every 0 as '?'.
    """
    delim = inst.delimiter.encode()
    text = delim + delim.join(
        "".join(str(x) for x in v).encode() for v in inst.vectors
    ) + delim
    templates = [
        delim + "".join("0" if x else "?" for x in v).encode() + delim
        for v in inst.vectors
    ]
    return text, templates


def ov_brute(inst: OVInstance) -> bool:
    """Reference answer: any distinct pair with inner product zero."""
    V = np.array(inst.vectors, dtype=np.int64)
    G = V @ V.T
    np.fill_diagonal(G, 1)
    return bool((G == 0).any())


def ov_solve_via_matcher(inst: OVInstance, matcher_factory=None,
                         tau: int | None = None) -> tuple[bool, dict]:
    """Decide the instance by replaying the reduction on a matcher.

    Returns (answer, instrumentation); the counters record exactly one
    query per vector and the total number of pattern substitutions.
    """
    n, d = inst.n, inst.d
    text, templates = ov_reduce(inst)
    delim = inst.delimiter.encode()[0]
    if delim == ord("#"):
        # '#' is reserved by the text interface; rename it for the engine
        # (matching is invariant under injective symbol renaming)
        engine_delim = _ENGINE_DELIMITER
    else:
        engine_delim = delim
    trans = bytes.maketrans(bytes([delim]), bytes([engine_delim]))
    engine_text = text.translate(trans)
    engine_templates = [t.translate(trans) for t in templates]

    if matcher_factory is None:
        matcher_factory = lambda t, p, k: GeneralMatcher(t, p, k=k, tau=tau)
    matcher = matcher_factory(engine_text, engine_templates[0], max(1, d))

    found = False
    substitutions = 0
    queries = 0
    current = bytearray(engine_templates[0])
    for i, tpl in enumerate(engine_templates, start=1):
        for pos in range(len(tpl)):
            if current[pos] != tpl[pos]:
                matcher.substitute_pattern(pos + 1, tpl[pos])
                current[pos] = tpl[pos]
                substitutions += 1
        queries += 1
        if not found and matcher.query().matched:
            positions = bruteforce.occurrence_positions(bytes(current), engine_text)
            slots = {(p - 1) // (d + 1) + 1 for p in positions}
            if any(slot != i for slot in slots):
                found = True
    return found, {"queries": queries, "substitutions": substitutions}
