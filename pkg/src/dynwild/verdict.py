"""Shared query result type."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MatchVerdict:
    """Outcome of an occurrence query.

    ``count`` is filled by matchers that support counting; ``witness``
    is a 1-based window start when one is known.
    """

    matched: bool
    count: int | None = None
    witness: int | None = None

    def __bool__(self) -> bool:
        return self.matched
