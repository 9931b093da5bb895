"""Dynamic substring matching with wildcards on both sides.

Engines
-------
* :class:`GeneralMatcher` -- up to k wildcards anywhere, substitutions on
  text and pattern, existence queries.
* :class:`TwoMatcher` -- patterns with at most two concrete symbols;
  substitutions plus pattern insert/delete, existence and exact counts.
* :class:`SparseMatcher` -- immutable wildcard slots, text without
  wildcards, O(1)-delta updates.
* :class:`RangePairStructure` -- the underlying dynamic gapped pair
  counter, usable on its own.
* :mod:`dynwild.hardness` -- orthogonal-vectors reduction harness.
"""

from ._backend import backend_name
from .hashing import (
    HashContext,
    RangeHashTree,
    choose_context,
    hash_concat,
    hash_full,
    masked_hash,
)
from .matcher_general import CompletionEnumerator, GeneralMatcher, PatternStore, default_tau
from .matcher_sparse import SparseMatcher
from .matcher_two import SymbolMap, TwoMatcher
from .range_pair import RangePairStructure
from .text_index import TextIndex
from .verdict import MatchVerdict

__all__ = [
    "HashContext",
    "RangeHashTree",
    "choose_context",
    "hash_full",
    "hash_concat",
    "masked_hash",
    "TextIndex",
    "PatternStore",
    "CompletionEnumerator",
    "GeneralMatcher",
    "default_tau",
    "TwoMatcher",
    "SymbolMap",
    "SparseMatcher",
    "RangePairStructure",
    "MatchVerdict",
    "backend_name",
]

__version__ = "0.1.0"
