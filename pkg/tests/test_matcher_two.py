import random

import pytest

from dynwild import bruteforce
from dynwild.hashing import WILDCARD_BYTE
from dynwild.matcher_two import WILDCARD_CODE, TwoMatcher


def check_theta_invariants(mch):
    """Coded iff safely frequent, zero iff safely rare, all codes distinct."""
    seen = {}
    for sym, lst in mch.index.occ.items():
        if sym == WILDCARD_BYTE:
            assert mch.theta_of(sym) == WILDCARD_CODE
            continue
        code = mch.theta_of(sym)
        cnt = len(lst)
        if cnt > mch.tau:
            assert code != 0, f"frequent symbol {chr(sym)} uncoded"
        if cnt <= mch.tau // 2:
            assert code == 0, f"rare symbol {chr(sym)} still coded"
        if code:
            assert code >= 2
            assert code not in seen, "duplicate code"
            seen[code] = sym
    # mapped text is theta applied elementwise
    mapped = mch.mapped_text()
    for t, c in enumerate(mch.index.text):
        assert mapped[t] == mch.theta_of(c)


def reconstruct_pattern(mch) -> str:
    p = ["?"] * mch.m
    for pos, sym in mch.C.items():
        p[pos - 1] = chr(sym)
    return "".join(p)


class TestBuild:
    def test_all_distinct_text_maps_to_zero(self):
        mch = TwoMatcher("abcd", "??", tau=2)
        assert list(mch.mapped_text()) == [0, 0, 0, 0]

    def test_frequent_symbols_get_distinct_codes(self):
        mch = TwoMatcher("aaaabbbbcc", "?", tau=3)
        ca, cb, cc = mch.theta_of("a"), mch.theta_of("b"), mch.theta_of("c")
        assert ca >= 2 and cb >= 2 and ca != cb
        assert cc == 0

    def test_fresh_build_has_empty_pending(self):
        mch = TwoMatcher("aaaabbbb", "??", tau=2)
        assert all(p == 0 for p in mch.rp.pending_sizes())

    def test_rejects_three_non_wildcards(self):
        with pytest.raises(ValueError, match="at most two"):
            TwoMatcher("abcabc", "abc")


class TestPatternUpdates:
    def test_substitute_grows_c(self):
        mch = TwoMatcher("abab", "a???")
        assert len(mch.C) == 1
        mch.substitute_pattern(3, "b")
        assert mch.C == {1: ord("a"), 3: ord("b")}

    def test_third_symbol_rejected(self):
        mch = TwoMatcher("abab", "ab??")
        with pytest.raises(ValueError, match="third"):
            mch.substitute_pattern(4, "a")
        mch.substitute_pattern(1, "b")  # replacing an existing slot is fine

    def test_insert_shifts_right(self):
        mch = TwoMatcher("abab", "a?b?")
        mch.insert_pattern(2, "?")
        assert mch.m == 5
        assert mch.C == {1: ord("a"), 4: ord("b")}

    def test_substitute_wildcard_shrinks_c(self):
        mch = TwoMatcher("abab", "ab??")
        mch.substitute_pattern(1, "?")
        assert mch.C == {2: ord("b")}

    def test_delete_shifts_left(self):
        mch = TwoMatcher("abab", "?a?b")
        mch.delete_pattern(1)
        assert mch.m == 3
        assert mch.C == {1: ord("a"), 3: ord("b")}

    def test_delete_last_symbol_rejected(self):
        mch = TwoMatcher("abab", "a")
        with pytest.raises(ValueError, match="non-empty"):
            mch.delete_pattern(1)

    def test_bookkeeping_matches_string_replay(self):
        rnd = random.Random(3)
        mch = TwoMatcher("abcabcab", "a??b")
        ref = "a??b"
        for _ in range(300):
            op = rnd.random()
            if op < 0.4:
                j = rnd.randrange(len(ref)) + 1
                nw = sum(1 for c in ref if c != "?")
                choices = ["?"]
                if ref[j - 1] != "?" or nw < 2:
                    choices += ["a", "b", "c"]
                s = rnd.choice(choices)
                ref = ref[: j - 1] + s + ref[j:]
                mch.substitute_pattern(j, s)
            elif op < 0.7:
                j = rnd.randrange(len(ref) + 1) + 1
                nw = sum(1 for c in ref if c != "?")
                s = rnd.choice(["?"] + (["a", "b"] if nw < 2 else []))
                ref = ref[: j - 1] + s + ref[j - 1 :]
                mch.insert_pattern(j, s)
            elif len(ref) > 1:
                j = rnd.randrange(len(ref)) + 1
                ref = ref[: j - 1] + ref[j:]
                mch.delete_pattern(j)
            assert reconstruct_pattern(mch) == ref


class TestTextUpdates:
    def test_plain_update_single_rp_write(self):
        mch = TwoMatcher("aaaabbbb", "??", tau=2)
        before = mch.rp.counters["updates"]
        mch.substitute_text(1, "b")  # both symbols stay on their side of tau
        assert mch.rp.counters["updates"] == before + 1

    def test_hysteresis_single_promotion(self):
        # drive one symbol from tau//2 up to tau+1: exactly one promotion
        tau = 4
        text = "zz" + "x" * 20  # z occurs twice = tau//2
        mch = TwoMatcher(text, "??", tau=tau)
        assert mch.theta_of("z") == 0
        promoted_before = mch.counters["promotions"]
        for i in range(3, 6):  # counts 3, 4, 5 -> crosses tau at 5
            mch.substitute_text(i, "z")
            check_theta_invariants(mch)
        assert mch.theta_of("z") != 0
        assert mch.counters["promotions"] == promoted_before + 1

    def test_mapped_text_oracle_stream(self):
        rnd = random.Random(11)
        n = 60
        text = "".join(rnd.choice("abc") for _ in range(n))
        mch = TwoMatcher(text, "a?b", tau=5)
        for _ in range(400):
            mch.substitute_text(rnd.randrange(n) + 1, rnd.choice("abcd?"))
            check_theta_invariants(mch)


class TestQuery:
    def test_all_wildcards_counts_windows(self):
        mch = TwoMatcher("abcdef", "???")
        v = mch.query()
        assert v.matched and v.count == 4

    def test_pattern_longer_than_text(self):
        mch = TwoMatcher("ab", "????")
        v = mch.query()
        assert not v.matched and v.count == 0

    def test_single_symbol_rank_count(self):
        mch = TwoMatcher("aabbccba", "??b?")
        # windows start 1..5, b must sit at offset 2: positions 3..7
        assert mch.query().count == 3

    def test_text_wildcards_match_anything(self):
        mch = TwoMatcher("a?cb", "a??b")
        v = mch.query()
        assert v.matched and v.count == 1

    @pytest.mark.parametrize("seed", range(8))
    def test_equivalence_with_bruteforce(self, seed):
        rnd = random.Random(seed)
        n = rnd.randint(6, 120)
        sigma = rnd.randint(2, 6)
        alpha = [chr(97 + t) for t in range(sigma)]
        text = "".join(rnd.choice(alpha) for _ in range(n))
        pattern = "?"
        mch = TwoMatcher(text, pattern, tau=rnd.choice([1, 2, 4, None]))
        for _ in range(250):
            op = rnd.random()
            if op < 0.5:
                i = rnd.randrange(n) + 1
                s = rnd.choice(alpha + ["?"])
                text = text[: i - 1] + s + text[i:]
                mch.substitute_text(i, s)
            elif op < 0.75:
                j = rnd.randrange(len(pattern)) + 1
                nw = sum(1 for c in pattern if c != "?")
                choices = ["?"] + (alpha if (pattern[j - 1] != "?" or nw < 2) else [])
                s = rnd.choice(choices)
                pattern = pattern[: j - 1] + s + pattern[j:]
                mch.substitute_pattern(j, s)
            elif op < 0.9:
                j = rnd.randrange(len(pattern) + 1) + 1
                nw = sum(1 for c in pattern if c != "?")
                s = rnd.choice(["?"] + (alpha if nw < 2 else []))
                pattern = pattern[: j - 1] + s + pattern[j - 1 :]
                mch.insert_pattern(j, s)
            elif len(pattern) > 1:
                j = rnd.randrange(len(pattern)) + 1
                pattern = pattern[: j - 1] + pattern[j:]
                mch.delete_pattern(j)
            want = bruteforce.count_occurrences(pattern, text)
            v = mch.query()
            assert v.count == want and v.matched == (want > 0), (pattern, text)
