"""Edit distance, emphatic-spelling heuristics, and canonical matching."""

from __future__ import annotations

import random
import string

import pytest

from patrol.normalizer import (
    Match,
    NormalizerConfig,
    apply_heuristics,
    levenshtein,
    match_canonical,
)

# ---------------------------------------------------------------------------
# levenshtein: hand-checked oracles
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "a,b,expected",
    [
        ("", "", 0),
        ("", "abc", 3),
        ("abc", "", 3),
        ("abc", "abc", 0),
        ("kitten", "sitting", 3),  # classic textbook pair
        ("flaw", "lawn", 2),
        ("abc", "acb", 2),  # unit-cost model: a transposition costs two
        ("kimosu", "kimoi", 2),  # drop u, swap s->i (checked by hand)
        ("uzeee", "uzai", 3),
        ("ab", "ba", 2),
    ],
)
def test_levenshtein_oracles(a, b, expected):
    assert levenshtein(a, b) == expected


def test_levenshtein_metric_axioms_randomized():
    rng = random.Random(1234)
    alphabet = string.ascii_lowercase[:6]
    for _ in range(2000):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        c = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        dab = levenshtein(a, b)
        assert dab >= 0
        assert (dab == 0) == (a == b)
        assert dab == levenshtein(b, a)
        assert levenshtein(a, c) <= dab + levenshtein(b, c)
        # insert/delete bound: distance never exceeds the longer length
        assert dab <= max(len(a), len(b))


def test_levenshtein_brute_force_agreement():
    """Cross-check against a plain recursive definition on short strings."""

    def slow(a: str, b: str) -> int:
        if not a:
            return len(b)
        if not b:
            return len(a)
        cost = 0 if a[-1] == b[-1] else 1
        return min(
            slow(a[:-1], b) + 1,
            slow(a, b[:-1]) + 1,
            slow(a[:-1], b[:-1]) + cost,
        )

    rng = random.Random(99)
    for _ in range(150):
        a = "".join(rng.choice("abc") for _ in range(rng.randint(0, 5)))
        b = "".join(rng.choice("abc") for _ in range(rng.randint(0, 5)))
        assert levenshtein(a, b) == slow(a, b)


# ---------------------------------------------------------------------------
# apply_heuristics
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "word,expected",
    [
        ("kimoooi", "kimoi"),  # run of three collapses
        ("kimooi", "kimooi"),  # doubles are legitimate spelling
        ("shineee", "shine"),
        ("shinee", "shinee"),
        ("aaa", "a"),
        ("aaaa", "a"),
        ("aabaa", "aabaa"),
        ("ab", "ab"),
        ("", ""),
        ("aaabbbccc", "abc"),
    ],
)
def test_apply_heuristics_oracles(word, expected):
    assert apply_heuristics(word) == expected


def test_apply_heuristics_disabled_and_short_words():
    assert apply_heuristics("kimoooi", strip_prolongations=False) == "kimoooi"
    assert apply_heuristics("aa") == "aa"  # below the length-3 gate


def test_apply_heuristics_idempotent_randomized():
    rng = random.Random(7)
    for _ in range(2000):
        w = "".join(rng.choice("abc!ー") for _ in range(rng.randint(0, 12)))
        once = apply_heuristics(w)
        assert apply_heuristics(once) == once
        # output never contains a run of three or more
        for i in range(len(once) - 2):
            assert not (once[i] == once[i + 1] == once[i + 2])


# ---------------------------------------------------------------------------
# NormalizerConfig
# ---------------------------------------------------------------------------


def test_config_threshold_bounds():
    NormalizerConfig(threshold=0)
    NormalizerConfig(threshold=4)
    with pytest.raises(ValueError):
        NormalizerConfig(threshold=5)
    with pytest.raises(ValueError):
        NormalizerConfig(threshold=-1)


def test_config_length_scaled_threshold():
    cfg = NormalizerConfig(length_scaled=True)
    assert cfg.effective_threshold("ab") == 0
    assert cfg.effective_threshold("abcdef") == 2
    assert cfg.effective_threshold("abcdefghijklmno") == 4  # capped
    fixed = NormalizerConfig(threshold=3)
    assert fixed.effective_threshold("ab") == 3


# ---------------------------------------------------------------------------
# match_canonical
# ---------------------------------------------------------------------------


def test_match_jargon_variants(bundle):
    m = match_canonical("kimosu", bundle)
    assert m is not None and m.canonical == "kimoi" and m.distance == 2

    m = match_canonical("kimoooi", bundle)
    assert m is not None and m.canonical == "kimoi" and m.distance == 0
    assert "strip_prolongations" in m.rule_trace

    m = match_canonical("kimoi", bundle)
    assert m == Match("kimoi", 0, ("anchor_first_letter",))


def test_match_respects_threshold(bundle):
    tight = NormalizerConfig(threshold=1)
    assert match_canonical("kimosu", bundle, tight) is None
    assert match_canonical("kimoi", bundle, tight) is not None


def test_match_first_letter_anchor(bundle):
    # "…imoi" is within distance 2 of "kimoi" but starts differently.
    anchored = NormalizerConfig(anchor_first_letter=True)
    free = NormalizerConfig(anchor_first_letter=False)
    assert match_canonical("qimoi", bundle, anchored) is None
    m = match_canonical("qimoi", bundle, free)
    assert m is not None and m.canonical == "kimoi"


def test_match_kana_input_romanized(bundle):
    m = match_canonical("きもい", bundle)
    assert m is not None and m.canonical == "kimoi" and m.distance == 0
    assert "romanize" in m.rule_trace


def test_match_no_candidate_returns_none(bundle):
    assert match_canonical("zzzzzz", bundle) is None
    assert match_canonical("", bundle) is None


def test_match_keeps_runs_when_disabled(bundle):
    cfg = NormalizerConfig(strip_prolongations=False)
    # without collapsing, "kimoooi" sits 2 edits from "kimoi": still a match,
    # but the trace must not claim the heuristic ran
    m = match_canonical("kimoooi", bundle, cfg)
    assert m is not None and m.distance == 2
    assert "strip_prolongations" not in m.rule_trace
