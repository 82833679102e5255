"""Similarity matching of slang spellings against vulgar canonicals.

BBS jargon mutates words faster than any lexicon can track ("kimoi" shows up
as kimosu, kishoi, kimoooi, ...).  Instead of enumerating spellings, unknown
words are romanized, squeezed through two cheap heuristics, and matched to the
nearest canonical by edit distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .lexicons import LexiconBundle
from .tokenizer import romanize

MAX_THRESHOLD = 4


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (insert, delete, substitute)."""
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if lb > la:
        a, b, la, lb = b, a, lb, la
    row = list(range(lb + 1))
    for i in range(1, la + 1):
        prev = row[0]
        row[0] = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            cur = row[j]
            if ca == b[j - 1]:
                row[j] = prev
            else:
                best = prev
                if cur < best:
                    best = cur
                if row[j - 1] < best:
                    best = row[j - 1]
                row[j] = best + 1
            prev = cur
    return row[lb]


def apply_heuristics(word: str, strip_prolongations: bool = True) -> str:
    """Collapse emphatic spelling before distance matching.

    Runs of three or more identical characters shrink to a single character
    ("kimoooi" -> "kimoi"); doubled characters are real spelling and stay
    ("shinee" keeps both e's... but "shineee" -> "shine").  Applying the
    function twice changes nothing.
    """
    if not strip_prolongations or len(word) < 3:
        return word
    out: list[str] = []
    run_char = ""
    run_len = 0
    for ch in word:
        if ch == run_char:
            run_len += 1
        else:
            out.append(run_char * (1 if run_len >= 3 else run_len))
            run_char = ch
            run_len = 1
    out.append(run_char * (1 if run_len >= 3 else run_len))
    return "".join(out)


@dataclass(frozen=True)
class NormalizerConfig:
    """Matching knobs.

    Attributes:
        threshold: maximum accepted edit distance (capped at 4; past that the
            false-hit rate swamps any gain).
        anchor_first_letter: only consider canonicals sharing the word's first
            letter.
        strip_prolongations: run apply_heuristics before matching.
        length_scaled: replace the fixed threshold with len(word) // 3,
            still capped at 4.
    """

    threshold: int = 2
    anchor_first_letter: bool = True
    strip_prolongations: bool = True
    length_scaled: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.threshold <= MAX_THRESHOLD:
            raise ValueError(f"threshold must be in 0..{MAX_THRESHOLD}")

    def effective_threshold(self, word: str) -> int:
        if self.length_scaled:
            return min(MAX_THRESHOLD, len(word) // 3)
        return self.threshold


@dataclass(frozen=True)
class Match:
    """A successful canonical match with the applied rule trail."""

    canonical: str
    distance: int
    rule_trace: tuple = field(default_factory=tuple)


def match_canonical(
    word: str,
    bundle: LexiconBundle,
    config: NormalizerConfig = NormalizerConfig(),
) -> Optional[Match]:
    """Map a raw word to the nearest vulgar canonical, or None.

    The word is romanized and heuristically squeezed, candidates are the
    canonicals' readings (first-letter-anchored unless disabled), and the
    nearest within the threshold wins.  Distance ties break toward the higher
    corpus hit rate, then the lexicographically smaller canonical.
    """
    trace: list[str] = []
    normalized = romanize(word, bundle.romanize_table)
    if normalized != word:
        trace.append("romanize")
    if config.strip_prolongations:
        squeezed = apply_heuristics(normalized)
        if squeezed != normalized:
            trace.append("strip_prolongations")
        normalized = squeezed
    if not normalized:
        return None
    if config.anchor_first_letter:
        trace.append("anchor_first_letter")
    if config.length_scaled:
        trace.append("length_scaled_threshold")
    limit = config.effective_threshold(normalized)

    best: Optional[tuple] = None  # (distance, -hit_rate, canonical)
    for canon, entry in bundle.vulgarities.items():
        reading = apply_heuristics(entry.reading) if config.strip_prolongations else entry.reading
        if config.anchor_first_letter and reading[:1] != normalized[:1]:
            continue
        dist = levenshtein(normalized, reading)
        if dist > limit:
            continue
        key = (dist, -entry.hit_rate, canon)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return Match(canonical=best[2], distance=best[0], rule_trace=tuple(trace))
