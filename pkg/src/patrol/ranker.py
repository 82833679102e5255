"""Harmfulness ranking from vulgarity co-occurrence statistics.

Vulgar words that keep appearing together get a pair strength

    T = (c - occ_a * occ_b / N) / sqrt(c)

where ``c`` is how often the pair co-occurs, ``occ_a``/``occ_b`` are the
words' own occurrence counts, and ``N`` is the corpus-wide token count.
An entry's rank score is the sum of T over the pairs it contains.

Internet text repeats itself (copy-paste floods, character spam), which
inflates ``c`` if every instance counts.  Three counting modes address
that:

* RAW                 -- every instance pair counts; a word appearing k
                         times in one entry contributes k*(k-1)/2 self
                         pairs and k*m pairs with a word appearing m times.
* DEDUP_PER_ENTRY     -- a pair counts at most once per entry that
                         contains it (a self pair needs at least two
                         instances in the entry); occurrence counts become
                         entry counts.
* DEDUP_PLUS_SIMILARITY -- like DEDUP_PER_ENTRY, but surfaces are first
                         mapped to their canonical vulgarity (listed
                         variants directly, unknown distortions through
                         the distortion-tolerant matcher), so spelling
                         variants pool their evidence.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .lexicons import POS, LexiconBundle
from .normalizer import NormalizerConfig, match_canonical
from .tokenizer import Token


class RankerError(ValueError):
    """Raised for undefined statistics or inconsistent inputs."""


class DedupMode(str, Enum):
    RAW = "raw"
    DEDUP_PER_ENTRY = "dedup"
    DEDUP_PLUS_SIMILARITY = "dedup_similarity"


def t_score(c: int, occ_a: int, occ_b: int, n_tokens: int) -> float:
    """Pair strength; undefined when the pair never co-occurs."""
    if c <= 0:
        raise RankerError("t_score is undefined for a pair with no co-occurrences")
    if n_tokens <= 0:
        raise RankerError("t_score needs a positive corpus token count")
    return (c - occ_a * occ_b / n_tokens) / math.sqrt(c)


_MIN_SIMILARITY_LENGTH = 3


@dataclass(frozen=True)
class CooccurrenceTable:
    mode: DedupMode
    n_tokens: int
    occurrences: dict            # unit -> occurrence count (mode semantics)
    pair_counts: dict            # (a, b) sorted -> co-occurrence count
    entry_pairs: dict            # entry id -> tuple of ((a, b), multiplicity)

    def score(self, pair: tuple) -> float:
        c = self.pair_counts.get(pair, 0)
        return t_score(c, self.occurrences[pair[0]], self.occurrences[pair[1]], self.n_tokens)


def _vulgar_units(
    tokens: Sequence[Token],
    surfaces: dict,
    mode: DedupMode,
    bundle: LexiconBundle,
    normalizer_config: NormalizerConfig,
    cache: dict,
) -> list:
    units: list[str] = []
    for token in tokens:
        folded = token.surface.casefold()
        canonical = surfaces.get(folded)
        if canonical is not None:
            units.append(canonical if mode is DedupMode.DEDUP_PLUS_SIMILARITY else folded)
            continue
        if mode is not DedupMode.DEDUP_PLUS_SIMILARITY:
            continue
        if token.pos is not POS.UNKNOWN or len(folded) < _MIN_SIMILARITY_LENGTH:
            continue
        if folded not in cache:
            match = match_canonical(folded, bundle, normalizer_config)
            cache[folded] = match.canonical if match is not None else None
        if cache[folded] is not None:
            units.append(cache[folded])
    return units


def build_cooccurrence(
    ids: Sequence[str],
    token_lists: Sequence[Sequence[Token]],
    bundle: LexiconBundle,
    mode: DedupMode = DedupMode.DEDUP_PLUS_SIMILARITY,
    normalizer_config: NormalizerConfig | None = None,
) -> CooccurrenceTable:
    """Count vulgarity occurrences and co-occurring pairs over a corpus."""
    if len(ids) != len(token_lists):
        raise RankerError("ids and token lists differ in length")
    if len(set(ids)) != len(ids):
        raise RankerError("entry ids must be unique")
    normalizer_config = normalizer_config or NormalizerConfig()
    surfaces = bundle.vulgar_surfaces()
    cache: dict[str, str | None] = {}

    n_tokens = sum(len(tokens) for tokens in token_lists)
    occurrences: Counter = Counter()
    pair_counts: Counter = Counter()
    entry_pairs: dict[str, tuple] = {}

    for entry_id, tokens in zip(ids, token_lists):
        units = _vulgar_units(tokens, surfaces, mode, bundle, normalizer_config, cache)
        counts = Counter(units)
        pairs: Counter = Counter()
        distinct = sorted(counts)
        if mode is DedupMode.RAW:
            occurrences.update(counts)
            for i, a in enumerate(distinct):
                k = counts[a]
                if k >= 2:
                    pairs[(a, a)] = k * (k - 1) // 2
                for b in distinct[i + 1 :]:
                    pairs[(a, b)] = k * counts[b]
        else:
            occurrences.update(distinct)
            for i, a in enumerate(distinct):
                if counts[a] >= 2:
                    pairs[(a, a)] = 1
                for b in distinct[i + 1 :]:
                    pairs[(a, b)] = 1
        pair_counts.update(pairs)
        entry_pairs[entry_id] = tuple(sorted(pairs.items()))

    return CooccurrenceTable(
        mode=mode,
        n_tokens=n_tokens,
        occurrences=dict(occurrences),
        pair_counts=dict(pair_counts),
        entry_pairs=entry_pairs,
    )


@dataclass(frozen=True)
class RankedEntry:
    entry_id: str
    score: float
    pairs: tuple  # ((a, b), multiplicity, pair T) per pair in this entry


def rank_entries(table: CooccurrenceTable) -> list:
    """Entries by summed pair strength, strongest first, ties by id."""
    ranked: list[RankedEntry] = []
    for entry_id, pairs in table.entry_pairs.items():
        total = 0.0
        detail: list[tuple] = []
        for pair, multiplicity in pairs:
            t = table.score(pair)
            total += multiplicity * t
            detail.append((pair, multiplicity, t))
        ranked.append(RankedEntry(entry_id=entry_id, score=total, pairs=tuple(detail)))
    ranked.sort(key=lambda r: (-r.score, r.entry_id))
    return ranked


# ---------------------------------------------------------------------------
# Display highlights
# ---------------------------------------------------------------------------

HIGHLIGHT_PRIORITY = {
    "vulgarity": 40,
    "rule": 30,
    "expression": 20,
    "emoteme": 10,
}


@dataclass(frozen=True)
class Highlight:
    start: int  # byte offsets, like token spans
    end: int
    kind: str
    detail: str

    def __post_init__(self) -> None:
        if self.kind not in HIGHLIGHT_PRIORITY:
            raise RankerError(f"unknown highlight kind {self.kind!r}")
        if not 0 <= self.start < self.end:
            raise RankerError(f"bad highlight span [{self.start}, {self.end})")


def merge_highlights(spans: Sequence[Highlight]) -> list:
    """Resolve overlaps so the result can render as flat, disjoint marks.

    Higher-priority kinds win; within a kind, earlier and longer spans win.
    The survivors come back in text order.
    """
    ordered = sorted(
        spans, key=lambda s: (-HIGHLIGHT_PRIORITY[s.kind], s.start, -(s.end - s.start))
    )
    kept: list[Highlight] = []
    for span in ordered:
        if any(span.start < k.end and k.start < span.end for k in kept):
            continue
        kept.append(span)
    kept.sort(key=lambda s: (s.start, s.end))
    return kept
