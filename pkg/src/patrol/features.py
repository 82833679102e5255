"""Token features and the 3x4 weighting grid.

Three ways to read a token (word+POS, word only, POS only) cross four
weighting schemes.  The occurrence weight is the in-document frequency over
the corpus-wide frequency of the same term; the relative weight divides by
the corpus frequency once more; idf is ln(total entries / entries containing
the term + 1), the division binding tighter than the +1; tf-idf multiplies
the occurrence weight by idf.  Plain in-document counts are available behind
``raw_tf`` for experiments.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .tokenizer import Token


class MainKind(str, Enum):
    WORDPOS = "wordpos"
    WORD = "word"
    POS = "pos"


class Weighting(str, Enum):
    OCCURRENCE = "occ"
    RELATIVE = "rel"
    IDF = "idf"
    TFIDF = "tfidf"


@dataclass(frozen=True)
class FeatureConfig:
    main: MainKind = MainKind.WORDPOS
    weighting: Weighting = Weighting.TFIDF
    raw_tf: bool = False

    @property
    def cell_name(self) -> str:
        return f"{self.main.value}/{self.weighting.value}"


def feature_key(token: Token, main: MainKind) -> str:
    """The vocabulary key a token contributes under a main-feature kind."""
    if main is MainKind.WORD:
        return token.surface.casefold()
    if main is MainKind.POS:
        return token.pos.value
    return f"{token.surface.casefold()}\t{token.pos.value}"


@dataclass(frozen=True)
class Vocabulary:
    """Frozen term statistics from a training corpus.

    ``index`` maps keys to column numbers (sorted key order, so vocabularies
    are reproducible); ``doc_freq`` counts entries containing the key;
    ``corpus_freq`` counts token occurrences across all entries.
    """

    main: MainKind
    index: dict
    doc_freq: dict
    corpus_freq: dict
    total_entries: int

    def __len__(self) -> int:
        return len(self.index)


def build_vocabulary(token_lists: Sequence[Sequence[Token]], main: MainKind) -> Vocabulary:
    doc_freq: Counter = Counter()
    corpus_freq: Counter = Counter()
    for tokens in token_lists:
        keys = [feature_key(t, main) for t in tokens]
        corpus_freq.update(keys)
        doc_freq.update(set(keys))
    index = {key: i for i, key in enumerate(sorted(corpus_freq))}
    return Vocabulary(
        main=main,
        index=index,
        doc_freq=dict(doc_freq),
        corpus_freq=dict(corpus_freq),
        total_entries=len(token_lists),
    )


def weigh(key: str, count_in_doc: int, vocab: Vocabulary, config: FeatureConfig) -> float:
    """Weight of one term for one document under a grid cell.

    The key must exist in the vocabulary; vectorize() drops unseen keys
    before calling.
    """
    corpus = vocab.corpus_freq[key]
    occurrence = float(count_in_doc) if config.raw_tf else count_in_doc / corpus
    if config.weighting is Weighting.OCCURRENCE:
        return occurrence
    if config.weighting is Weighting.RELATIVE:
        return occurrence / corpus
    idf = math.log(vocab.total_entries / vocab.doc_freq[key] + 1.0)
    if config.weighting is Weighting.IDF:
        return idf
    return occurrence * idf


def vectorize(tokens: Iterable[Token], vocab: Vocabulary, config: FeatureConfig) -> dict:
    """Sparse vector {column: weight}; keys unseen in training are dropped."""
    counts: Counter = Counter(feature_key(t, config.main) for t in tokens)
    vec: dict[int, float] = {}
    for key, count in counts.items():
        col = vocab.index.get(key)
        if col is None:
            continue
        vec[col] = weigh(key, count, vocab, config)
    return vec
