"""Shared fixtures: the lexicon bundle and corpus are loaded once per run."""

from __future__ import annotations

import pytest

from patrol.corpus import Dataset
from patrol.lexicons import LexiconBundle, load_lexicons
from patrol.synth import build_corpus
from patrol.tokenizer import AnalyzerConfig, tokenize


@pytest.fixture(scope="session")
def bundle() -> LexiconBundle:
    return load_lexicons()


@pytest.fixture(scope="session")
def analyzer(bundle) -> AnalyzerConfig:
    return AnalyzerConfig.from_bundle(bundle)


@pytest.fixture(scope="session")
def corpus() -> Dataset:
    return build_corpus()


@pytest.fixture(scope="session")
def corpus_tokens(corpus, analyzer):
    """(ids, token_lists, labels) for the labeled synthetic corpus."""
    labeled = corpus.labeled()
    ids = [e.id for e in labeled]
    token_lists = [tokenize(e.text, analyzer) for e in labeled]
    labels = [e.label for e in labeled]
    return ids, token_lists, labels
