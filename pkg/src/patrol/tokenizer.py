"""Dictionary tokenizer and romanizer.

A deliberately small stand-in for a full morphological analyzer: greedy
longest-match against a plain surface dictionary, with unmatched maximal runs
of a single script class becoming ``Unknown`` tokens.  That is all the
downstream stages need, it runs everywhere, and registered vulgarities get
first-class treatment (they win ties against ordinary dictionary words).

All token offsets are byte offsets into the UTF-8 encoding of the input so
they survive serialization to clients in other languages.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .lexicons import POS, LexiconBundle

# re-exported for callers that think in tokenizer terms
__all__ = [
    "POS",
    "Token",
    "AnalyzerConfig",
    "tokenize",
    "romanize",
    "script_class",
    "byte_offsets",
]

_SOKUON = "っッ"
_PROLONG = "ーｰ"
_VOWELS = "aeiou"

#: particles that mark emphasis when they close a sentence
DEFAULT_EMPHATIC_PARTICLES = frozenset({"zo", "yo", "ne", "naa", "zee"})


def script_class(ch: str) -> str:
    """Coarse script class: latin, kana, ideograph, digit, symbol or space."""
    if ch.isspace():
        return "space"
    o = ord(ch)
    if ch.isdigit():
        return "digit"
    if 0x3041 <= o <= 0x30FF or ch in _PROLONG or 0xFF66 <= o <= 0xFF9D:
        return "kana"
    if 0x4E00 <= o <= 0x9FFF or 0x3400 <= o <= 0x4DBF:
        return "ideograph"
    cat = unicodedata.category(ch)
    if cat.startswith("L"):
        return "latin"
    return "symbol"


def byte_offsets(text: str) -> list[int]:
    """Prefix array: byte_offsets(t)[i] is the UTF-8 byte offset of char i."""
    offs = [0]
    total = 0
    for ch in text:
        total += len(ch.encode("utf-8"))
        offs.append(total)
    return offs


@dataclass(frozen=True)
class Token:
    """One analyzed token; ``start``/``end`` are byte offsets into the text."""

    surface: str
    pos: POS
    start: int
    end: int


@dataclass(frozen=True)
class AnalyzerConfig:
    """Tokenizer setup: the surface dictionary plus emphasis particles.

    ``dictionary`` maps lowercased surfaces to POS; ``vulgar_keys`` marks the
    surfaces that came from the vulgarity lexicon so they outrank equally long
    ordinary words.
    """

    dictionary: dict
    vulgar_keys: frozenset
    emphatic_particles: frozenset = DEFAULT_EMPHATIC_PARTICLES
    romanize_table: dict = field(default_factory=dict)
    _max_key: int = 0

    @classmethod
    def from_bundle(
        cls,
        bundle: LexiconBundle,
        extra_words: Optional[dict] = None,
        emphatic_particles: Iterable = DEFAULT_EMPHATIC_PARTICLES,
    ) -> "AnalyzerConfig":
        """Build the analyzer dictionary from a lexicon bundle.

        Layering, later entries overriding earlier ones: base words, CVS
        words, expression lemmas (single-word ones; POS guessed from the
        ending since the lexicon does not carry it), lexical emotemes, and
        finally vulgar canonicals and variants, which therefore win every
        equal-length tie.
        """
        d: dict[str, POS] = {}
        for surface, pos in bundle.words.items():
            d[surface.casefold()] = pos
        for pat in bundle.cvs_patterns:
            if " " not in pat.pattern:
                d.setdefault(pat.pattern.casefold(), POS.VERB)
        for expr in bundle.expressions:
            lemma = expr.lemma.casefold()
            if " " in lemma or lemma in d:
                continue
            d[lemma] = _guess_pos(lemma)
        for em in bundle.emotemes:
            surface = em.surface.rstrip("*").casefold()
            if " " in surface or not surface or surface in d:
                continue
            if surface.isalpha():
                d[surface] = POS.INTERJECTION
        vulgar = set()
        for canon, entry in bundle.vulgarities.items():
            for surface in (canon, *entry.variants):
                key = surface.casefold()
                d[key] = entry.pos
                vulgar.add(key)
        if extra_words:
            for surface, pos in extra_words.items():
                d[surface.casefold()] = pos
        return cls(
            dictionary=d,
            vulgar_keys=frozenset(vulgar),
            emphatic_particles=frozenset(emphatic_particles),
            romanize_table=dict(bundle.romanize_table),
            _max_key=max(len(k) for k in d) if d else 0,
        )


def _guess_pos(lemma: str) -> POS:
    if lemma.endswith("i") and not lemma.endswith("chi"):
        return POS.ADJECTIVE
    if lemma.endswith(("u", "ru", "ku", "su", "mu", "bu", "gu", "nu", "tsu")):
        return POS.VERB
    return POS.NOUN


def tokenize(text: str, config: AnalyzerConfig) -> list[Token]:
    """Greedy longest-match tokenization.

    Dictionary matches are attempted at every position; where none begins,
    characters of one script class accumulate into a single Unknown token.
    Whitespace separates tokens and belongs to none.  Token spans tile the
    input: every non-whitespace byte is covered by exactly one token.
    """
    lower = text.casefold()
    if len(lower) != len(text):  # casefold may change length (e.g. ß)
        lower = text.lower()
    if len(lower) != len(text):  # give up on case folding, keep offsets exact
        lower = text
    offs = byte_offsets(text)
    tokens: list[Token] = []
    n = len(text)
    i = 0
    unk_start = -1  # char index where the current unknown run began, or -1

    def flush_unknown(upto: int) -> None:
        nonlocal unk_start
        if unk_start >= 0:
            tokens.append(
                Token(text[unk_start:upto], POS.UNKNOWN, offs[unk_start], offs[upto])
            )
            unk_start = -1

    while i < n:
        if text[i].isspace():
            flush_unknown(i)
            i += 1
            continue
        key, pos = _longest_match(lower, i, config)
        if key is not None:
            flush_unknown(i)
            j = i + len(key)
            tokens.append(Token(text[i:j], pos, offs[i], offs[j]))
            i = j
            continue
        if unk_start >= 0 and script_class(text[i]) != script_class(text[unk_start]):
            flush_unknown(i)
        if unk_start < 0:
            unk_start = i
        i += 1
    flush_unknown(n)
    return tokens


def _longest_match(lower: str, i: int, config: AnalyzerConfig):
    """Longest dictionary surface starting at i; vulgar keys win length ties."""
    d = config.dictionary
    limit = min(config._max_key, len(lower) - i)
    for length in range(limit, 0, -1):
        cand = lower[i : i + length]
        if cand in d:
            return cand, d[cand]
    return None, None


def romanize(text: str, table: dict) -> str:
    """Transliterate kana to latin; ASCII is lowercased, the rest passes through.

    The table is applied greedy-longest-first so digraphs work.  Two marks are
    handled positionally rather than by the table: the sokuon doubles the next
    syllable's leading consonant, and the long-vowel mark repeats the last
    emitted vowel.  Output is stable under a second application.
    """
    if not table:
        max_key = 0
    else:
        max_key = max(len(k) for k in table)
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _SOKUON:
            nxt, _ = _table_match(text, i + 1, table, max_key)
            if nxt is not None:
                mapped = table[nxt]
                if mapped and mapped[0] not in _VOWELS:
                    out.append(mapped[0])
            i += 1
            continue
        if ch in _PROLONG:
            emitted = "".join(out)
            last_vowel = next((c for c in reversed(emitted) if c in _VOWELS), None)
            if last_vowel:
                out.append(last_vowel)
            i += 1
            continue
        key, _ = _table_match(text, i, table, max_key)
        if key is not None:
            out.append(table[key])
            i += len(key)
            continue
        out.append(ch.lower() if ch.isascii() else ch)
        i += 1
    return "".join(out)


def _table_match(text: str, i: int, table: dict, max_key: int):
    limit = min(max_key, len(text) - i)
    for length in range(limit, 0, -1):
        cand = text[i : i + length]
        if cand in table:
            return cand, table[cand]
    return None, None
