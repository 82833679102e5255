"""Seed lexicon bundle: everything the analysis stages match against.

A bundle directory holds plain TSV files (UTF-8, ``#`` comments, tab-separated
columns) so annotators can edit them without touching code:

- ``emotemes.tsv``      emotive-marker patterns with their class
- ``expressions.tsv``   emotive expression lemmas with emotion types
- ``cvs.tsv``           contextual-valence-shifter (negation) patterns
- ``vulgarities.tsv``   vulgar canonicals with POS, reading, hit rate, variants
- ``emoticons.tsv``     known emoticon strings with emotion types
- ``areas.tsv``         eye/mouth/other glyphs for decomposing unknown emoticons
- ``romanize.tsv``      kana-to-latin transliteration table
- ``words.tsv``         base analyzer dictionary (surface, POS)

Loaded bundles are value-immutable: ``register_vulgarity`` returns a new
bundle and never touches the old one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Optional


class LexiconError(ValueError):
    """Raised for malformed lexicon files; message names file and line."""


class POS(str, Enum):
    NOUN = "Noun"
    PROPER_NOUN = "ProperNoun"
    VERB = "Verb"
    ADJECTIVE = "Adjective"
    INTERJECTION = "Interjection"
    PARTICLE = "Particle"
    SYMBOL = "Symbol"
    UNKNOWN = "Unknown"


class Valence(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"


class Activation(Enum):
    DEACTIVATED = "deactivated"
    MODERATE = "moderate"
    ACTIVATED = "activated"


class EmotionType(str, Enum):
    """The ten emotion types, each pinned to a valence/activation cell."""

    JOY = "joy"
    FONDNESS = "fondness"
    RELIEF = "relief"
    GLOOM = "gloom"
    FEAR = "fear"
    ANGER = "anger"
    DISLIKE = "dislike"
    SHAME = "shame"
    EXCITEMENT = "excitement"
    SURPRISE = "surprise"

    @property
    def valence(self) -> Valence:
        return _VALENCE[self]

    @property
    def activation(self) -> Activation:
        return _ACTIVATION[self]


_VALENCE = {
    EmotionType.JOY: Valence.POSITIVE,
    EmotionType.FONDNESS: Valence.POSITIVE,
    EmotionType.RELIEF: Valence.POSITIVE,
    EmotionType.GLOOM: Valence.NEGATIVE,
    EmotionType.FEAR: Valence.NEGATIVE,
    EmotionType.ANGER: Valence.NEGATIVE,
    EmotionType.DISLIKE: Valence.NEGATIVE,
    EmotionType.SHAME: Valence.BOTH,
    EmotionType.EXCITEMENT: Valence.BOTH,
    EmotionType.SURPRISE: Valence.BOTH,
}

_ACTIVATION = {
    EmotionType.GLOOM: Activation.DEACTIVATED,
    EmotionType.RELIEF: Activation.DEACTIVATED,
    EmotionType.JOY: Activation.MODERATE,
    EmotionType.FONDNESS: Activation.MODERATE,
    EmotionType.DISLIKE: Activation.MODERATE,
    EmotionType.SHAME: Activation.ACTIVATED,
    EmotionType.EXCITEMENT: Activation.ACTIVATED,
    EmotionType.FEAR: Activation.ACTIVATED,
    EmotionType.ANGER: Activation.ACTIVATED,
    EmotionType.SURPRISE: Activation.ACTIVATED,
}

# accepted spellings in data files -> canonical type
_EMOTION_ALIASES = {t.value: t for t in EmotionType}
_EMOTION_ALIASES["sadness"] = EmotionType.GLOOM
_EMOTION_ALIASES["surprize"] = EmotionType.SURPRISE


def parse_emotion(name: str) -> EmotionType:
    try:
        return _EMOTION_ALIASES[name.strip().lower()]
    except KeyError:
        raise LexiconError(f"unknown emotion type {name!r}") from None


class EmotemeClass(str, Enum):
    INTERJECTION = "Interjection"
    EXCLAMATION = "Exclamation"
    VULGARITY = "Vulgarity"
    MIMETIC = "Mimetic"
    EMOTICON = "Emoticon"


@dataclass(frozen=True)
class EmotemeEntry:
    """An emotive-marker pattern.

    ``surface`` is a literal string, optionally ending in ``*`` meaning the
    final literal character may repeat one or more extra times.
    """

    surface: str
    emoteme_class: EmotemeClass


@dataclass(frozen=True)
class EmotiveExpression:
    lemma: str
    emotion_types: frozenset  # frozenset[EmotionType], never empty


@dataclass(frozen=True)
class CvsPattern:
    pattern: str


@dataclass(frozen=True)
class VulgarityEntry:
    """A vulgar word: canonical spelling plus known jargon variants."""

    canonical: str
    pos: POS
    reading: str
    hit_rate: int
    variants: tuple = ()

    def __post_init__(self) -> None:
        if not self.canonical:
            raise LexiconError("vulgarity canonical must be non-empty")
        if not self.reading:
            raise LexiconError(f"vulgarity {self.canonical!r}: reading must be non-empty")
        if self.hit_rate < 0:
            raise LexiconError(f"vulgarity {self.canonical!r}: hit_rate must be >= 0")


@dataclass(frozen=True)
class LexiconBundle:
    """All lexical data, loaded once and shared read-only."""

    emotemes: tuple  # tuple[EmotemeEntry, ...]
    expressions: tuple  # tuple[EmotiveExpression, ...]
    cvs_patterns: tuple  # tuple[CvsPattern, ...]
    vulgarities: Mapping  # canonical -> VulgarityEntry
    emoticons: Mapping  # raw string -> frozenset[EmotionType]
    eyes: Mapping  # glyph -> frozenset[EmotionType]
    mouths: Mapping  # glyph -> frozenset[EmotionType]
    other_glyphs: Mapping  # glyph -> frozenset[EmotionType] (usually empty sets)
    romanize_table: Mapping  # kana string -> latin string
    words: Mapping  # surface -> POS (base analyzer dictionary)

    def vulgar_surfaces(self) -> dict:
        """All searchable vulgar surfaces (canonicals and variants) -> canonical."""
        out: dict[str, str] = {}
        for canon, entry in self.vulgarities.items():
            out[canon] = canon
            for v in entry.variants:
                out.setdefault(v, canon)
        return out


def default_dir() -> Path:
    """Directory of the lexicon files shipped with the package."""
    return Path(__file__).parent / "data" / "lexicons"


def _rows(path: Path, n_cols: int, min_cols: Optional[int] = None):
    """Yield (lineno, columns) for each data row of a TSV file."""
    want = min_cols if min_cols is not None else n_cols
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < want or len(cols) > n_cols:
                raise LexiconError(
                    f"{path.name}:{lineno}: expected {want}..{n_cols} "
                    f"tab-separated columns, got {len(cols)}"
                )
            while len(cols) < n_cols:
                cols.append("")
            yield lineno, cols


def _parse_emotion_set(path: Path, lineno: int, raw: str, allow_empty: bool = False):
    names = [n for n in raw.split(",") if n.strip()]
    if not names:
        if allow_empty:
            return frozenset()
        raise LexiconError(f"{path.name}:{lineno}: emotion list must not be empty")
    try:
        return frozenset(parse_emotion(n) for n in names)
    except LexiconError as err:
        raise LexiconError(f"{path.name}:{lineno}: {err}") from None


def load_lexicons(directory: str | Path | None = None) -> LexiconBundle:
    """Load a bundle from a lexicon directory (the shipped one by default);
    errors name file and line."""
    d = Path(directory) if directory is not None else default_dir()

    emotemes = []
    seen_surfaces = set()
    path = d / "emotemes.tsv"
    for lineno, (surface, klass) in _rows(path, 2):
        if surface in seen_surfaces:
            raise LexiconError(f"{path.name}:{lineno}: duplicate surface {surface!r}")
        seen_surfaces.add(surface)
        try:
            emotemes.append(EmotemeEntry(surface, EmotemeClass(klass)))
        except ValueError:
            raise LexiconError(
                f"{path.name}:{lineno}: unknown emoteme class {klass!r}"
            ) from None

    expressions = []
    seen_lemmas = set()
    path = d / "expressions.tsv"
    for lineno, (lemma, emotions) in _rows(path, 2):
        if lemma in seen_lemmas:
            raise LexiconError(f"{path.name}:{lineno}: duplicate lemma {lemma!r}")
        seen_lemmas.add(lemma)
        expressions.append(
            EmotiveExpression(lemma, _parse_emotion_set(path, lineno, emotions))
        )

    cvs = []
    seen_cvs = set()
    path = d / "cvs.tsv"
    for lineno, (pattern,) in _rows(path, 1):
        if pattern in seen_cvs:
            raise LexiconError(f"{path.name}:{lineno}: duplicate pattern {pattern!r}")
        seen_cvs.add(pattern)
        cvs.append(CvsPattern(pattern))

    vulgarities: dict[str, VulgarityEntry] = {}
    path = d / "vulgarities.tsv"
    for lineno, (canon, pos, reading, hit_rate, variants) in _rows(path, 5, min_cols=4):
        if canon in vulgarities:
            raise LexiconError(f"{path.name}:{lineno}: duplicate canonical {canon!r}")
        try:
            pos_val = POS(pos)
        except ValueError:
            raise LexiconError(f"{path.name}:{lineno}: unknown POS {pos!r}") from None
        try:
            rate = int(hit_rate)
        except ValueError:
            raise LexiconError(
                f"{path.name}:{lineno}: hit_rate {hit_rate!r} is not an integer"
            ) from None
        var_tuple = tuple(v for v in variants.split(",") if v.strip())
        try:
            vulgarities[canon] = VulgarityEntry(canon, pos_val, reading, rate, var_tuple)
        except LexiconError as err:
            raise LexiconError(f"{path.name}:{lineno}: {err}") from None

    emoticons: dict[str, frozenset] = {}
    path = d / "emoticons.tsv"
    for lineno, (raw, emotions) in _rows(path, 2):
        if raw in emoticons:
            raise LexiconError(f"{path.name}:{lineno}: duplicate emoticon {raw!r}")
        emoticons[raw] = _parse_emotion_set(path, lineno, emotions)

    eyes: dict[str, frozenset] = {}
    mouths: dict[str, frozenset] = {}
    other: dict[str, frozenset] = {}
    path = d / "areas.tsv"
    for lineno, (glyph, area, emotions) in _rows(path, 3, min_cols=2):
        if len(glyph) != 1:
            raise LexiconError(f"{path.name}:{lineno}: glyph must be one character")
        table = {"eye": eyes, "mouth": mouths, "other": other}.get(area)
        if table is None:
            raise LexiconError(f"{path.name}:{lineno}: unknown area {area!r}")
        if glyph in table:
            raise LexiconError(f"{path.name}:{lineno}: duplicate {area} glyph {glyph!r}")
        table[glyph] = _parse_emotion_set(path, lineno, emotions, allow_empty=True)

    romanize: dict[str, str] = {}
    path = d / "romanize.tsv"
    for lineno, (kana, latin) in _rows(path, 2):
        if kana in romanize:
            raise LexiconError(f"{path.name}:{lineno}: duplicate kana {kana!r}")
        if not latin:
            raise LexiconError(f"{path.name}:{lineno}: empty transliteration")
        romanize[kana] = latin

    words: dict[str, POS] = {}
    path = d / "words.tsv"
    for lineno, (surface, pos) in _rows(path, 2):
        if surface in words:
            raise LexiconError(f"{path.name}:{lineno}: duplicate word {surface!r}")
        try:
            words[surface] = POS(pos)
        except ValueError:
            raise LexiconError(f"{path.name}:{lineno}: unknown POS {pos!r}") from None

    return LexiconBundle(
        emotemes=tuple(emotemes),
        expressions=tuple(expressions),
        cvs_patterns=tuple(cvs),
        vulgarities=MappingProxyType(vulgarities),
        emoticons=MappingProxyType(emoticons),
        eyes=MappingProxyType(eyes),
        mouths=MappingProxyType(mouths),
        other_glyphs=MappingProxyType(other),
        romanize_table=MappingProxyType(romanize),
        words=MappingProxyType(words),
    )


def register_vulgarity(bundle: LexiconBundle, entry: VulgarityEntry) -> LexiconBundle:
    """Return a new bundle with ``entry`` added; the input bundle is untouched."""
    if entry.canonical in bundle.vulgarities:
        raise LexiconError(f"vulgarity {entry.canonical!r} already registered")
    new_vulg = dict(bundle.vulgarities)
    new_vulg[entry.canonical] = entry
    return LexiconBundle(
        emotemes=bundle.emotemes,
        expressions=bundle.expressions,
        cvs_patterns=bundle.cvs_patterns,
        vulgarities=MappingProxyType(new_vulg),
        emoticons=bundle.emoticons,
        eyes=bundle.eyes,
        mouths=bundle.mouths,
        other_glyphs=bundle.other_glyphs,
        romanize_table=bundle.romanize_table,
        words=bundle.words,
    )
