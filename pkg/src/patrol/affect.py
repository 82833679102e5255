"""Two-step emotive analysis with contextual valence shifting.

Step one decides *whether* an entry is emotive at all by collecting emotemes:
lexical markers, interjection tokens, emphatic sentence-final particles,
exclamation marks, ellipses, prolongation runs, and emoticons.  The emoteme
count, capped at five, is the emotive value.

Step two runs only on emotive text: emotive-expression lemmas name the
specific emotion types, and a negation pattern right after an expression
flips each type along the valence/activation plane via the flip table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .emoticons import extract_emoticons, analyze_emoticon
from .lexicons import EmotemeClass, EmotionType, LexiconBundle
from .tokenizer import POS, AnalyzerConfig, byte_offsets, tokenize

#: default valence shifter: negation mirrors valence and activation, the
#: Moderate band pairing with itself, so e.g. "not disliked" lands on the
#: positive moderate types and "not gloomy" on the activated ones.
DEFAULT_FLIP_TABLE: Mapping = {
    EmotionType.DISLIKE: frozenset({EmotionType.JOY, EmotionType.FONDNESS}),
    EmotionType.JOY: frozenset({EmotionType.DISLIKE}),
    EmotionType.FONDNESS: frozenset({EmotionType.DISLIKE}),
    EmotionType.GLOOM: frozenset({EmotionType.EXCITEMENT, EmotionType.JOY}),
    EmotionType.FEAR: frozenset({EmotionType.RELIEF}),
    EmotionType.ANGER: frozenset({EmotionType.RELIEF}),
    EmotionType.RELIEF: frozenset({EmotionType.FEAR, EmotionType.ANGER}),
    EmotionType.EXCITEMENT: frozenset({EmotionType.GLOOM}),
    EmotionType.SHAME: frozenset({EmotionType.SHAME}),
    EmotionType.SURPRISE: frozenset({EmotionType.SURPRISE}),
}

EMOTIVE_VALUE_CAP = 5


@dataclass(frozen=True)
class Span:
    """An annotated region; offsets are bytes into the UTF-8 text."""

    start: int
    end: int
    kind: str  # "emoteme" | "expression"
    value: str


@dataclass(frozen=True)
class EmotemeHit:
    surface: str
    emoteme_class: EmotemeClass
    start: int
    end: int


@dataclass(frozen=True)
class ExpressionHit:
    lemma: str
    start: int
    end: int
    original_types: frozenset
    emotion_types: frozenset
    shifted: bool


@dataclass(frozen=True)
class AffectResult:
    emotive: bool
    emotive_value: int
    emotemes: tuple
    expressions: tuple
    emotions: frozenset
    spans: tuple


def flip_once(types: Iterable, table: Mapping = DEFAULT_FLIP_TABLE) -> frozenset:
    out = frozenset()
    for t in types:
        out |= table[t]
    return out


def apply_cvs(types: Iterable, table: Mapping = DEFAULT_FLIP_TABLE, flips: int = 1) -> frozenset:
    """Flip an emotion-type set through the table ``flips`` times."""
    current = frozenset(types)
    for _ in range(flips):
        current = flip_once(current, table)
    return current


def _guarded(
    pattern: str, wildcard: bool, right_guard: bool = True, left_guard: bool = True
) -> str:
    body = re.escape(pattern)
    if wildcard and pattern:
        body += re.escape(pattern[-1]) + "*"
    left = (
        r"(?<!\w)"
        if left_guard and pattern and (pattern[0].isalnum() or pattern[0] == "_")
        else ""
    )
    right = r"(?!\w)" if right_guard and pattern and (pattern[-1].isalnum() or pattern[-1] == "_") else ""
    return left + body + right


_EXCLAMATION_RE = re.compile(r"[!?！？]*[!！][!?！？]*")
_ELLIPSIS_RE = re.compile(r"\.{2,}|…+|。{3,}")
_PROLONG_RE = re.compile(r"(\S)\1{2,}")


class AffectAnalyzer:
    """Reusable analyzer: compiles the bundle's patterns once."""

    def __init__(
        self,
        bundle: LexiconBundle,
        analyzer_config: Optional[AnalyzerConfig] = None,
        flip_table: Optional[Mapping] = None,
        cvs_window_tokens: int = 3,
    ) -> None:
        self.bundle = bundle
        self.config = analyzer_config or AnalyzerConfig.from_bundle(bundle)
        self.flip_table = dict(flip_table) if flip_table is not None else dict(DEFAULT_FLIP_TABLE)
        self.cvs_window_tokens = cvs_window_tokens
        self._emotemes = [
            (e, re.compile(_guarded(e.surface.rstrip("*"), e.surface.endswith("*"))))
            for e in bundle.emotemes
        ]
        self._expressions = [
            (x, re.compile(_guarded(x.lemma, wildcard=False, right_guard=False)))
            for x in bundle.expressions
        ]
        # Longest pattern first so "cha ikenai" beats the "nai" inside it.
        # No left guard: a negation may attach directly to the expression it
        # flips ("...cha ikenai"); _count_cvs polices the left boundary.
        self._cvs = [
            (p, re.compile(_guarded(p.pattern, wildcard=False, left_guard=False)))
            for p in sorted(bundle.cvs_patterns, key=lambda p: (-len(p.pattern), p.pattern))
        ]

    def analyze(self, text: str) -> AffectResult:
        lower = text.casefold()
        if len(lower) != len(text):
            lower = text.lower()
        if len(lower) != len(text):
            lower = text
        offs = byte_offsets(text)
        byte_to_char = {b: c for c, b in enumerate(offs)}
        tokens = tokenize(text, self.config)
        ctokens = [
            (t, byte_to_char[t.start], byte_to_char[t.end]) for t in tokens
        ]

        emotemes: list[tuple[int, int, str, EmotemeClass]] = []  # char spans

        def covered_by(spans, s, e, mode="overlap"):
            for (s2, e2, *_rest) in spans:
                if mode == "exact" and (s, e) == (s2, e2):
                    return True
                if mode == "overlap" and s < e2 and s2 < e:
                    return True
                if mode == "inside" and s >= s2 and e <= e2:
                    return True
            return False

        # lexical emoteme markers
        for entry, rx in self._emotemes:
            for m in rx.finditer(lower):
                if not covered_by(emotemes, m.start(), m.end(), "exact"):
                    emotemes.append((m.start(), m.end(), m.group(), entry.emoteme_class))
        lexical = list(emotemes)

        # emoticons count as emotemes too
        emoticon_spans = []
        for es in extract_emoticons(text, self.bundle):
            s, e = byte_to_char[es.start], byte_to_char[es.end]
            emoticon_spans.append((s, e, es.raw))
            if not covered_by(emotemes, s, e, "exact"):
                emotemes.append((s, e, es.raw, EmotemeClass.EMOTICON))

        # interjection tokens and emphatic sentence-final particles
        for idx, (tok, cs, ce) in enumerate(ctokens):
            if covered_by(lexical, cs, ce) or covered_by(emoticon_spans, cs, ce):
                continue
            if tok.pos is POS.INTERJECTION:
                emotemes.append((cs, ce, tok.surface, EmotemeClass.INTERJECTION))
            elif (
                tok.pos is POS.PARTICLE
                and tok.surface.casefold() in self.config.emphatic_particles
                and (idx + 1 == len(ctokens) or ctokens[idx + 1][0].pos is POS.SYMBOL)
            ):
                emotemes.append((cs, ce, tok.surface, EmotemeClass.INTERJECTION))

        # punctuation-borne markers; suppressed inside lexical/emoticon spans
        punct_shield = [(s, e) for (s, e, *_r) in lexical] + [
            (s, e) for (s, e, _raw) in emoticon_spans
        ]
        taken = [(s, e) for (s, e, *_r) in emotemes]
        for rx in (_EXCLAMATION_RE, _ELLIPSIS_RE, _PROLONG_RE):
            for m in rx.finditer(text):
                s, e = m.start(), m.end()
                if covered_by(punct_shield, s, e, "inside"):
                    continue
                if (s, e) in taken:
                    continue
                emotemes.append((s, e, m.group(), EmotemeClass.EXCLAMATION))
                taken.append((s, e))

        emotemes.sort(key=lambda t: (t[0], t[1]))
        emotive = bool(emotemes)
        emotive_value = min(EMOTIVE_VALUE_CAP, len(emotemes))

        expressions: list[ExpressionHit] = []
        emotions = frozenset()
        if emotive:
            expr_raw: list[tuple[int, int, object]] = []
            for expr, rx in self._expressions:
                for m in rx.finditer(lower):
                    expr_raw.append((m.start(), m.end(), expr))
            expr_raw.sort(key=lambda t: (t[0], -(t[1] - t[0])))
            expr_spans = [(s, e) for s, e, _x in expr_raw]
            for s, e, expr in expr_raw:
                flips = self._count_cvs(lower, s, e, ctokens, expr_spans)
                types = apply_cvs(expr.emotion_types, self.flip_table, flips) if flips else expr.emotion_types
                expressions.append(
                    ExpressionHit(
                        lemma=expr.lemma,
                        start=offs[s],
                        end=offs[e],
                        original_types=expr.emotion_types,
                        emotion_types=types,
                        shifted=flips > 0,
                    )
                )
                emotions |= types
            for s, e, raw in emoticon_spans:
                emotions |= analyze_emoticon(raw, self.bundle)

        spans = [
            Span(offs[s], offs[e], "emoteme", klass.value)
            for (s, e, _surface, klass) in emotemes
        ] + [
            Span(
                x.start,
                x.end,
                "expression",
                ",".join(sorted(t.value for t in x.emotion_types)),
            )
            for x in expressions
        ]
        spans.sort(key=lambda sp: (sp.start, sp.end, sp.kind))

        return AffectResult(
            emotive=emotive,
            emotive_value=emotive_value,
            emotemes=tuple(
                EmotemeHit(surface, klass, offs[s], offs[e])
                for (s, e, surface, klass) in emotemes
            ),
            expressions=tuple(expressions),
            emotions=emotions,
            spans=tuple(spans),
        )

    def _count_cvs(self, lower, expr_start, expr_end, ctokens, expr_spans) -> int:
        """Count negation patterns in the window right after an expression.

        The window runs from the expression's end to the end of the third
        token from there (a token the expression ends inside counts as the
        first).  Longest pattern wins at overlaps.  A match must either attach
        directly at the expression's end or start at a word boundary, and a
        match lying inside some other expression match doesn't count (its
        negation belongs to that expression).
        """
        tail_ends = [ce for (_t, cs, ce) in ctokens if cs < expr_end < ce]
        tail_ends += [ce for (_t, cs, ce) in ctokens if cs >= expr_end]
        if not tail_ends:
            window_end = expr_end
        elif len(tail_ends) >= self.cvs_window_tokens:
            window_end = tail_ends[self.cvs_window_tokens - 1]
        else:
            window_end = tail_ends[-1]
        flips = 0
        claimed: list[tuple[int, int]] = []
        for _pat, rx in self._cvs:
            for m in rx.finditer(lower, expr_end):
                s, e = m.start(), m.end()
                if s >= window_end:
                    break
                if s > expr_end and s > 0 and (lower[s - 1].isalnum() or lower[s - 1] == "_"):
                    continue  # mid-word leftovers like the "nai" in "tsumaranai"
                if any(s < e2 and s2 < e for (s2, e2) in claimed):
                    continue
                if any(
                    s >= s2 and e <= e2 and (s2, e2) != (expr_start, expr_end)
                    for (s2, e2) in expr_spans
                ):
                    continue
                claimed.append((s, e))
                flips += 1
        return flips


def analyze(
    text: str,
    bundle: LexiconBundle,
    analyzer_config: Optional[AnalyzerConfig] = None,
    flip_table: Optional[Mapping] = None,
) -> AffectResult:
    """One-shot convenience wrapper; build an AffectAnalyzer for batch work."""
    return AffectAnalyzer(bundle, analyzer_config, flip_table).analyze(text)
