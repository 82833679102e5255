"""Emoticon extraction and emotion lookup.

Detection runs in two layers: known emoticon strings are found verbatim, and
leftover symbol runs that contain face parts (eye/mouth glyphs from the area
table) become candidates.  Unknown candidates are decomposed: find the
eye-mouth-eye triplet, intersect the two areas' emotion sets (union when the
intersection is empty), and as a last resort union every recognized glyph's
set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicons import LexiconBundle
from .tokenizer import byte_offsets, script_class


@dataclass(frozen=True)
class EmoticonSpan:
    """A detected emoticon; offsets are bytes into the UTF-8 text."""

    raw: str
    start: int
    end: int


def extract_emoticons(text: str, bundle: LexiconBundle) -> list[EmoticonSpan]:
    """Find emoticon spans in reading order.

    Database strings always match, even short ones like ";)".  Elsewhere, a
    maximal run of symbol-class characters and area glyphs is a candidate when
    it is at least three characters long, contains an eye glyph, and contains
    at least one true symbol character.  Both constraints keep non-faces out:
    plain words with 'o' in them have no symbol, and bare mark runs like
    "~~~" or "!!!" have no eye.
    """
    offs = byte_offsets(text)
    n = len(text)
    claimed = [False] * n
    found: list[tuple[int, EmoticonSpan]] = []

    # layer 1: verbatim database hits, longest first so "(^o^)" beats "^o^"
    for raw in sorted(bundle.emoticons, key=lambda r: (-len(r), r)):
        start = 0
        while True:
            idx = text.find(raw, start)
            if idx < 0:
                break
            end = idx + len(raw)
            if not any(claimed[idx:end]):
                for k in range(idx, end):
                    claimed[k] = True
                found.append((idx, EmoticonSpan(raw, offs[idx], offs[end])))
            start = idx + 1

    # layer 2: glyph runs that look like faces
    face_glyphs = set(bundle.eyes) | set(bundle.mouths) | set(bundle.other_glyphs)
    i = 0
    while i < n:
        ch = text[i]
        if ch in face_glyphs or script_class(ch) == "symbol":
            j = i
            while j < n and (text[j] in face_glyphs or script_class(text[j]) == "symbol"):
                j += 1
            run = text[i:j]
            if (
                len(run) >= 3
                and not any(claimed[i:j])
                and any(c in bundle.eyes for c in run)
                and any(script_class(c) == "symbol" for c in run)
            ):
                found.append((i, EmoticonSpan(run, offs[i], offs[j])))
            i = j
        else:
            i += 1

    found.sort(key=lambda item: (item[0], item[1].end))
    return [span for _, span in found]


def analyze_emoticon(raw: str, bundle: LexiconBundle) -> frozenset:
    """Emotion set for one emoticon string; empty when nothing is recognized.

    Lookup order: exact database entry; eye-mouth-eye triplet (same eye glyph
    flanking a mouth glyph, contiguous triplets preferred, leftmost wins) with
    intersection-then-union of the two areas; finally the union over every
    recognized glyph.
    """
    hit = bundle.emoticons.get(raw)
    if hit is not None:
        return hit

    triplet = _find_triplet(raw, bundle, contiguous=True) or _find_triplet(
        raw, bundle, contiguous=False
    )
    if triplet is not None:
        eye, mouth = triplet
        eye_set = bundle.eyes[eye]
        mouth_set = bundle.mouths[mouth]
        merged = eye_set & mouth_set
        if not merged:
            merged = eye_set | mouth_set
        if merged:
            return merged

    union = frozenset()
    for ch in raw:
        union |= bundle.eyes.get(ch, frozenset())
        union |= bundle.mouths.get(ch, frozenset())
    return union


def _find_triplet(raw: str, bundle: LexiconBundle, contiguous: bool):
    n = len(raw)
    for i in range(n - 2):
        if raw[i] not in bundle.eyes:
            continue
        if contiguous:
            if raw[i + 2] == raw[i] and raw[i + 1] in bundle.mouths:
                return raw[i], raw[i + 1]
            continue
        for k in range(i + 2, n):
            if raw[k] != raw[i]:
                continue
            for j in range(i + 1, k):
                if raw[j] in bundle.mouths:
                    return raw[i], raw[j]
    return None
