"""Entry records, datasets, and fold splitting.

A corpus is a line-delimited JSON file; one record per line with the fields
``id``, ``text``, ``source``, ``timestamp`` and an optional ``label``
(one of ``N``/``D``/``H``: normal, doubtful, harmful).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Iterator, Optional


class TriLabel(str, Enum):
    """Three-way screening label: Normal, Doubtful, Harmful."""

    NORMAL = "N"
    DOUBTFUL = "D"
    HARMFUL = "H"

    @property
    def severity(self) -> int:
        return {"N": 0, "D": 1, "H": 2}[self.value]


#: ordering helper: max(labels, key=severity) reads better with this around
SEVERITY = {TriLabel.NORMAL: 0, TriLabel.DOUBTFUL: 1, TriLabel.HARMFUL: 2}


class CorpusError(ValueError):
    """Raised for malformed corpus files; message carries file/line context."""


def is_harmful(label: TriLabel, doubtful_is_harmful: bool = True) -> bool:
    """Binary projection of a tri-label used for training and scoring."""
    if label is TriLabel.HARMFUL:
        return True
    if label is TriLabel.DOUBTFUL:
        return doubtful_is_harmful
    return False


@dataclass(frozen=True)
class Entry:
    """One BBS entry.

    Attributes:
        id: unique non-empty identifier.
        text: the raw entry text.
        source: where the entry came from (board name, crawl tag, ...).
        timestamp: ISO-8601 timestamp string, kept verbatim.
        label: gold tri-label if annotated, else None.
    """

    id: str
    text: str
    source: str
    timestamp: str
    label: Optional[TriLabel] = None

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise CorpusError("entry id must be a non-empty string")
        if not isinstance(self.text, str):
            raise CorpusError(f"entry {self.id!r}: text must be a string")
        if not isinstance(self.source, str):
            raise CorpusError(f"entry {self.id!r}: source must be a string")
        _validate_timestamp(self.id, self.timestamp)

    def to_record(self) -> dict:
        rec = {
            "id": self.id,
            "text": self.text,
            "source": self.source,
            "timestamp": self.timestamp,
        }
        if self.label is not None:
            rec["label"] = self.label.value
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Entry":
        if not isinstance(rec, dict):
            raise CorpusError("record must be an object")
        extra = set(rec) - {"id", "text", "source", "timestamp", "label"}
        if extra:
            raise CorpusError(f"unknown fields: {sorted(extra)}")
        label = rec.get("label")
        if label is not None:
            try:
                label = TriLabel(label)
            except ValueError:
                raise CorpusError(f"bad label {label!r} (want N, D or H)") from None
        try:
            return cls(
                id=rec["id"],
                text=rec["text"],
                source=rec["source"],
                timestamp=rec["timestamp"],
                label=label,
            )
        except KeyError as missing:
            raise CorpusError(f"missing field {missing.args[0]!r}") from None


def _validate_timestamp(entry_id: str, value: str) -> None:
    if not isinstance(value, str) or not value:
        raise CorpusError(f"entry {entry_id!r}: timestamp must be a non-empty string")
    probe = value[:-1] + "+00:00" if value.endswith("Z") else value
    try:
        datetime.fromisoformat(probe)
    except ValueError:
        raise CorpusError(
            f"entry {entry_id!r}: timestamp {value!r} is not ISO-8601"
        ) from None


@dataclass
class Dataset:
    """An ordered collection of entries with a unique-id index."""

    entries: list[Entry] = field(default_factory=list)
    _by_id: dict[str, Entry] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.entries and not self._by_id:
            for e in self.entries:
                if e.id in self._by_id:
                    raise CorpusError(f"duplicate entry id {e.id!r}")
                self._by_id[e.id] = e

    def add(self, entry: Entry) -> None:
        if entry.id in self._by_id:
            raise CorpusError(f"duplicate entry id {entry.id!r}")
        self.entries.append(entry)
        self._by_id[entry.id] = entry

    def get(self, entry_id: str) -> Entry:
        return self._by_id[entry_id]

    def __contains__(self, entry_id: str) -> bool:
        return entry_id in self._by_id

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def labeled(self) -> list[Entry]:
        return [e for e in self.entries if e.label is not None]


def load_dataset(path: str | Path) -> Dataset:
    """Parse a JSONL corpus file; errors name the offending line."""
    ds = Dataset()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusError(f"{path}:{lineno}: bad JSON: {err.msg}") from None
            try:
                ds.add(Entry.from_record(rec))
            except CorpusError as err:
                raise CorpusError(f"{path}:{lineno}: {err}") from None
    return ds


def save_dataset(ds: Dataset, path: str | Path) -> None:
    """Write a dataset back out; load_dataset(save_dataset(ds)) round-trips."""
    with open(path, "w", encoding="utf-8") as fh:
        for e in ds:
            fh.write(json.dumps(e.to_record(), ensure_ascii=False) + "\n")


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of entry ids to k cross-validation folds."""

    k: int
    fold_of: dict  # id -> fold index

    def fold_ids(self, fold: int) -> list[str]:
        return [eid for eid, f in self.fold_of.items() if f == fold]


def assign_folds(
    labeled_ids: list,
    k: int,
    seed: int = 0,
    stratified: bool = True,
    doubtful_is_harmful: bool = True,
) -> FoldPlan:
    """Deal (id, label) pairs into k folds of near-equal size.

    Stratified by the binary harmful/normal projection of the label by
    default, so each fold keeps roughly the corpus class balance; pass
    ``stratified=False`` for a plain shuffled split.  Fold sizes differ by at
    most one.  Deterministic for a fixed seed.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > len(labeled_ids):
        raise ValueError(f"k={k} exceeds the {len(labeled_ids)} labeled entries")
    rng = random.Random(seed)
    if stratified:
        strata: dict[bool, list] = {True: [], False: []}
        for eid, label in labeled_ids:
            strata[is_harmful(label, doubtful_is_harmful)].append((eid, label))
        groups = [strata[True], strata[False]]
    else:
        groups = [list(labeled_ids)]
    fold_of: dict[str, int] = {}
    cursor = 0
    for group in groups:
        rng.shuffle(group)
        for eid, _ in group:
            fold_of[eid] = cursor % k
            cursor += 1
    return FoldPlan(k=k, fold_of=fold_of)


def split_folds(
    ds: Dataset,
    k: int,
    seed: int = 0,
    stratified: bool = True,
    doubtful_is_harmful: bool = True,
) -> FoldPlan:
    """assign_folds() over a dataset's labeled entries."""
    pairs = [(e.id, e.label) for e in ds.labeled()]
    return assign_folds(
        pairs, k, seed=seed, stratified=stratified, doubtful_is_harmful=doubtful_is_harmful
    )
