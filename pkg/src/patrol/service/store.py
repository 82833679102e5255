"""Append-only event log and the snapshot derived from it.

Four event types flow through the log:

* ``init``     -- first model version became active (trained from a corpus)
* ``ingest``   -- an entry arrived, with its machine scores frozen in
* ``decision`` -- a reviewer labeled an entry
* ``retrain``  -- a new model version became active, with stored rescores
                  for the entries that were still pending

Replaying the log applies stored data only — nothing is rescored, so a
restarted service reaches a byte-identical snapshot.  Model weights live
next to the log (``models/v<N>.tsv``) and are loaded, not recomputed, on
replay.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from ..classifier import SvmModel, load_model
from ..corpus import TriLabel

_SEVERITY = {"N": 0, "D": 1, "H": 2}


class StoreError(Exception):
    """Raised for corrupt logs or impossible transitions."""


class TriageStore:
    """In-memory snapshot over an append-only JSONL event log."""

    def __init__(self, state_dir: str | Path) -> None:
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.models_dir = self.state_dir / "models"
        self.models_dir.mkdir(exist_ok=True)
        self.events_path = self.state_dir / "events.jsonl"
        self.lock = threading.RLock()

        self._seq = 0
        self._entries: dict[str, dict] = {}
        self._model: SvmModel | None = None
        self._model_version = 0
        self._decisions_since_retrain = 0

    # -- properties ---------------------------------------------------------

    @property
    def model(self) -> SvmModel:
        if self._model is None:
            raise StoreError("no model is active; the store was not initialised")
        return self._model

    @property
    def model_version(self) -> int:
        return self._model_version

    @property
    def decisions_since_retrain(self) -> int:
        return self._decisions_since_retrain

    def model_path(self, version: int) -> Path:
        return self.models_dir / f"v{version}.tsv"

    def is_empty(self) -> bool:
        return not self.events_path.exists() or self.events_path.stat().st_size == 0

    def __contains__(self, entry_id: str) -> bool:
        with self.lock:
            return entry_id in self._entries

    def __len__(self) -> int:
        with self.lock:
            return len(self._entries)

    # -- event flow ----------------------------------------------------------

    def append(self, event: dict) -> dict:
        """Assign a sequence number, persist the event, fold it into state."""
        with self.lock:
            event = dict(event)
            event["seq"] = self._seq + 1
            line = json.dumps(event, ensure_ascii=False, sort_keys=True)
            with open(self.events_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
            self._apply(event)
            return event

    def replay(self) -> None:
        """Rebuild the snapshot from the log; applies stored data verbatim."""
        with self.lock:
            if self._seq:
                raise StoreError("replay must start from an empty store")
            with open(self.events_path, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, start=1):
                    if not line.strip():
                        continue
                    try:
                        event = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise StoreError(
                            f"{self.events_path}:{lineno}: bad event: {exc.msg}"
                        ) from exc
                    self._apply(event)

    def _apply(self, event: dict) -> None:
        kind = event.get("type")
        seq = event.get("seq")
        if not isinstance(seq, int) or seq <= self._seq:
            raise StoreError(f"event sequence went backwards at {seq!r}")
        if kind == "init":
            version = event["model_version"]
            self._model = load_model(self.model_path(version))
            self._model_version = version
        elif kind == "ingest":
            entry = event["entry"]
            entry_id = entry["id"]
            if entry_id in self._entries:
                raise StoreError(f"duplicate ingest for entry {entry_id!r}")
            self._entries[entry_id] = {
                "entry": entry,
                "machine": event["machine"],
                "decision": None,
                "seq": seq,
            }
        elif kind == "decision":
            entry_id = event["entry_id"]
            row = self._entries.get(entry_id)
            if row is None:
                raise StoreError(f"decision for unknown entry {entry_id!r}")
            row["decision"] = {
                "label": event["label"],
                "reviewer": event["reviewer"],
                "note": event.get("note", ""),
                "decided_at": event["at"],
            }
            self._decisions_since_retrain += 1
        elif kind == "retrain":
            version = event["model_version"]
            self._model = load_model(self.model_path(version))
            self._model_version = version
            for entry_id, machine in event["rescores"].items():
                row = self._entries.get(entry_id)
                if row is None:
                    raise StoreError(f"rescore for unknown entry {entry_id!r}")
                row["machine"] = machine
            self._decisions_since_retrain = 0
        else:
            raise StoreError(f"unknown event type {kind!r}")
        self._seq = seq

    # -- queries --------------------------------------------------------------

    def get(self, entry_id: str) -> dict | None:
        with self.lock:
            return self._entries.get(entry_id)

    def queue(
        self,
        status: str = "pending",
        label: str | None = None,
        page: int = 1,
        page_size: int = 20,
    ) -> tuple:
        """(total, rows) ordered by machine harm score, severity, then id."""
        if status not in ("pending", "decided", "all"):
            raise StoreError(f"unknown status filter {status!r}")
        if label is not None and label not in _SEVERITY:
            raise StoreError(f"unknown label filter {label!r}")
        if page < 1 or page_size < 1:
            raise StoreError("page and page_size must be positive")
        with self.lock:
            rows = []
            for entry_id, row in self._entries.items():
                if status == "pending" and row["decision"] is not None:
                    continue
                if status == "decided" and row["decision"] is None:
                    continue
                if label is not None and row["machine"]["label"] != label:
                    continue
                rows.append((entry_id, row))
            rows.sort(
                key=lambda item: (
                    -item[1]["machine"]["svm_score"],
                    -_SEVERITY[item[1]["machine"]["label"]],
                    item[0],
                )
            )
            total = len(rows)
            start = (page - 1) * page_size
            return total, [row for _, row in rows[start : start + page_size]]

    def pending_ids(self) -> list:
        with self.lock:
            return sorted(
                eid for eid, row in self._entries.items() if row["decision"] is None
            )

    def decided_rows(self) -> list:
        """Decided entries in id order (stable export)."""
        with self.lock:
            return sorted(
                (
                    (eid, row)
                    for eid, row in self._entries.items()
                    if row["decision"] is not None
                ),
                key=lambda item: item[0],
            )

    def decided_examples(self) -> list:
        """(text, label) training pairs from reviewer decisions."""
        return [
            (row["entry"]["text"], TriLabel(row["decision"]["label"]))
            for _, row in self.decided_rows()
        ]

    # -- snapshot ---------------------------------------------------------------

    def snapshot(self) -> dict:
        with self.lock:
            return {
                "seq": self._seq,
                "model_version": self._model_version,
                "decisions_since_retrain": self._decisions_since_retrain,
                "entries": {eid: row for eid, row in sorted(self._entries.items())},
            }

    def snapshot_bytes(self) -> bytes:
        return json.dumps(self.snapshot(), ensure_ascii=False, sort_keys=True).encode(
            "utf-8"
        )
