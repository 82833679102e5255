"""FastAPI application factory for the triage service."""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware

from ..affect import AffectAnalyzer
from ..classifier import RuleScreen, SvmModel, classify_text, save_model, train
from ..corpus import CorpusError, Entry, load_dataset
from ..features import FeatureConfig
from ..lexicons import load_lexicons
from ..ranker import Highlight, merge_highlights
from ..synth import corpus_path
from ..tokenizer import AnalyzerConfig, tokenize
from .schemas import (
    DecisionIn,
    EntryIn,
    EntryOut,
    ModelInfo,
    QueuePage,
    RetrainOut,
)
from .store import TriageStore

import json


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class Scorer:
    """Applies the full pipeline to one text and freezes the result as data."""

    def __init__(self, bundle) -> None:
        self.bundle = bundle
        self.analyzer_config = AnalyzerConfig.from_bundle(bundle)
        self.screen = RuleScreen(bundle, analyzer_config=self.analyzer_config)
        self.affect = AffectAnalyzer(bundle, analyzer_config=self.analyzer_config)

    def machine(self, text: str, model: SvmModel, model_version: int) -> dict:
        tokens = tokenize(text, self.analyzer_config)
        outcome = classify_text(text, model, self.screen, tokens)
        affect = self.affect.analyze(text)
        spans = [
            Highlight(h.start, h.end, "vulgarity", h.canonical)
            for h in outcome.vulgarity_hits
        ]
        spans += [
            Highlight(h.start, h.end, "rule", h.rule_id) for h in outcome.rule_hits
        ]
        spans += [
            Highlight(h.start, h.end, "expression", h.lemma)
            for h in affect.expressions
        ]
        spans += [
            Highlight(h.start, h.end, "emoteme", h.emoteme_class.value)
            for h in affect.emotemes
        ]
        return {
            "model_version": model_version,
            "label": outcome.label.value,
            "svm_score": outcome.svm_score,
            "svm_harmful": outcome.svm_harmful,
            "rule_label": outcome.rule_label.value,
            "rule_hits": [
                {
                    "rule": h.rule_id,
                    "family": h.family,
                    "label": h.label.value,
                    "start": h.start,
                    "end": h.end,
                }
                for h in outcome.rule_hits
            ],
            "vulgarity_hits": [
                {
                    "surface": h.surface,
                    "canonical": h.canonical,
                    "via": h.via,
                    "start": h.start,
                    "end": h.end,
                }
                for h in outcome.vulgarity_hits
            ],
            "affect": {
                "emotive": affect.emotive,
                "emotive_value": affect.emotive_value,
                "emotions": sorted(e.value for e in affect.emotions),
            },
            "highlights": [
                {"start": s.start, "end": s.end, "kind": s.kind, "detail": s.detail}
                for s in merge_highlights(spans)
            ],
        }


def _entry_out(row: dict) -> EntryOut:
    return EntryOut(
        id=row["entry"]["id"],
        text=row["entry"]["text"],
        source=row["entry"]["source"],
        timestamp=row["entry"]["timestamp"],
        machine=row["machine"],
        decision=row["decision"],
    )


def create_app(
    state_dir: str | Path,
    corpus: str | Path | None = None,
    lexicon_dir: str | Path | None = None,
    min_new_decisions: int = 5,
    feature_config: FeatureConfig | None = None,
    max_epochs: int = 300,
    svm_seed: int = 0,
) -> FastAPI:
    """Build the service, training or replaying state as needed."""
    corpus = Path(corpus) if corpus is not None else corpus_path()
    feature_config = feature_config or FeatureConfig()
    bundle = load_lexicons(lexicon_dir) if lexicon_dir else load_lexicons()
    scorer = Scorer(bundle)
    store = TriageStore(state_dir)

    base = load_dataset(corpus).labeled()
    if not base:
        raise CorpusError(f"{corpus}: no labeled entries to train on")
    base_token_lists = [tokenize(e.text, scorer.analyzer_config) for e in base]

    def fit(extra: list) -> tuple:
        """Train on the base corpus plus reviewer-decided examples."""
        token_lists = list(base_token_lists)
        labels = [e.label for e in base]
        for text, label in extra:
            token_lists.append(tokenize(text, scorer.analyzer_config))
            labels.append(label)
        result = train(
            token_lists,
            labels,
            feature_config,
            max_epochs=max_epochs,
            seed=svm_seed,
        )
        return result.model, result.objective

    if store.is_empty():
        model, objective = fit([])
        save_model(model, store.model_path(1))
        store.append(
            {
                "type": "init",
                "at": _now(),
                "model_version": 1,
                "corpus": str(corpus),
                "corpus_entries": len(base),
                "objective": objective,
            }
        )
    else:
        store.replay()

    app = FastAPI(title="patrol triage service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.scorer = scorer

    @app.post("/entries", response_model=EntryOut, status_code=201)
    def ingest(body: EntryIn) -> EntryOut:
        with store.lock:
            entry_id = body.id
            if entry_id is None:
                n = len(store) + 1
                while f"svc-{n:06d}" in store:
                    n += 1
                entry_id = f"svc-{n:06d}"
            elif entry_id in store:
                raise HTTPException(409, f"entry {entry_id!r} already exists")
            timestamp = body.timestamp or _now()
            try:
                record = Entry(
                    id=entry_id, text=body.text, source=body.source, timestamp=timestamp
                ).to_record()
            except CorpusError as exc:
                raise HTTPException(422, str(exc)) from exc
            machine = scorer.machine(body.text, store.model, store.model_version)
            event = store.append(
                {
                    "type": "ingest",
                    "at": _now(),
                    "entry": record,
                    "machine": machine,
                }
            )
            return _entry_out(store.get(event["entry"]["id"]))

    @app.get("/queue", response_model=QueuePage)
    def queue(
        status: str = Query("pending"),
        label: str | None = Query(None),
        page: int = Query(1, ge=1),
        page_size: int = Query(20, ge=1, le=100),
    ) -> QueuePage:
        try:
            total, rows = store.queue(
                status=status, label=label, page=page, page_size=page_size
            )
        except Exception as exc:
            raise HTTPException(422, str(exc)) from exc
        return QueuePage(
            total=total,
            page=page,
            page_size=page_size,
            items=[_entry_out(row) for row in rows],
        )

    @app.get("/entries/{entry_id}", response_model=EntryOut)
    def get_entry(entry_id: str) -> EntryOut:
        row = store.get(entry_id)
        if row is None:
            raise HTTPException(404, f"no entry {entry_id!r}")
        return _entry_out(row)

    @app.post("/entries/{entry_id}/decision", response_model=EntryOut)
    def decide(entry_id: str, body: DecisionIn) -> EntryOut:
        with store.lock:
            if store.get(entry_id) is None:
                raise HTTPException(404, f"no entry {entry_id!r}")
            store.append(
                {
                    "type": "decision",
                    "at": _now(),
                    "entry_id": entry_id,
                    "label": body.label,
                    "reviewer": body.reviewer,
                    "note": body.note,
                }
            )
            return _entry_out(store.get(entry_id))

    @app.post("/retrain", response_model=RetrainOut)
    def retrain() -> RetrainOut:
        with store.lock:
            pending = store.decisions_since_retrain
            if pending < min_new_decisions:
                raise HTTPException(
                    409,
                    f"need {min_new_decisions} new decisions to retrain, have {pending}",
                )
            examples = store.decided_examples()
            model, objective = fit(examples)
            version = store.model_version + 1
            save_model(model, store.model_path(version))
            rescores = {
                eid: scorer.machine(store.get(eid)["entry"]["text"], model, version)
                for eid in store.pending_ids()
            }
            store.append(
                {
                    "type": "retrain",
                    "at": _now(),
                    "model_version": version,
                    "trained_on": [eid for eid, _ in store.decided_rows()],
                    "objective": objective,
                    "rescores": rescores,
                }
            )
            return RetrainOut(
                model_version=version,
                trained_on=len(examples),
                rescored=len(rescores),
                objective=objective,
            )

    @app.get("/model", response_model=ModelInfo)
    def model_info() -> ModelInfo:
        with store.lock:
            pending = len(store.pending_ids())
            return ModelInfo(
                version=store.model_version,
                cell=store.model.config.cell_name,
                features=len(store.model.vocab),
                decisions_since_retrain=store.decisions_since_retrain,
                min_new_decisions=min_new_decisions,
                entries_total=len(store),
                entries_pending=pending,
            )

    @app.get("/export/decisions")
    def export_decisions() -> Response:
        lines = []
        for eid, row in store.decided_rows():
            decision = row["decision"]
            lines.append(
                json.dumps(
                    {
                        "id": eid,
                        "text": row["entry"]["text"],
                        "label": decision["label"],
                        "reviewer": decision["reviewer"],
                        "note": decision["note"],
                        "decided_at": decision["decided_at"],
                        "machine_label": row["machine"]["label"],
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
        body = "\n".join(lines) + ("\n" if lines else "")
        return Response(content=body, media_type="application/x-ndjson")

    return app
