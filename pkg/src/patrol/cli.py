"""Command-line interface.

Seven subcommands: ``train``, ``classify``, ``rank``, ``affect``,
``normalize``, ``eval``, and ``serve``.  Machine-readable output is
line-delimited JSON on stdout; ``--pretty`` adds a human-readable table on
stderr so pipes stay clean.  Exit status: 0 on success, 1 on an
operational error (bad file, malformed corpus, ...), 2 on a usage error.

Most options can also come from a JSON config file via ``--config``;
explicit command-line flags win over the file, which wins over the
defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .affect import AffectAnalyzer
from .classifier import (
    ModelError,
    RuleScreen,
    classify_text,
    load_model,
    save_model,
    train,
)
from .corpus import CorpusError, TriLabel, load_dataset
from .evalkit import EvalError, cross_validate, run_grid
from .features import FeatureConfig, MainKind, Weighting
from .lexicons import LexiconError, load_lexicons
from .normalizer import NormalizerConfig, match_canonical
from .ranker import DedupMode, RankerError, build_cooccurrence, rank_entries
from .synth import corpus_path
from .tokenizer import AnalyzerConfig, tokenize

_CONFIG_KEYS = {
    "lexicon_dir": None,
    "threshold": 2,
    "anchor_first_letter": True,
    "strip_prolongations": True,
    "length_scaled": False,
    "cvs_window": 3,
    "doubtful_is_harmful": True,
    "main": "wordpos",
    "weighting": "tfidf",
    "raw_tf": False,
    "c": 1.0,
    "tol": 1e-6,
    "max_epochs": 1000,
    "svm_seed": 0,
    "mode": "dedup_similarity",
    "k": 10,
    "seed": 0,
    "stratified": True,
    "pooled": False,
}


class CliError(Exception):
    """Operational failure that should exit with status 1."""


def _load_config(path: str | None) -> dict:
    settings = dict(_CONFIG_KEYS)
    if path is None:
        return settings
    try:
        loaded = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(loaded, dict):
        raise CliError(f"config {path} must hold a JSON object")
    unknown = set(loaded) - set(_CONFIG_KEYS)
    if unknown:
        raise CliError(f"config {path} has unknown keys: {sorted(unknown)}")
    settings.update(loaded)
    return settings


def _settings(args: argparse.Namespace) -> dict:
    """Defaults, overlaid by the config file, overlaid by explicit flags."""
    settings = _load_config(getattr(args, "config", None))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _bundle(settings: dict):
    return load_lexicons(settings["lexicon_dir"]) if settings["lexicon_dir"] else load_lexicons()


def _normalizer_config(settings: dict) -> NormalizerConfig:
    return NormalizerConfig(
        threshold=int(settings["threshold"]),
        anchor_first_letter=bool(settings["anchor_first_letter"]),
        strip_prolongations=bool(settings["strip_prolongations"]),
        length_scaled=bool(settings["length_scaled"]),
    )


def _feature_config(settings: dict) -> FeatureConfig:
    try:
        return FeatureConfig(
            main=MainKind(settings["main"]),
            weighting=Weighting(settings["weighting"]),
            raw_tf=bool(settings["raw_tf"]),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _emit(record: dict) -> None:
    sys.stdout.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def _table(rows: list, headers: list) -> None:
    """Fixed-width table on stderr."""
    widths = [len(h) for h in headers]
    cells = [[str(v) for v in row] for row in rows]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(row):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
    sys.stderr.write(fmt(headers) + "\n")
    sys.stderr.write("  ".join("-" * w for w in widths) + "\n")
    for row in cells:
        sys.stderr.write(fmt(row) + "\n")


def _read_texts(args: argparse.Namespace) -> list:
    """(id, text) pairs from --text, a JSONL file, or stdin."""
    if getattr(args, "text", None) is not None:
        return [("text-1", args.text)]
    source = getattr(args, "input", None)
    if source is None:
        raise CliError("provide --text or --input (use - for stdin)")
    fh = sys.stdin if source == "-" else None
    try:
        lines = fh.read().splitlines() if fh else Path(source).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CliError(f"cannot read {source}: {exc}") from exc
    pairs: list[tuple] = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CliError(f"{source}:{n}: bad JSON: {exc.msg}") from exc
        if not isinstance(rec, dict) or "text" not in rec:
            raise CliError(f"{source}:{n}: each line needs a 'text' field")
        pairs.append((str(rec.get("id", f"line-{n}")), rec["text"]))
    return pairs


def _load_labeled(path: str):
    ds = load_dataset(path)
    labeled = ds.labeled()
    if not labeled:
        raise CliError(f"{path}: no labeled entries")
    return labeled


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_train(args: argparse.Namespace) -> int:
    settings = _settings(args)
    bundle = _bundle(settings)
    analyzer = AnalyzerConfig.from_bundle(bundle)
    labeled = _load_labeled(args.input)
    token_lists = [tokenize(e.text, analyzer) for e in labeled]
    result = train(
        token_lists,
        [e.label for e in labeled],
        _feature_config(settings),
        c=float(settings["c"]),
        tol=float(settings["tol"]),
        max_epochs=int(settings["max_epochs"]),
        seed=int(settings["svm_seed"]),
        doubtful_is_harmful=bool(settings["doubtful_is_harmful"]),
    )
    save_model(result.model, args.model)
    record = {
        "model": str(args.model),
        "cell": result.model.config.cell_name,
        "entries": len(labeled),
        "features": len(result.model.vocab),
        "epochs": result.epochs,
        "objective": result.objective,
    }
    _emit(record)
    if args.pretty:
        _table([[record["cell"], record["entries"], record["features"],
                 record["epochs"], f"{record['objective']:.6f}"]],
               ["cell", "entries", "features", "epochs", "objective"])
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    settings = _settings(args)
    bundle = _bundle(settings)
    model = load_model(args.model)
    screen = RuleScreen(
        bundle,
        analyzer_config=AnalyzerConfig.from_bundle(bundle),
        normalizer_config=_normalizer_config(settings),
    )
    rows = []
    for entry_id, text in _read_texts(args):
        outcome = classify_text(text, model, screen)
        _emit(
            {
                "id": entry_id,
                "label": outcome.label.value,
                "svm_score": outcome.svm_score,
                "svm_harmful": outcome.svm_harmful,
                "rule_label": outcome.rule_label.value,
                "rule_hits": [
                    {"rule": h.rule_id, "family": h.family, "label": h.label.value,
                     "start": h.start, "end": h.end}
                    for h in outcome.rule_hits
                ],
                "vulgarity_hits": [
                    {"surface": h.surface, "canonical": h.canonical, "via": h.via,
                     "start": h.start, "end": h.end}
                    for h in outcome.vulgarity_hits
                ],
            }
        )
        rows.append([entry_id, outcome.label.value, f"{outcome.svm_score:+.4f}",
                     outcome.rule_label.value, len(outcome.vulgarity_hits)])
    if args.pretty:
        _table(rows, ["id", "label", "svm", "rules", "vulgar"])
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    settings = _settings(args)
    bundle = _bundle(settings)
    analyzer = AnalyzerConfig.from_bundle(bundle)
    ds = load_dataset(args.input)
    if len(ds) == 0:
        raise CliError(f"{args.input}: empty corpus")
    ids = [e.id for e in ds]
    token_lists = [tokenize(e.text, analyzer) for e in ds]
    try:
        mode = DedupMode(settings["mode"])
    except ValueError as exc:
        raise CliError(f"unknown mode {settings['mode']!r}") from exc
    table = build_cooccurrence(
        ids, token_lists, bundle, mode, normalizer_config=_normalizer_config(settings)
    )
    ranked = rank_entries(table)
    if args.top is not None:
        ranked = ranked[: args.top]
    rows = []
    for r in ranked:
        _emit(
            {
                "id": r.entry_id,
                "score": r.score,
                "pairs": [
                    {"a": pair[0], "b": pair[1], "count": mult, "t": t}
                    for pair, mult, t in r.pairs
                ],
            }
        )
        rows.append([r.entry_id, f"{r.score:.4f}", len(r.pairs)])
    if args.pretty:
        _table(rows, ["id", "score", "pairs"])
    return 0


def _cmd_affect(args: argparse.Namespace) -> int:
    settings = _settings(args)
    bundle = _bundle(settings)
    analyzer = AffectAnalyzer(bundle, cvs_window_tokens=int(settings["cvs_window"]))
    rows = []
    for entry_id, text in _read_texts(args):
        result = analyzer.analyze(text)
        _emit(
            {
                "id": entry_id,
                "emotive": result.emotive,
                "emotive_value": result.emotive_value,
                "emotions": sorted(e.value for e in result.emotions),
                "emotemes": [
                    {"surface": h.surface, "class": h.emoteme_class.value,
                     "start": h.start, "end": h.end}
                    for h in result.emotemes
                ],
                "expressions": [
                    {"lemma": h.lemma, "emotions": sorted(e.value for e in h.emotion_types),
                     "shifted": h.shifted, "start": h.start, "end": h.end}
                    for h in result.expressions
                ],
            }
        )
        rows.append([entry_id, result.emotive_value,
                     ",".join(sorted(e.value for e in result.emotions)) or "-"])
    if args.pretty:
        _table(rows, ["id", "value", "emotions"])
    return 0


def _cmd_normalize(args: argparse.Namespace) -> int:
    settings = _settings(args)
    bundle = _bundle(settings)
    config = _normalizer_config(settings)
    words: list[str]
    if args.text is not None:
        words = [args.text]
    elif args.input is not None:
        raw = sys.stdin.read() if args.input == "-" else Path(args.input).read_text(encoding="utf-8")
        words = [w for w in raw.split() if w]
    else:
        raise CliError("provide --text or --input (use - for stdin)")
    rows = []
    for word in words:
        match = match_canonical(word, bundle, config)
        if match is None:
            _emit({"word": word, "canonical": None})
            rows.append([word, "-", "-", "-"])
        else:
            _emit(
                {
                    "word": word,
                    "canonical": match.canonical,
                    "distance": match.distance,
                    "trace": list(match.rule_trace),
                }
            )
            rows.append([word, match.canonical, match.distance, ",".join(match.rule_trace)])
    if args.pretty:
        _table(rows, ["word", "canonical", "distance", "trace"])
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    settings = _settings(args)
    bundle = _bundle(settings)
    analyzer = AnalyzerConfig.from_bundle(bundle)
    labeled = _load_labeled(args.input)
    ids = [e.id for e in labeled]
    token_lists = [tokenize(e.text, analyzer) for e in labeled]
    labels = [e.label for e in labeled]
    shared = dict(
        k=int(settings["k"]),
        seed=int(settings["seed"]),
        stratified=bool(settings["stratified"]),
        doubtful_is_harmful=bool(settings["doubtful_is_harmful"]),
        pooled=bool(settings["pooled"]),
        c=float(settings["c"]),
        tol=float(settings["tol"]),
        max_epochs=int(settings["max_epochs"]),
        svm_seed=int(settings["svm_seed"]),
    )
    if args.grid:
        results = run_grid(ids, token_lists, labels, **shared)
    else:
        cv = cross_validate(ids, token_lists, labels, _feature_config(settings), **shared)
        results = {cv.config.cell_name: cv}
    rows = []
    for cell, cv in results.items():
        _emit(
            {
                "cell": cell,
                "precision": cv.precision,
                "recall": cv.recall,
                "f1": cv.f1,
                "pooled": cv.pooled,
                "fold_f1": [m.f1 for m in cv.folds],
            }
        )
        rows.append([cell, f"{cv.precision:.4f}", f"{cv.recall:.4f}", f"{cv.f1:.4f}"])
    if args.pretty:
        _table(rows, ["cell", "precision", "recall", "f1"])
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    settings = _settings(args)
    from .service.app import create_app  # deferred: FastAPI import is heavy

    app = create_app(
        state_dir=args.state,
        corpus=args.corpus,
        lexicon_dir=settings["lexicon_dir"],
        min_new_decisions=args.min_new_decisions,
    )
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with defaults for the flags below")
    p.add_argument("--lexicon-dir", dest="lexicon_dir", help="alternate lexicon directory")
    p.add_argument("--pretty", action="store_true", help="also print a table on stderr")


def _add_normalizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threshold", type=int, help="edit-distance budget (default 2)")
    p.add_argument("--no-anchor", dest="anchor_first_letter", action="store_const",
                   const=False, help="drop the same-first-letter requirement")
    p.add_argument("--keep-runs", dest="strip_prolongations", action="store_const",
                   const=False, help="keep long character runs instead of collapsing them")
    p.add_argument("--length-scaled", dest="length_scaled", action="store_const",
                   const=True, help="scale the distance budget with word length")


def _add_svm_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--main", choices=[m.value for m in MainKind], help="token reading")
    p.add_argument("--weighting", choices=[w.value for w in Weighting], help="weight scheme")
    p.add_argument("--raw-tf", dest="raw_tf", action="store_const", const=True,
                   help="use plain in-document counts")
    p.add_argument("--c", type=float, help="soft-margin cost (default 1.0)")
    p.add_argument("--tol", type=float, help="objective-improvement stop (default 1e-6)")
    p.add_argument("--max-epochs", dest="max_epochs", type=int, help="epoch cap")
    p.add_argument("--svm-seed", dest="svm_seed", type=int, help="training shuffle seed")
    p.add_argument("--doubtful-normal", dest="doubtful_is_harmful", action="store_const",
                   const=False, help="treat doubtful entries as non-harmful when training")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patrol",
        description="Harmful-entry detection toolkit: affect analysis, "
        "distortion-tolerant vulgarity matching, classification, ranking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model on a labeled JSONL corpus")
    _add_common(p)
    _add_svm_flags(p)
    p.add_argument("--input", default=str(corpus_path()),
                   help="labeled JSONL corpus (default: bundled synthetic corpus)")
    p.add_argument("--model", required=True, help="where to write the model file")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("classify", help="label entries with a trained model")
    _add_common(p)
    _add_normalizer_flags(p)
    p.add_argument("--model", required=True, help="model file from `patrol train`")
    p.add_argument("--input", help="JSONL with 'text' fields, or - for stdin")
    p.add_argument("--text", help="classify one literal text")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("rank", help="order entries by vulgarity co-occurrence strength")
    _add_common(p)
    _add_normalizer_flags(p)
    p.add_argument("--input", default=str(corpus_path()),
                   help="JSONL corpus (default: bundled synthetic corpus)")
    p.add_argument("--mode", choices=[m.value for m in DedupMode],
                   help="pair counting mode (default dedup_similarity)")
    p.add_argument("--top", type=int, help="only emit the strongest N entries")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("affect", help="two-step affect analysis of entry text")
    _add_common(p)
    p.add_argument("--input", help="JSONL with 'text' fields, or - for stdin")
    p.add_argument("--text", help="analyze one literal text")
    p.add_argument("--cvs-window", dest="cvs_window", type=int,
                   help="tokens after an expression searched for negations (default 3)")
    p.set_defaults(func=_cmd_affect)

    p = sub.add_parser("normalize", help="map distorted words to canonical vulgarities")
    _add_common(p)
    _add_normalizer_flags(p)
    p.add_argument("--text", help="normalize one word")
    p.add_argument("--input", help="whitespace-separated words file, or - for stdin")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("eval", help="cross-validate on a labeled corpus")
    _add_common(p)
    _add_svm_flags(p)
    p.add_argument("--input", default=str(corpus_path()),
                   help="labeled JSONL corpus (default: bundled synthetic corpus)")
    p.add_argument("--k", type=int, help="fold count (default 10)")
    p.add_argument("--seed", type=int, help="fold-assignment seed (default 0)")
    p.add_argument("--grid", action="store_true", help="evaluate all 12 feature cells")
    p.add_argument("--pooled", action="store_const", const=True,
                   help="pool counts across folds instead of averaging metrics")
    p.add_argument("--no-stratify", dest="stratified", action="store_const", const=False,
                   help="plain shuffled folds instead of class-balanced ones")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the triage HTTP service")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8630)
    p.add_argument("--state", required=True, help="directory for the event log")
    p.add_argument("--corpus", default=str(corpus_path()),
                   help="labeled corpus for the initial model")
    p.add_argument("--min-new-decisions", dest="min_new_decisions", type=int, default=5,
                   help="decisions required before a retrain is allowed")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (CorpusError, LexiconError, ModelError, EvalError, RankerError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
