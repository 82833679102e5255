"""The `patrol` command line, driven in-process through main()."""

from __future__ import annotations

import json

import pytest

from patrol.classifier import load_model
from patrol.cli import main
from patrol.corpus import Dataset, save_dataset
from patrol.synth import build_corpus


@pytest.fixture(scope="module")
def small_corpus(tmp_path_factory):
    """First sixty entries of the bundled corpus: small but both-class."""
    full = build_corpus()
    ds = Dataset(entries=list(full.entries[:60]))
    path = tmp_path_factory.mktemp("cli") / "corpus.jsonl"
    save_dataset(ds, path)
    return path


@pytest.fixture(scope="module")
def model_path(tmp_path_factory):
    # trained on the full bundled corpus (the default input) so that label
    # assertions below reflect a realistically fitted model
    path = tmp_path_factory.mktemp("cli-model") / "model.tsv"
    assert main(["train", "--model", str(path)]) == 0
    return path


def out_records(capsys):
    captured = capsys.readouterr()
    return [json.loads(line) for line in captured.out.splitlines() if line], captured.err


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------


def test_train_reports_and_persists(small_corpus, tmp_path, capsys):
    model_file = tmp_path / "m.tsv"
    code = main(["train", "--input", str(small_corpus), "--model", str(model_file)])
    records, _ = out_records(capsys)
    assert code == 0
    (record,) = records
    assert record["cell"] == "wordpos/tfidf"
    assert record["entries"] == 60
    assert record["features"] > 0
    assert record["epochs"] >= 1
    loaded = load_model(model_file)
    assert loaded.config.cell_name == "wordpos/tfidf"


def test_train_cell_from_config_file_and_flag_override(small_corpus, tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text('{"main": "pos", "weighting": "occ"}', encoding="utf-8")
    model_file = tmp_path / "m.tsv"

    base = ["--input", str(small_corpus), "--model", str(model_file), "--config", str(config)]
    assert main(["train", *base]) == 0
    records, _ = out_records(capsys)
    assert records[0]["cell"] == "pos/occ"

    # an explicit flag beats the config file
    assert main(["train", *base, "--main", "word"]) == 0
    records, _ = out_records(capsys)
    assert records[0]["cell"] == "word/occ"


def test_train_missing_corpus_exits_1(tmp_path, capsys):
    code = main(["train", "--input", str(tmp_path / "nope.jsonl"), "--model", str(tmp_path / "m")])
    _, err = out_records(capsys)
    assert code == 1
    assert "error:" in err


def test_unknown_config_key_exits_1(small_corpus, tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text('{"bogus": true}', encoding="utf-8")
    code = main(
        ["train", "--input", str(small_corpus), "--model", str(tmp_path / "m"),
         "--config", str(config)]
    )
    _, err = out_records(capsys)
    assert code == 1
    assert "unknown keys" in err and "bogus" in err


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def test_classify_literal_text(model_path, capsys):
    code = main(["classify", "--model", str(model_path), "--text", "aitsu wa baka da shine"])
    records, _ = out_records(capsys)
    assert code == 0
    (record,) = records
    assert record["id"] == "text-1"
    assert record["label"] in ("D", "H")
    assert record["vulgarity_hits"]
    assert {h["canonical"] for h in record["vulgarity_hits"]} >= {"baka", "shine"}


def test_classify_jsonl_file(model_path, tmp_path, capsys):
    lines = [
        json.dumps({"id": "a7", "text": "kyou wa ii tenki da ne"}),
        json.dumps({"text": "omae wa baka da"}),  # no id: numbered by line
    ]
    src = tmp_path / "in.jsonl"
    src.write_text("\n".join(lines) + "\n", encoding="utf-8")
    code = main(["classify", "--model", str(model_path), "--input", str(src)])
    records, _ = out_records(capsys)
    assert code == 0
    assert [r["id"] for r in records] == ["a7", "line-2"]
    assert records[0]["label"] == "N"
    assert records[1]["label"] in ("D", "H")


def test_classify_requires_some_input(model_path, capsys):
    code = main(["classify", "--model", str(model_path)])
    _, err = out_records(capsys)
    assert code == 1
    assert "provide --text or --input" in err


def test_classify_pretty_keeps_stdout_clean(model_path, capsys):
    code = main(
        ["classify", "--model", str(model_path), "--text", "omae wa baka da", "--pretty"]
    )
    records, err = out_records(capsys)
    assert code == 0
    assert len(records) == 1  # stdout stayed machine-readable
    assert "label" in err.splitlines()[0]  # table header went to stderr


def test_classify_bad_jsonl_names_line(model_path, tmp_path, capsys):
    src = tmp_path / "in.jsonl"
    src.write_text('{"text": "ok"}\n{broken\n', encoding="utf-8")
    code = main(["classify", "--model", str(model_path), "--input", str(src)])
    _, err = out_records(capsys)
    assert code == 1
    assert ":2: bad JSON" in err


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------


def test_rank_orders_and_limits(small_corpus, capsys):
    code = main(["rank", "--input", str(small_corpus)])
    records, _ = out_records(capsys)
    assert code == 0
    assert len(records) == 60
    scores = [r["score"] for r in records]
    assert scores == sorted(scores, reverse=True)
    assert records[0]["pairs"]  # the strongest entry has pair detail

    assert main(["rank", "--input", str(small_corpus), "--top", "5"]) == 0
    records, _ = out_records(capsys)
    assert len(records) == 5


def test_rank_mode_from_config(small_corpus, tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text('{"mode": "raw"}', encoding="utf-8")
    code = main(["rank", "--input", str(small_corpus), "--config", str(config), "--top", "3"])
    records, _ = out_records(capsys)
    assert code == 0 and len(records) == 3


# ---------------------------------------------------------------------------
# affect
# ---------------------------------------------------------------------------


def test_affect_literal_text(capsys):
    code = main(["affect", "--text", "Kyo wa nante kimochi ii hi nanda !"])
    records, _ = out_records(capsys)
    assert code == 0
    (record,) = records
    assert record["emotive"] is True
    assert record["emotive_value"] >= 1
    assert "joy" in record["emotions"]
    assert any(e["lemma"] == "kimochi ii" for e in record["expressions"])


def test_affect_non_emotive_text(capsys):
    code = main(["affect", "--text", "kono hanashi wa kudaranai to omou"])
    records, _ = out_records(capsys)
    assert code == 0
    assert records[0]["emotive"] is False
    assert records[0]["emotions"] == []


# ---------------------------------------------------------------------------
# normalize
# ---------------------------------------------------------------------------


def test_normalize_word(capsys):
    code = main(["normalize", "--text", "kimoooi"])
    records, _ = out_records(capsys)
    assert code == 0
    (record,) = records
    assert record["canonical"] == "kimoi"
    assert record["distance"] == 0
    assert "strip_prolongations" in record["trace"]


def test_normalize_threshold_precedence(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text('{"threshold": 1}', encoding="utf-8")

    # config tightens the budget: kimosu (distance 2) no longer matches
    assert main(["normalize", "--text", "kimosu", "--config", str(config)]) == 0
    records, _ = out_records(capsys)
    assert records[0]["canonical"] is None

    # explicit flag restores it
    assert main(
        ["normalize", "--text", "kimosu", "--config", str(config), "--threshold", "2"]
    ) == 0
    records, _ = out_records(capsys)
    assert records[0]["canonical"] == "kimoi"


def test_normalize_words_file(tmp_path, capsys):
    src = tmp_path / "words.txt"
    src.write_text("kimoooi uzeee\nnonsense\n", encoding="utf-8")
    code = main(["normalize", "--input", str(src)])
    records, _ = out_records(capsys)
    assert code == 0
    assert [r["word"] for r in records] == ["kimoooi", "uzeee", "nonsense"]
    assert records[2]["canonical"] is None


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def test_eval_single_cell(small_corpus, capsys):
    code = main(["eval", "--input", str(small_corpus), "--k", "3"])
    records, _ = out_records(capsys)
    assert code == 0
    (record,) = records
    assert record["cell"] == "wordpos/tfidf"
    assert 0.0 <= record["f1"] <= 1.0
    assert len(record["fold_f1"]) == 3


def test_eval_grid_emits_all_cells(small_corpus, capsys):
    code = main(["eval", "--input", str(small_corpus), "--k", "2", "--grid"])
    records, _ = out_records(capsys)
    assert code == 0
    assert len(records) == 12
    cells = {r["cell"] for r in records}
    assert "wordpos/tfidf" in cells and "pos/occ" in cells


def test_eval_seed_changes_folds_flag_wins_over_config(small_corpus, tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text('{"k": 2, "seed": 1}', encoding="utf-8")
    assert main(["eval", "--input", str(small_corpus), "--config", str(config)]) == 0
    from_config, _ = out_records(capsys)
    assert len(from_config[0]["fold_f1"]) == 2  # k came from the config file

    assert main(
        ["eval", "--input", str(small_corpus), "--config", str(config), "--k", "3"]
    ) == 0
    from_flag, _ = out_records(capsys)
    assert len(from_flag[0]["fold_f1"]) == 3  # explicit flag beat the config


# ---------------------------------------------------------------------------
# usage errors
# ---------------------------------------------------------------------------


def test_missing_required_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify"])  # --model is required
    assert exc.value.code == 2


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_no_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
