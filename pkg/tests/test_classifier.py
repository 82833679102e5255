"""SVM training, model persistence, rule screening, and label fusion."""

from __future__ import annotations

import random

import pytest

from patrol.classifier import (
    ModelError,
    RuleScreen,
    SvmModel,
    classify_text,
    fuse,
    load_model,
    load_rules,
    primal_objective,
    save_model,
    train,
    train_svm,
)
from patrol.corpus import TriLabel
from patrol.features import FeatureConfig, MainKind, Vocabulary, Weighting, Weighting as W
from patrol.lexicons import POS
from patrol.tokenizer import Token


def tok(surface: str, pos: POS = POS.NOUN) -> Token:
    return Token(surface=surface, pos=pos, start=0, end=len(surface.encode("utf-8")))


# ---------------------------------------------------------------------------
# train_svm
# ---------------------------------------------------------------------------


def separable_set(n: int = 200, seed: int = 3):
    """Two Gaussian blobs on a 2-D plane with a wide margin."""
    rng = random.Random(seed)
    xs, ys = [], []
    for i in range(n):
        y = 1 if i % 2 == 0 else -1
        cx = 3.0 * y
        xs.append({0: cx + rng.uniform(-1, 1), 1: rng.uniform(-1, 1)})
        ys.append(y)
    return xs, ys


def test_svm_separates_wide_margin_blobs():
    xs, ys = separable_set()
    w, b, epochs, obj = train_svm(xs, ys, 2, seed=0)
    predictions = [
        1 if sum(w[j] * v for j, v in x.items()) + b > 0 else -1 for x in xs
    ]
    assert predictions == ys
    assert epochs >= 1
    assert obj >= 0.0


def test_svm_objective_matches_recomputation():
    xs, ys = separable_set(80, seed=11)
    w, b, _, reported = train_svm(xs, ys, 2, seed=5)
    assert primal_objective(w, b, xs, ys, 1.0) == pytest.approx(reported, abs=1e-9)


def test_svm_objective_decreases_with_more_epochs():
    xs, ys = separable_set(60, seed=2)
    _, _, _, early = train_svm(xs, ys, 2, max_epochs=1, tol=0.0)
    _, _, _, late = train_svm(xs, ys, 2, max_epochs=30, tol=0.0)
    assert late <= early + 1e-12


def test_svm_non_separable_overlap_limits_accuracy():
    # 1-D points with heavily overlapping classes: no linear rule does well
    rng = random.Random(17)
    xs, ys = [], []
    for i in range(200):
        y = 1 if i % 2 == 0 else -1
        xs.append({0: rng.gauss(0.2 * y, 1.0)})
        ys.append(y)
    w, b, _, _ = train_svm(xs, ys, 1, seed=0)
    correct = sum(
        1
        for x, y in zip(xs, ys)
        if (1 if sum(w[j] * v for j, v in x.items()) + b > 0 else -1) == y
    )
    assert correct / len(xs) <= 0.75


def test_svm_deterministic_for_fixed_seed():
    xs, ys = separable_set(100, seed=8)
    first = train_svm(xs, ys, 2, seed=42)
    second = train_svm(xs, ys, 2, seed=42)
    assert first == second


def test_svm_input_validation():
    with pytest.raises(ModelError):
        train_svm([], [], 1)
    with pytest.raises(ModelError):
        train_svm([{0: 1.0}], [1, -1], 1)
    with pytest.raises(ModelError):
        train_svm([{0: 1.0}], [0], 1)
    with pytest.raises(ModelError):
        train_svm([{0: 1.0}], [1], 1, c=0.0)


def test_svm_bias_is_regularized():
    # one constant point: with the bias in the regularizer, the optimum of
    # 0.5 b^2 + C max(0, 1 - b) at C=1 sits at b=1 exactly (alpha hits C)
    xs, ys = [{}], [1]
    w, b, _, obj = train_svm(xs, ys, 0, c=1.0, tol=0.0, max_epochs=50)
    assert b == pytest.approx(1.0, abs=1e-9)
    assert obj == pytest.approx(0.5, abs=1e-9)


# ---------------------------------------------------------------------------
# train() on tokens
# ---------------------------------------------------------------------------


def token_fixture():
    harmful = [[tok("baka"), tok("shine")], [tok("baka"), tok("kuzu")]]
    normal = [[tok("tenki"), tok("ii")], [tok("neko"), tok("kawaii")]]
    token_lists = harmful + normal
    labels = [TriLabel.HARMFUL, TriLabel.HARMFUL, TriLabel.NORMAL, TriLabel.NORMAL]
    return token_lists, labels


def test_train_end_to_end_and_scoring():
    token_lists, labels = token_fixture()
    result = train(token_lists, labels, FeatureConfig(MainKind.WORD, W.TFIDF))
    model = result.model
    assert model.is_harmful([tok("baka"), tok("shine")])
    assert not model.is_harmful([tok("neko"), tok("kawaii")])
    # unseen-only text scores through the bias alone
    assert model.score([tok("qqq")]) == pytest.approx(model.bias)


def test_train_doubtful_projection():
    token_lists, labels = token_fixture()
    labels = [TriLabel.DOUBTFUL, TriLabel.HARMFUL, TriLabel.NORMAL, TriLabel.NORMAL]
    as_harmful = train(token_lists, labels, doubtful_is_harmful=True)
    assert as_harmful.model.is_harmful(token_lists[0])
    as_normal = train(token_lists, labels, doubtful_is_harmful=False)
    assert not as_normal.model.is_harmful(token_lists[0])


def test_train_rejects_single_class():
    token_lists, _ = token_fixture()
    with pytest.raises(ModelError):
        train(token_lists, [TriLabel.HARMFUL] * 4)


def test_train_rejects_length_mismatch():
    token_lists, labels = token_fixture()
    with pytest.raises(ModelError):
        train(token_lists, labels[:-1])


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def test_model_round_trip_bit_exact(tmp_path):
    token_lists, labels = token_fixture()
    model = train(token_lists, labels).model
    path = tmp_path / "model.tsv"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded == model
    assert loaded.weights == model.weights  # tuple equality is bit-exact
    assert loaded.bias == model.bias


def test_model_round_trip_with_hostile_keys(tmp_path):
    # keys containing the column separator and escapes must survive
    vocab = Vocabulary(
        main=MainKind.WORD,
        index={"a\tb": 0, "c\\d": 1, "e\nf": 2},
        doc_freq={"a\tb": 1, "c\\d": 2, "e\nf": 3},
        corpus_freq={"a\tb": 4, "c\\d": 5, "e\nf": 6},
        total_entries=7,
    )
    model = SvmModel(
        config=FeatureConfig(MainKind.WORD, Weighting.IDF),
        vocab=vocab,
        weights=(0.125, -2.5, 3.0),
        bias=-0.75,
    )
    path = tmp_path / "hostile.tsv"
    save_model(model, path)
    assert load_model(path) == model


def test_load_model_rejects_garbage(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("not a model\n", encoding="utf-8")
    with pytest.raises(ModelError):
        load_model(path)
    path.write_text("", encoding="utf-8")
    with pytest.raises(ModelError):
        load_model(path)


def test_load_model_rejects_row_count_mismatch(tmp_path):
    token_lists, labels = token_fixture()
    model = train(token_lists, labels).model
    path = tmp_path / "model.tsv"
    save_model(model, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
    with pytest.raises(ModelError):
        load_model(path)


# ---------------------------------------------------------------------------
# rule screen
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def screen(bundle):
    return RuleScreen(bundle)


def test_rules_load_and_validate(tmp_path):
    rules = load_rules()
    assert rules
    assert all(r.label in (TriLabel.DOUBTFUL, TriLabel.HARMFUL) for r in rules)
    bad = tmp_path / "rules.tsv"
    bad.write_text("r1\tfam\t[broken\tH\n", encoding="utf-8")
    with pytest.raises(ModelError):
        load_rules(bad)
    bad.write_text("r1\tfam\tx\tN\n", encoding="utf-8")
    with pytest.raises(ModelError):
        load_rules(bad)


def test_screen_full_name_is_harmful(screen):
    result = screen.screen("Tanaka Tarou wa baka da")
    assert result.label is TriLabel.HARMFUL
    assert any(h.label is TriLabel.HARMFUL for h in result.rule_hits)


def test_screen_rules_are_case_sensitive(screen):
    # lowercased names no longer look like proper names
    lowered = screen.screen("tanaka tarou wa ii hito da")
    assert not any(h.family == "identity" for h in lowered.rule_hits)


def test_screen_phone_number(screen):
    result = screen.screen("denwa bango wa 090-1234-5678 da yo")
    assert result.label is TriLabel.HARMFUL


def test_screen_vulgarity_floors_at_doubtful(screen):
    result = screen.screen("omae wa baka da")
    assert result.label is TriLabel.DOUBTFUL
    assert result.vulgarity_hits
    hit = result.vulgarity_hits[0]
    assert hit.canonical == "baka" and hit.via == "direct"


def test_screen_direct_hit_any_pos(screen, bundle):
    # a registered variant is a direct hit even when supplied pre-tokenized
    # with a non-Unknown POS
    tokens = [Token("kimosu", POS.ADJECTIVE, 0, 6)]
    result = screen.screen("kimosu", tokens)
    assert result.vulgarity_hits[0].via == "direct"
    assert result.vulgarity_hits[0].canonical == "kimoi"


def test_screen_similarity_only_for_unknown_tokens(screen):
    tokens = [Token("kimore", POS.UNKNOWN, 0, 6)]
    result = screen.screen("kimore", tokens)
    assert result.vulgarity_hits
    assert result.vulgarity_hits[0].via == "similarity"
    assert result.vulgarity_hits[0].canonical == "kimoi"

    known = [Token("kimore", POS.NOUN, 0, 6)]
    assert screen.screen("kimore", known).vulgarity_hits == ()


def test_screen_similarity_length_gate(screen):
    short = [Token("bk", POS.UNKNOWN, 0, 2)]
    assert screen.screen("bk", short).vulgarity_hits == ()


def test_screen_clean_text(screen):
    result = screen.screen("kyou wa ii tenki da ne")
    assert result.label is TriLabel.NORMAL
    assert result.rule_hits == () and result.vulgarity_hits == ()


def test_screen_offsets_are_bytes(screen):
    text = "あいつはうざい"
    result = screen.screen(text)
    assert result.vulgarity_hits
    hit = result.vulgarity_hits[0]
    assert text.encode("utf-8")[hit.start : hit.end].decode("utf-8") == hit.surface


# ---------------------------------------------------------------------------
# fusion
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "svm_harmful,rule_label,expected",
    [
        (False, TriLabel.NORMAL, TriLabel.NORMAL),
        (True, TriLabel.NORMAL, TriLabel.DOUBTFUL),
        (False, TriLabel.DOUBTFUL, TriLabel.DOUBTFUL),
        (True, TriLabel.DOUBTFUL, TriLabel.HARMFUL),
        (False, TriLabel.HARMFUL, TriLabel.HARMFUL),
        (True, TriLabel.HARMFUL, TriLabel.HARMFUL),
    ],
)
def test_fusion_grid(svm_harmful, rule_label, expected):
    assert fuse(svm_harmful, rule_label) is expected


def test_classify_text_combines_detectors(bundle, corpus_tokens, screen):
    ids, token_lists, labels = corpus_tokens
    model = train(token_lists, labels, FeatureConfig(MainKind.WORD, W.TFIDF)).model
    harmful = classify_text("aitsu wa baka da shine kiero", model, screen)
    assert harmful.label is TriLabel.HARMFUL
    assert harmful.svm_harmful and harmful.rule_label is not TriLabel.NORMAL
    clean = classify_text("kyou wa ii tenki da ne", model, screen)
    assert clean.label is TriLabel.NORMAL
