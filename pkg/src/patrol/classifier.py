"""Linear SVM trained from scratch, rule screening, and label fusion.

The SVM is a linear max-margin classifier trained by dual coordinate
descent on the hinge loss.  The bias term rides along as one extra
always-on feature, so it is regularised like any weight.  Training stops
when a full pass over the data improves the primal objective by less than
the tolerance, or at the epoch cap.  A raw score of exactly zero counts as
non-harmful.

The rule screen is independent of the SVM: a set of regular-expression
families targets personal identifiers, addresses and contact data, probing
questions, and secret-spreading phrasing, and any vulgarity found in the
text (verbatim or through the distortion-tolerant matcher) raises the
screen to at least the doubtful level.

Fusion of the two detectors:

* rules say harmful                      -> harmful
* SVM harmful and rules at least doubtful -> harmful
* exactly one of {SVM harmful, rules doubtful} -> doubtful
* otherwise                              -> non-harmful
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import TriLabel, is_harmful
from .features import FeatureConfig, MainKind, Vocabulary, Weighting, build_vocabulary, vectorize
from .lexicons import POS, LexiconBundle, default_dir
from .normalizer import NormalizerConfig, match_canonical
from .tokenizer import AnalyzerConfig, Token, byte_offsets, tokenize


class ModelError(ValueError):
    """Raised for untrainable inputs or malformed model files."""


# ---------------------------------------------------------------------------
# Low-level trainer
# ---------------------------------------------------------------------------


def primal_objective(
    weights: Sequence[float],
    bias: float,
    xs: Sequence[dict],
    ys: Sequence[int],
    c: float,
) -> float:
    """0.5 * ||w||^2 (bias included) + C * total hinge loss."""
    reg = 0.5 * (sum(w * w for w in weights) + bias * bias)
    loss = 0.0
    for x, y in zip(xs, ys):
        margin = y * (sum(weights[j] * v for j, v in x.items()) + bias)
        if margin < 1.0:
            loss += 1.0 - margin
    return reg + c * loss


def train_svm(
    xs: Sequence[dict],
    ys: Sequence[int],
    dim: int,
    *,
    c: float = 1.0,
    tol: float = 1e-6,
    max_epochs: int = 1000,
    seed: int = 0,
) -> tuple[list[float], float, int, float]:
    """Dual coordinate descent on the hinge loss.

    ``xs`` are sparse vectors {column: value} with columns < ``dim``;
    ``ys`` are +1/-1.  Returns (weights, bias, epochs_run, final primal
    objective).
    """
    n = len(xs)
    if n == 0:
        raise ModelError("no training examples")
    if len(ys) != n:
        raise ModelError("labels and vectors differ in length")
    for y in ys:
        if y not in (-1, 1):
            raise ModelError(f"labels must be +1/-1, got {y!r}")
    if c <= 0.0:
        raise ModelError("c must be positive")

    # Precompute each example once: index list, value list, self dot product.
    # The bias feature (constant 1.0) contributes +1 to every Q_ii.
    idx: list[tuple] = []
    val: list[tuple] = []
    qii: list[float] = []
    for x in xs:
        items = sorted(x.items())
        idx.append(tuple(j for j, _ in items))
        val.append(tuple(v for _, v in items))
        qii.append(sum(v * v for _, v in items) + 1.0)

    w = [0.0] * dim
    b = 0.0
    alpha = [0.0] * n
    rng = random.Random(seed)
    order = list(range(n))

    prev = primal_objective(w, b, xs, ys, c)
    # The primal evaluated along dual iterates is not monotone, so remember
    # the best iterate seen and return that one.
    best_w, best_b, best_obj = list(w), b, prev
    epochs = 0
    for _ in range(max_epochs):
        epochs += 1
        rng.shuffle(order)
        for i in order:
            ji, vi = idx[i], val[i]
            y = ys[i]
            score = b
            for j, v in zip(ji, vi):
                score += w[j] * v
            g = y * score - 1.0
            a = alpha[i]
            if (a <= 0.0 and g >= 0.0) or (a >= c and g <= 0.0):
                continue
            a_new = a - g / qii[i]
            if a_new < 0.0:
                a_new = 0.0
            elif a_new > c:
                a_new = c
            d = (a_new - a) * y
            if d != 0.0:
                alpha[i] = a_new
                for j, v in zip(ji, vi):
                    w[j] += d * v
                b += d
        obj = primal_objective(w, b, xs, ys, c)
        if obj < best_obj:
            best_w, best_b, best_obj = list(w), b, obj
        if prev - obj < tol:
            break
        prev = obj
    return best_w, best_b, epochs, best_obj


# ---------------------------------------------------------------------------
# Trained model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SvmModel:
    """A trained linear model bundled with the statistics it was fit on.

    The vocabulary travels with the weights so that scoring new text uses
    exactly the term statistics seen at training time.
    """

    config: FeatureConfig
    vocab: Vocabulary
    weights: tuple
    bias: float

    def score_vector(self, vec: dict) -> float:
        return sum(self.weights[j] * v for j, v in vec.items()) + self.bias

    def score(self, tokens: Sequence[Token]) -> float:
        return self.score_vector(vectorize(tokens, self.vocab, self.config))

    def is_harmful(self, tokens: Sequence[Token]) -> bool:
        """Strictly positive scores flag the text; zero stays clean."""
        return self.score(tokens) > 0.0


@dataclass(frozen=True)
class TrainResult:
    model: SvmModel
    epochs: int
    objective: float


def train(
    token_lists: Sequence[Sequence[Token]],
    labels: Sequence[TriLabel],
    config: FeatureConfig | None = None,
    *,
    c: float = 1.0,
    tol: float = 1e-6,
    max_epochs: int = 1000,
    seed: int = 0,
    doubtful_is_harmful: bool = True,
) -> TrainResult:
    """Fit a model on tokenised entries with three-way labels."""
    if len(token_lists) != len(labels):
        raise ModelError("labels and token lists differ in length")
    config = config or FeatureConfig()
    vocab = build_vocabulary(token_lists, config.main)
    if len(vocab) == 0:
        raise ModelError("training corpus produced an empty vocabulary")
    xs = [vectorize(tokens, vocab, config) for tokens in token_lists]
    ys = [1 if is_harmful(lab, doubtful_is_harmful) else -1 for lab in labels]
    if len(set(ys)) < 2:
        raise ModelError("training needs both harmful and non-harmful examples")
    w, b, epochs, obj = train_svm(
        xs, ys, len(vocab), c=c, tol=tol, max_epochs=max_epochs, seed=seed
    )
    model = SvmModel(config=config, vocab=vocab, weights=tuple(w), bias=b)
    return TrainResult(model=model, epochs=epochs, objective=obj)


# ---------------------------------------------------------------------------
# Model persistence (versioned text format, bit-exact round trip)
# ---------------------------------------------------------------------------

_MODEL_MAGIC = "patrol-svm"
_MODEL_VERSION = 1


def _escape(key: str) -> str:
    return key.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(key: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(key):
        ch = key[i]
        if ch == "\\" and i + 1 < len(key):
            nxt = key[i + 1]
            if nxt == "\\":
                out.append("\\")
            elif nxt == "t":
                out.append("\t")
            elif nxt == "n":
                out.append("\n")
            else:
                raise ModelError(f"bad escape sequence \\{nxt} in model key")
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def save_model(model: SvmModel, path: str | Path) -> None:
    """Write a model as line-oriented text.

    Floats are written with repr() so loading reproduces them bit for bit;
    keys have backslash, tab, and newline escaped so the columns stay
    tab-separated.
    """
    vocab = model.vocab
    keys = sorted(vocab.index, key=vocab.index.get)
    lines = [
        f"{_MODEL_MAGIC} {_MODEL_VERSION}",
        f"main\t{model.config.main.value}",
        f"weighting\t{model.config.weighting.value}",
        f"raw_tf\t{1 if model.config.raw_tf else 0}",
        f"total_entries\t{vocab.total_entries}",
        f"bias\t{model.bias!r}",
        f"features\t{len(keys)}",
    ]
    for key in keys:
        col = vocab.index[key]
        lines.append(
            f"{_escape(key)}\t{vocab.doc_freq[key]}\t{vocab.corpus_freq[key]}"
            f"\t{model.weights[col]!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> SvmModel:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise ModelError(f"{path}: empty model file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != _MODEL_MAGIC:
        raise ModelError(f"{path}: not a model file")
    if head[1] != str(_MODEL_VERSION):
        raise ModelError(f"{path}: unsupported model version {head[1]}")

    fields: dict[str, str] = {}
    body_at = None
    for ln, line in enumerate(lines[1:], start=2):
        name, _, value = line.partition("\t")
        fields[name] = value
        if name == "features":
            body_at = ln
            break
    required = ("main", "weighting", "raw_tf", "total_entries", "bias", "features")
    for name in required:
        if name not in fields:
            raise ModelError(f"{path}: missing header field {name!r}")
    try:
        config = FeatureConfig(
            main=MainKind(fields["main"]),
            weighting=Weighting(fields["weighting"]),
            raw_tf=fields["raw_tf"] == "1",
        )
        total_entries = int(fields["total_entries"])
        bias = float(fields["bias"])
        n_features = int(fields["features"])
    except ValueError as exc:
        raise ModelError(f"{path}: bad header value ({exc})") from exc

    rows = lines[body_at:]
    if len(rows) != n_features:
        raise ModelError(
            f"{path}: expected {n_features} feature rows, found {len(rows)}"
        )
    index: dict[str, int] = {}
    doc_freq: dict[str, int] = {}
    corpus_freq: dict[str, int] = {}
    weights: list[float] = []
    for i, row in enumerate(rows):
        parts = row.split("\t")
        if len(parts) != 4:
            raise ModelError(f"{path}: bad feature row {i + 1}")
        key = _unescape(parts[0])
        if key in index:
            raise ModelError(f"{path}: duplicate feature key {key!r}")
        try:
            index[key] = i
            doc_freq[key] = int(parts[1])
            corpus_freq[key] = int(parts[2])
            weights.append(float(parts[3]))
        except ValueError as exc:
            raise ModelError(f"{path}: bad feature row {i + 1} ({exc})") from exc
    vocab = Vocabulary(
        main=config.main,
        index=index,
        doc_freq=doc_freq,
        corpus_freq=corpus_freq,
        total_entries=total_entries,
    )
    return SvmModel(config=config, vocab=vocab, weights=tuple(weights), bias=bias)


# ---------------------------------------------------------------------------
# Rule screen
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    rule_id: str
    family: str
    pattern: re.Pattern
    label: TriLabel

    def __post_init__(self) -> None:
        if self.label not in (TriLabel.DOUBTFUL, TriLabel.HARMFUL):
            raise ModelError(
                f"rule {self.rule_id}: label must be D or H, got {self.label.value}"
            )


@dataclass(frozen=True)
class RuleHit:
    rule_id: str
    family: str
    label: TriLabel
    start: int
    end: int


@dataclass(frozen=True)
class VulgarityHit:
    surface: str
    canonical: str
    start: int
    end: int
    via: str  # "direct" or "similarity"


@dataclass(frozen=True)
class RuleScreenResult:
    label: TriLabel
    rule_hits: tuple
    vulgarity_hits: tuple


def load_rules(path: str | Path | None = None) -> tuple:
    """Read rule definitions (id, family, regex, target label) from TSV."""
    path = Path(path) if path is not None else default_dir() / "rules.tsv"
    rules: list[Rule] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ModelError(f"{path}:{ln}: expected 4 columns, got {len(parts)}")
            rule_id, family, regex, label = parts
            if rule_id in seen:
                raise ModelError(f"{path}:{ln}: duplicate rule id {rule_id!r}")
            seen.add(rule_id)
            try:
                pattern = re.compile(regex)
            except re.error as exc:
                raise ModelError(f"{path}:{ln}: bad regex ({exc})") from exc
            try:
                target = TriLabel(label)
            except ValueError as exc:
                raise ModelError(f"{path}:{ln}: bad label {label!r}") from exc
            rules.append(Rule(rule_id, family, pattern, target))
    return tuple(rules)


_MIN_SIMILARITY_LENGTH = 3


class RuleScreen:
    """Regex families plus vulgarity detection over tokenised text."""

    def __init__(
        self,
        bundle: LexiconBundle,
        rules: tuple | None = None,
        analyzer_config: AnalyzerConfig | None = None,
        normalizer_config: NormalizerConfig | None = None,
    ) -> None:
        self.bundle = bundle
        self.rules = rules if rules is not None else load_rules()
        self.analyzer_config = analyzer_config or AnalyzerConfig.from_bundle(bundle)
        self.normalizer_config = normalizer_config or NormalizerConfig()
        self._surfaces = bundle.vulgar_surfaces()

    def screen(self, text: str, tokens: Sequence[Token] | None = None) -> RuleScreenResult:
        if tokens is None:
            tokens = tokenize(text, self.analyzer_config)
        offsets = byte_offsets(text)

        rule_hits: list[RuleHit] = []
        for rule in self.rules:
            for match in rule.pattern.finditer(text):
                rule_hits.append(
                    RuleHit(
                        rule_id=rule.rule_id,
                        family=rule.family,
                        label=rule.label,
                        start=offsets[match.start()],
                        end=offsets[match.end()],
                    )
                )

        vulgarity_hits: list[VulgarityHit] = []
        for token in tokens:
            folded = token.surface.casefold()
            canonical = self._surfaces.get(folded)
            if canonical is not None:
                vulgarity_hits.append(
                    VulgarityHit(token.surface, canonical, token.start, token.end, "direct")
                )
                continue
            if token.pos is not POS.UNKNOWN or len(folded) < _MIN_SIMILARITY_LENGTH:
                continue
            match = match_canonical(folded, self.bundle, self.normalizer_config)
            if match is not None:
                vulgarity_hits.append(
                    VulgarityHit(token.surface, match.canonical, token.start, token.end, "similarity")
                )

        label = TriLabel.NORMAL
        if vulgarity_hits:
            label = TriLabel.DOUBTFUL
        for hit in rule_hits:
            if hit.label.severity > label.severity:
                label = hit.label
        rule_hits.sort(key=lambda h: (h.start, h.end, h.rule_id))
        return RuleScreenResult(
            label=label,
            rule_hits=tuple(rule_hits),
            vulgarity_hits=tuple(vulgarity_hits),
        )


# ---------------------------------------------------------------------------
# Fusion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    label: TriLabel
    svm_score: float
    svm_harmful: bool
    rule_label: TriLabel
    rule_hits: tuple
    vulgarity_hits: tuple


def fuse(svm_harmful: bool, rule_label: TriLabel) -> TriLabel:
    """Combine the two detectors into the final three-way label."""
    if rule_label is TriLabel.HARMFUL:
        return TriLabel.HARMFUL
    rules_doubtful = rule_label is TriLabel.DOUBTFUL
    if svm_harmful and rules_doubtful:
        return TriLabel.HARMFUL
    if svm_harmful != rules_doubtful:
        return TriLabel.DOUBTFUL
    return TriLabel.NORMAL


def classify_text(
    text: str,
    model: SvmModel,
    screen: RuleScreen,
    tokens: Sequence[Token] | None = None,
) -> Classification:
    if tokens is None:
        tokens = tokenize(text, screen.analyzer_config)
    score = model.score(tokens)
    svm_harmful = score > 0.0
    screened = screen.screen(text, tokens)
    return Classification(
        label=fuse(svm_harmful, screened.label),
        svm_score=score,
        svm_harmful=svm_harmful,
        rule_label=screened.label,
        rule_hits=screened.rule_hits,
        vulgarity_hits=screened.vulgarity_hits,
    )
