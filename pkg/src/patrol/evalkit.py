"""Precision/recall/F1, agreement, cross-validation, and the model grid.

Metrics follow the selected/relevant convention: with ``n`` entries
selected by the system, ``c`` entries relevant per the gold labels, and
``s`` of the selected actually relevant,

    P = s / n      R = s / c      F = 2PR / (P + R)

and any zero denominator yields 0.0 rather than an error.

Cross-validation re-tokenises nothing and leaks nothing: each fold's model
is trained only on the other folds, so vocabulary and term statistics come
from training data alone.  The grid runner evaluates all twelve
main-feature x weighting combinations on one shared fold plan, making
cells directly comparable and the whole run reproducible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .classifier import train
from .corpus import FoldPlan, TriLabel, assign_folds, is_harmful
from .features import FeatureConfig, MainKind, Weighting
from .tokenizer import Token


class EvalError(ValueError):
    """Raised for inputs that make an evaluation meaningless."""


# ---------------------------------------------------------------------------
# Point metrics
# ---------------------------------------------------------------------------


def f_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    selected: int  # n: entries the system flagged
    relevant: int  # c: entries the gold labels flag
    correct: int   # s: flagged entries that are truly flagged

    @classmethod
    def from_counts(cls, selected: int, relevant: int, correct: int) -> "Metrics":
        if min(selected, relevant, correct) < 0:
            raise EvalError("counts must be non-negative")
        if correct > selected or correct > relevant:
            raise EvalError("correct count exceeds selected or relevant count")
        precision = correct / selected if selected else 0.0
        recall = correct / relevant if relevant else 0.0
        return cls(
            precision=precision,
            recall=recall,
            f1=f_score(precision, recall),
            selected=selected,
            relevant=relevant,
            correct=correct,
        )


def score_binary(predicted: Sequence[bool], actual: Sequence[bool]) -> Metrics:
    """Metrics for a run of binary decisions against gold booleans."""
    if len(predicted) != len(actual):
        raise EvalError("predicted and actual differ in length")
    selected = sum(1 for p in predicted if p)
    relevant = sum(1 for a in actual if a)
    correct = sum(1 for p, a in zip(predicted, actual) if p and a)
    return Metrics.from_counts(selected, relevant, correct)


# ---------------------------------------------------------------------------
# Annotator agreement
# ---------------------------------------------------------------------------


def cohen_kappa(a: Sequence, b: Sequence) -> float:
    """Chance-corrected agreement between two label sequences.

    When expected agreement is already perfect (both raters constant on the
    same category), observed perfection scores 1.0 and anything else 0.0.
    """
    if len(a) != len(b):
        raise EvalError("rater sequences differ in length")
    n = len(a)
    if n == 0:
        raise EvalError("cannot compute agreement on zero items")
    observed = sum(1 for x, y in zip(a, b) if x == y) / n
    counts_a = Counter(a)
    counts_b = Counter(b)
    expected = sum(
        (counts_a[k] / n) * (counts_b[k] / n) for k in counts_a.keys() | counts_b.keys()
    )
    if expected >= 1.0:
        return 1.0 if observed >= 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)


def mean_pairwise_kappa(raters: Sequence[Sequence]) -> float:
    """Average agreement over every pair of raters."""
    if len(raters) < 2:
        raise EvalError("need at least two raters")
    total = 0.0
    pairs = 0
    for i in range(len(raters)):
        for j in range(i + 1, len(raters)):
            total += cohen_kappa(raters[i], raters[j])
            pairs += 1
    return total / pairs


# ---------------------------------------------------------------------------
# Cross-validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CvResult:
    config: FeatureConfig
    precision: float
    recall: float
    f1: float
    folds: tuple  # per-fold Metrics
    pooled: bool


def cross_validate(
    ids: Sequence[str],
    token_lists: Sequence[Sequence[Token]],
    labels: Sequence[TriLabel],
    config: FeatureConfig | None = None,
    *,
    k: int = 10,
    seed: int = 0,
    stratified: bool = True,
    doubtful_is_harmful: bool = True,
    pooled: bool = False,
    plan: FoldPlan | None = None,
    c: float = 1.0,
    tol: float = 1e-6,
    max_epochs: int = 100,
    svm_seed: int = 0,
) -> CvResult:
    """k-fold cross-validation of the classifier on tokenised entries.

    By default fold metrics are averaged; ``pooled=True`` sums the counts
    across folds and computes one set of metrics from the totals.  Pass a
    ``plan`` to reuse one fold assignment across several configurations.
    """
    if not (len(ids) == len(token_lists) == len(labels)):
        raise EvalError("ids, token lists, and labels differ in length")
    config = config or FeatureConfig()
    if plan is None:
        plan = assign_folds(
            list(zip(ids, labels)),
            k,
            seed=seed,
            stratified=stratified,
            doubtful_is_harmful=doubtful_is_harmful,
        )
    row_of = {eid: i for i, eid in enumerate(ids)}
    fold_metrics: list[Metrics] = []
    for fold in range(plan.k):
        test_rows = sorted(row_of[eid] for eid in plan.fold_ids(fold))
        test_set = set(test_rows)
        train_rows = [i for i in range(len(ids)) if i not in test_set]
        train_flags = {
            is_harmful(labels[i], doubtful_is_harmful) for i in train_rows
        }
        if len(train_flags) < 2:
            raise EvalError(f"fold {fold}: training split contains a single class")
        result = train(
            [token_lists[i] for i in train_rows],
            [labels[i] for i in train_rows],
            config,
            c=c,
            tol=tol,
            max_epochs=max_epochs,
            seed=svm_seed,
            doubtful_is_harmful=doubtful_is_harmful,
        )
        predicted = [result.model.is_harmful(token_lists[i]) for i in test_rows]
        actual = [is_harmful(labels[i], doubtful_is_harmful) for i in test_rows]
        fold_metrics.append(score_binary(predicted, actual))

    if pooled:
        totals = Metrics.from_counts(
            selected=sum(m.selected for m in fold_metrics),
            relevant=sum(m.relevant for m in fold_metrics),
            correct=sum(m.correct for m in fold_metrics),
        )
        agg = (totals.precision, totals.recall, totals.f1)
    else:
        n_folds = len(fold_metrics)
        agg = (
            sum(m.precision for m in fold_metrics) / n_folds,
            sum(m.recall for m in fold_metrics) / n_folds,
            sum(m.f1 for m in fold_metrics) / n_folds,
        )
    return CvResult(
        config=config,
        precision=agg[0],
        recall=agg[1],
        f1=agg[2],
        folds=tuple(fold_metrics),
        pooled=pooled,
    )


def run_grid(
    ids: Sequence[str],
    token_lists: Sequence[Sequence[Token]],
    labels: Sequence[TriLabel],
    *,
    k: int = 10,
    seed: int = 0,
    stratified: bool = True,
    doubtful_is_harmful: bool = True,
    pooled: bool = False,
    c: float = 1.0,
    tol: float = 1e-6,
    max_epochs: int = 100,
    svm_seed: int = 0,
) -> dict:
    """Cross-validate every main-feature x weighting cell on shared folds.

    Returns {cell name: CvResult} for all twelve combinations, in a stable
    order.  Deterministic for fixed seeds: running twice gives identical
    numbers.
    """
    plan = assign_folds(
        list(zip(ids, labels)),
        k,
        seed=seed,
        stratified=stratified,
        doubtful_is_harmful=doubtful_is_harmful,
    )
    results: dict[str, CvResult] = {}
    for main in MainKind:
        for weighting in Weighting:
            config = FeatureConfig(main=main, weighting=weighting)
            results[config.cell_name] = cross_validate(
                ids,
                token_lists,
                labels,
                config,
                k=k,
                doubtful_is_harmful=doubtful_is_harmful,
                pooled=pooled,
                plan=plan,
                c=c,
                tol=tol,
                max_epochs=max_epochs,
                svm_seed=svm_seed,
            )
    return results
