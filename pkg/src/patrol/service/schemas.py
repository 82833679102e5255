"""Request and response bodies for the triage API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class EntryIn(BaseModel):
    """A new entry to score and queue for review."""

    id: Optional[str] = Field(default=None, description="client id; assigned if omitted")
    text: str = Field(min_length=1)
    source: str = "api"
    timestamp: Optional[str] = Field(default=None, description="ISO-8601; now if omitted")


class RuleHitOut(BaseModel):
    rule: str
    family: str
    label: str
    start: int
    end: int


class VulgarityHitOut(BaseModel):
    surface: str
    canonical: str
    via: str
    start: int
    end: int


class AffectOut(BaseModel):
    emotive: bool
    emotive_value: int
    emotions: list[str]


class HighlightOut(BaseModel):
    start: int
    end: int
    kind: str
    detail: str


class MachineScore(BaseModel):
    """Everything the machine concluded about an entry, frozen at scoring time."""

    model_version: int
    label: str
    svm_score: float
    svm_harmful: bool
    rule_label: str
    rule_hits: list[RuleHitOut]
    vulgarity_hits: list[VulgarityHitOut]
    affect: AffectOut
    highlights: list[HighlightOut]


class DecisionIn(BaseModel):
    label: str = Field(pattern="^[NDH]$")
    reviewer: str = Field(min_length=1)
    note: str = ""


class DecisionOut(BaseModel):
    label: str
    reviewer: str
    note: str
    decided_at: str


class EntryOut(BaseModel):
    id: str
    text: str
    source: str
    timestamp: str
    machine: MachineScore
    decision: Optional[DecisionOut] = None


class QueuePage(BaseModel):
    total: int
    page: int
    page_size: int
    items: list[EntryOut]


class RetrainOut(BaseModel):
    model_version: int
    trained_on: int
    rescored: int
    objective: float


class ModelInfo(BaseModel):
    version: int
    cell: str
    features: int
    decisions_since_retrain: int
    min_new_decisions: int
    entries_total: int
    entries_pending: int
