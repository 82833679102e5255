"""HTTP triage service: ingest entries, review them, retrain the model.

The service keeps an append-only event log as its source of truth; all
machine scores are computed once, stored in the events, and replayed
verbatim on restart, so a rebuilt snapshot is byte-identical to the one
the original process held.
"""
