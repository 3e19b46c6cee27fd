"""Trap-derived labeling: the self-supervision rule.

A session is labeled Compromised exactly when at least one decoy (layer 1)
alert fired in it. Sessions with only honeytoken or allowlist alerts stay
Benign for training purposes; they are surfaced through an audit side
channel instead, because those layers can in principle fire on ambiguous
flows and the training signal must stay zero-false-positive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..alertlog import AlertLog
from ..errors import SchemaError
from ..types import Layer, Trace, TrialRecord


class TraceLabel(str, Enum):
    COMPROMISED = "compromised"
    BENIGN = "benign"


class LabelSource(str, Enum):
    TRAP_TRIGGER = "trap_trigger"
    ASSUMED_BENIGN = "assumed_benign"


@dataclass(frozen=True)
class LabeledTrace:
    """A trace plus its label and the campaign metadata evaluation needs."""

    trace: Trace
    label: TraceLabel
    label_source: LabelSource
    policy: str = ""
    language: str = ""
    ground_truth_compromised: bool = False

    def __post_init__(self) -> None:
        if (self.label is TraceLabel.COMPROMISED) != (
            self.label_source is LabelSource.TRAP_TRIGGER
        ):
            raise ValueError("Compromised label requires a trap trigger, and only that")

    def to_dict(self) -> dict[str, Any]:
        return {
            "trace": self.trace.to_dict(),
            "label": self.label.value,
            "label_source": self.label_source.value,
            "policy": self.policy,
            "language": self.language,
            "ground_truth_compromised": self.ground_truth_compromised,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> LabeledTrace:
        try:
            return cls(
                trace=Trace.from_dict(raw["trace"]),
                label=TraceLabel(raw["label"]),
                label_source=LabelSource(raw["label_source"]),
                policy=raw.get("policy", ""),
                language=raw.get("language", ""),
                ground_truth_compromised=bool(
                    raw.get("ground_truth_compromised", False)
                ),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad labeled-trace record: {exc}") from exc


@dataclass(frozen=True)
class LabelingResult:
    labeled: tuple[LabeledTrace, ...]
    # Sessions that alerted on layers 2/3 only; exported, never auto-labeled.
    audit_sessions: tuple[str, ...] = ()


def _session_layers(log: AlertLog, session_id: str) -> set[Layer]:
    try:
        verdicts = log.session_verdicts(session_id)
    except Exception:
        return set()
    return {a.layer for v in verdicts for a in v.alerts}


def label_traces(
    traces: Iterable[Trace],
    alert_log: AlertLog,
    audit_layer23: bool = True,
    meta: dict[str, TrialRecord] | None = None,
) -> LabelingResult:
    """Apply the trap rule to every trace.

    ``meta`` (session_id -> trial record) enriches rows with policy,
    language, and the harness's ground-truth compromise flag when available.
    """
    labeled: list[LabeledTrace] = []
    audit: list[str] = []
    meta = meta or {}
    for trace in traces:
        layers = _session_layers(alert_log, trace.session_id)
        if Layer.HONEYTOOL in layers:
            label, source = TraceLabel.COMPROMISED, LabelSource.TRAP_TRIGGER
        else:
            label, source = TraceLabel.BENIGN, LabelSource.ASSUMED_BENIGN
            if audit_layer23 and layers:
                audit.append(trace.session_id)
        rec = meta.get(trace.session_id)
        labeled.append(
            LabeledTrace(
                trace=trace,
                label=label,
                label_source=source,
                policy=rec.policy if rec else "",
                language=rec.language if rec else "",
                ground_truth_compromised=rec.complied if rec else False,
            )
        )
    return LabelingResult(labeled=tuple(labeled), audit_sessions=tuple(audit))


def build_dataset(
    traces: Iterable[Trace],
    alert_log: AlertLog,
    records: Sequence[TrialRecord] = (),
    audit_layer23: bool = True,
) -> LabelingResult:
    """Label traces and attach per-session campaign metadata."""
    meta = {r.trial_id: r for r in records}
    return label_traces(traces, alert_log, audit_layer23=audit_layer23, meta=meta)


def write_dataset(rows: Iterable[LabeledTrace], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row.to_dict(), separators=(",", ":")) + "\n")
            n += 1
    return n


def read_dataset(path: str | Path) -> list[LabeledTrace]:
    rows: list[LabeledTrace] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(LabeledTrace.from_dict(json.loads(line)))
    return rows
