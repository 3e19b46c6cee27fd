"""Thirty behavioral features per session trace.

The extractor first removes trap events (decoy calls and any call whose
inspection verdict is non-empty) and only then computes features. A model
trained on trap-derived labels therefore never sees the labeling signal
itself: extract_features(trace) equals extract_features(trace with trap
events stripped), which tests assert on every trace they touch.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Any

from ..allowlist import (
    EMAIL_SHAPED_RE,
    URL_SHAPED_RE,
    AllowlistPolicy,
    RuleKind,
)
from ..engine import inspect, iter_arg_strings
from ..registry import ToolRegistry
from ..types import AccessKind, ToolCall, Trace
from ..vault import HoneytokenVault

FEATURE_NAMES: tuple[str, ...] = (
    "total_calls",
    "unique_tools",
    "read_count",
    "write_count",
    "read_write_ratio",
    "reads_before_first_write",
    "max_consecutive_reads",
    "max_consecutive_writes",
    "distinct_write_tools",
    "calls_outside_expected",
    "fraction_outside_expected",
    "unknown_tool_count",
    "mean_args_per_call",
    "max_args_per_call",
    "total_string_len",
    "max_string_len",
    "email_shaped_count",
    "url_shaped_count",
    "account_shaped_count",
    "distinct_external_recipients",
    "gather_then_send",
    "repeated_call_count",
    "tool_name_entropy",
    "calls_after_first_write",
    "writes_to_unexpected_recipients",
    "amount_max",
    "amount_total",
    "reads_after_last_write",
    "max_arg_depth",
    "nonascii_call_fraction",
)

N_FEATURES = len(FEATURE_NAMES)  # 30

_IBAN_RE = re.compile(r"^[A-Za-z]{2}\d{2}[A-Za-z0-9]{8,30}$")
_DIGIT_RUN_RE = re.compile(r"^\d{8,}$")
_MIN_SHARED_LEN = 4


@dataclass(frozen=True)
class FeatureVector:
    """Fixed-width numeric description of one session."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != N_FEATURES:
            raise ValueError(
                f"expected {N_FEATURES} features, got {len(self.values)}"
            )
        for name, v in zip(FEATURE_NAMES, self.values):
            if not math.isfinite(v):
                raise ValueError(f"feature {name} is not finite: {v}")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))

    def __getitem__(self, name: str) -> float:
        return self.values[FEATURE_NAMES.index(name)]


def _account_shaped(text: str) -> bool:
    compact = "".join(text.split())
    return bool(_IBAN_RE.match(compact) or _DIGIT_RUN_RE.match(compact))


def _strings_of(call: ToolCall) -> list[str]:
    return [text for _, _, text, is_str in iter_arg_strings(call.args) if is_str]


def _numbers_of(call: ToolCall) -> list[float]:
    out: list[float] = []

    def rec(obj: Any) -> None:
        if isinstance(obj, bool):
            return
        if isinstance(obj, (int, float)):
            out.append(float(obj))
        elif isinstance(obj, dict):
            for v in obj.values():
                rec(v)
        elif isinstance(obj, list):
            for v in obj:
                rec(v)

    rec(call.args)
    return out


def _arg_depth(obj: Any) -> int:
    if isinstance(obj, dict):
        return 1 + max((_arg_depth(v) for v in obj.values()), default=0)
    if isinstance(obj, list):
        return 1 + max((_arg_depth(v) for v in obj), default=0)
    return 0


class FeatureExtractor:
    """Turns traces into FeatureVectors under one trap configuration."""

    def __init__(
        self,
        registry: ToolRegistry,
        vault: HoneytokenVault,
        policy: AllowlistPolicy,
    ) -> None:
        self.registry = registry
        self.vault = vault
        self.policy = policy
        # Domains approved anywhere in the policy count as internal.
        self.internal_suffixes = tuple(
            entry.lower()
            for _, _, rs in policy.rules
            if rs.kind is RuleKind.DOMAIN_SUFFIX_SET
            for entry in rs.entries
        )

    # --- trap filtering -----------------------------------------------------

    def is_trap_event(self, call: ToolCall) -> bool:
        """Decoy calls and alerting calls are trap events, excluded from
        features so labels cannot leak into the model's inputs."""
        if self.registry.is_decoy(call.tool_name):
            return True
        verdict = inspect(call, self.registry, self.vault, self.policy)
        return bool(verdict.alerts)

    def non_trap_calls(self, trace: Trace) -> tuple[ToolCall, ...]:
        return tuple(c for c in trace.calls if not self.is_trap_event(c))

    # --- extraction ---------------------------------------------------------

    def extract(self, trace: Trace) -> FeatureVector:
        calls = self.non_trap_calls(trace)
        n = len(calls)
        if n == 0:
            return FeatureVector(values=tuple(0.0 for _ in FEATURE_NAMES))

        access: list[AccessKind] = []
        unknown = 0
        for c in calls:
            kind = self.registry.access_of(c.tool_name)
            if kind is None:
                unknown += 1
                kind = AccessKind.WRITE  # conservative: unknown counts as write
            access.append(kind)

        reads = [i for i, a in enumerate(access) if a is AccessKind.READ]
        writes = [i for i, a in enumerate(access) if a is AccessKind.WRITE]
        first_write = writes[0] if writes else None
        last_write = writes[-1] if writes else None

        def max_run(kind: AccessKind) -> int:
            best = cur = 0
            for a in access:
                cur = cur + 1 if a is kind else 0
                best = max(best, cur)
            return best

        expected = set(trace.expected_tools)
        outside = sum(1 for c in calls if c.tool_name not in expected)

        per_call_strings = [_strings_of(c) for c in calls]
        all_strings = [s for group in per_call_strings for s in group]

        emails = [s for s in all_strings if EMAIL_SHAPED_RE.match(s)]
        urls = [s for s in all_strings if URL_SHAPED_RE.match(s)]
        accounts = [s for s in all_strings if _account_shaped(s)]

        external = {
            e.lower()
            for e in emails
            if not self._is_internal(e.rsplit("@", 1)[1].lower())
        }

        gather_then_send = 0.0
        seen_read_strings: set[str] = set()
        for i, c in enumerate(calls):
            if access[i] is AccessKind.WRITE:
                for s_w in per_call_strings[i]:
                    if len(s_w) < _MIN_SHARED_LEN:
                        continue
                    for s_r in seen_read_strings:
                        if s_r in s_w or s_w in s_r:
                            gather_then_send = 1.0
                            break
                    if gather_then_send:
                        break
            else:
                seen_read_strings.update(
                    s for s in per_call_strings[i] if len(s) >= _MIN_SHARED_LEN
                )
            if gather_then_send:
                break

        seen_calls: set[str] = set()
        repeated = 0
        for c in calls:
            key = c.tool_name + "\x00" + json.dumps(c.args, sort_keys=True)
            if key in seen_calls:
                repeated += 1
            seen_calls.add(key)

        counts: dict[str, int] = {}
        for c in calls:
            counts[c.tool_name] = counts.get(c.tool_name, 0) + 1
        entropy = -sum(
            (k / n) * math.log2(k / n) for k in counts.values() if k > 0
        )

        expected_values = set(trace.expected_values)
        unexpected_recipient_writes = 0
        for i, c in enumerate(calls):
            if access[i] is not AccessKind.WRITE:
                continue
            recipients = [
                s
                for s in per_call_strings[i]
                if EMAIL_SHAPED_RE.match(s) or _account_shaped(s)
            ]
            if any(r not in expected_values for r in recipients):
                unexpected_recipient_writes += 1

        numbers = [x for c in calls for x in _numbers_of(c)]
        string_lens = [len(s) for s in all_strings]
        nonascii_calls = sum(
            1
            for group in per_call_strings
            if any(any(ord(ch) > 127 for ch in s) for s in group)
        )

        values = (
            float(n),
            float(len(counts)),
            float(len(reads)),
            float(len(writes)),
            float(len(reads) / len(writes)) if writes else 0.0,
            float(sum(1 for i in reads if first_write is None or i < first_write)),
            float(max_run(AccessKind.READ)),
            float(max_run(AccessKind.WRITE)),
            float(len({calls[i].tool_name for i in writes})),
            float(outside),
            float(outside / n),
            float(unknown),
            float(sum(len(c.args) for c in calls) / n),
            float(max(len(c.args) for c in calls)),
            float(sum(string_lens)),
            float(max(string_lens) if string_lens else 0),
            float(len(emails)),
            float(len(urls)),
            float(len(accounts)),
            float(len(external)),
            gather_then_send,
            float(repeated),
            float(entropy),
            float(n - 1 - first_write) if first_write is not None else 0.0,
            float(unexpected_recipient_writes),
            float(max(numbers) if numbers else 0.0),
            float(sum(numbers)),
            float(sum(1 for i in reads if last_write is not None and i > last_write)),
            float(max((_arg_depth(c.args) for c in calls), default=0)),
            float(nonascii_calls / n),
        )
        return FeatureVector(values=values)

    def _is_internal(self, domain: str) -> bool:
        return any(
            domain == suf or domain.endswith("." + suf)
            for suf in self.internal_suffixes
        )


def extract_features(
    trace: Trace,
    registry: ToolRegistry,
    vault: HoneytokenVault,
    policy: AllowlistPolicy,
) -> FeatureVector:
    return FeatureExtractor(registry, vault, policy).extract(trace)


def strip_trap_events(
    trace: Trace,
    registry: ToolRegistry,
    vault: HoneytokenVault,
    policy: AllowlistPolicy,
) -> Trace:
    """Copy of the trace with decoy calls and alerting calls removed."""
    extractor = FeatureExtractor(registry, vault, policy)
    return Trace(
        session_id=trace.session_id,
        suite=trace.suite,
        task_id=trace.task_id,
        expected_tools=trace.expected_tools,
        expected_values=trace.expected_values,
        calls=extractor.non_trap_calls(trace),
    )
