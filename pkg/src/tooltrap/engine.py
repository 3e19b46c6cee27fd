"""Three-layer call inspection.

Layer 1 (honeytool): the call targets a decoy tool.
Layer 2 (honeytoken): a planted credential value appears in the arguments.
Layer 3 (param validator): a ruled parameter carries an unapproved value.

All three layers are evaluated on every call; one call can raise several
alerts. Inspection is passive and pure: it never blocks, and identical
inputs produce identical alerts (latency is measurement, not substance).
"""

from __future__ import annotations

import json
import time
from typing import Any, Iterator

from .allowlist import AllowlistPolicy, CheckOutcome, CoverageMode
from .registry import ToolRegistry
from .types import (
    Alert,
    HoneytokenDetail,
    HoneytoolDetail,
    InspectionVerdict,
    Layer,
    ParamDetail,
    ToolCall,
)
from .vault import HoneytokenVault

# Containers nested deeper than this are scanned as serialized text.
MAX_ARG_DEPTH = 8

_VALUE_PREVIEW = 80


def iter_arg_strings(
    args: dict[str, Any], depth_cap: int = MAX_ARG_DEPTH
) -> Iterator[tuple[str, str | None, str, bool]]:
    """Yield (path, nearest_key, text, is_string) over an argument tree.

    Dict keys update nearest_key; list elements inherit it. Containers at
    the depth cap are emitted whole as serialized text. Scalars are
    stringified so rules can judge numbers too.
    """

    def rec(
        obj: Any, path: str, key: str | None, depth: int
    ) -> Iterator[tuple[str, str | None, str, bool]]:
        if isinstance(obj, (dict, list)) and depth >= depth_cap:
            yield path, key, json.dumps(obj, sort_keys=True), True
            return
        if isinstance(obj, dict):
            for k, v in obj.items():
                sub = f"{path}.{k}" if path else str(k)
                yield from rec(v, sub, str(k), depth + 1)
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                yield from rec(v, f"{path}[{i}]", key, depth + 1)
        elif isinstance(obj, str):
            yield path, key, obj, True
        elif isinstance(obj, bool):
            yield path, key, "true" if obj else "false", False
        elif isinstance(obj, (int, float)):
            yield path, key, str(obj), False
        # None yields nothing: no value to judge

    yield from rec(args, "", None, 0)


def inspect(
    call: ToolCall,
    registry: ToolRegistry,
    vault: HoneytokenVault,
    policy: AllowlistPolicy,
) -> InspectionVerdict:
    """Run all three trap layers against one call."""
    started = time.perf_counter()
    alerts: list[Alert] = []

    def add(layer: Layer, detail: Any) -> None:
        alerts.append(
            Alert(
                layer=layer,
                detail=detail,
                session_id=call.session_id,
                call_id=call.call_id,
                timestamp=call.timestamp,
            )
        )

    # Layer 1: exact decoy-name match. Unknown names stay silent here.
    if registry.is_decoy(call.tool_name):
        add(Layer.HONEYTOOL, HoneytoolDetail(decoy_name=call.tool_name))

    listed = policy.listed_params(call.tool_name)
    scan_all = policy.coverage is CoverageMode.ALL_STRING_FIELDS

    for path, key, text, is_string in iter_arg_strings(call.args):
        top_key = path.split(".", 1)[0].split("[", 1)[0]
        in_scope = scan_all or top_key in listed

        # Layer 2: planted-credential scan over in-scope strings.
        if in_scope and is_string:
            for token in vault.scan(text):
                add(
                    Layer.HONEYTOKEN,
                    HoneytokenDetail(
                        token_id=token.token_id,
                        category=token.category,
                        location=path,
                    ),
                )

        # Layer 3: allowlist check when a rule exists for the nearest key.
        if in_scope and key is not None:
            outcome = policy.check_value(call.tool_name, key, text)
            if outcome is CheckOutcome.VIOLATION:
                add(
                    Layer.PARAM_VALIDATOR,
                    ParamDetail(
                        tool=call.tool_name,
                        param=key,
                        value=text[:_VALUE_PREVIEW],
                    ),
                )

    unknown = registry.get(call.tool_name) is None
    latency_ms = (time.perf_counter() - started) * 1000.0
    return InspectionVerdict(
        call_id=call.call_id,
        session_id=call.session_id,
        alerts=tuple(alerts),
        unknown_tool=unknown,
        latency_ms=latency_ms,
    )
