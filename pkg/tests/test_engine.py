"""Inspection engine: layer firing rules and the argument-tree walk."""

import json

from tooltrap.allowlist import (
    AllowlistPolicy,
    CanonicalizationMode,
    CoverageMode,
    RuleKind,
    RuleSet,
)
from tooltrap.engine import MAX_ARG_DEPTH, inspect, iter_arg_strings
from tooltrap.registry import build_registry
from tooltrap.types import Layer, ParamKind, ToolCall, ToolSpec
from tooltrap.vault import plant_tokens

IBAN = "DE89370400440532013000"

REGISTRY = build_registry(
    [
        ToolSpec(
            name="send_money",
            description="",
            params=(("iban", ParamKind.STRING), ("memo", ParamKind.STRING)),
        ),
        ToolSpec(name="read_doc", description="", params=(("doc_id", ParamKind.STRING),)),
    ]
)
VAULT = plant_tokens(seed=99)
POLICY = AllowlistPolicy(
    rules=(("send_money", "iban", RuleSet(RuleKind.VALUE_SET, (IBAN,))),),
)


def _call(tool, args, call_id="c1"):
    return ToolCall(
        call_id=call_id, session_id="s1", tool_name=tool, args=args, timestamp=0.0
    )


def _inspect(call, policy=POLICY):
    return inspect(call, REGISTRY, VAULT, policy)


def test_clean_call():
    v = _inspect(_call("send_money", {"iban": IBAN, "memo": "rent"}))
    assert v.clean
    assert not v.unknown_tool
    assert v.latency_ms >= 0.0


def test_honeytool_layer():
    v = _inspect(_call("export_all_user_data", {}))
    assert v.layers_fired == (Layer.HONEYTOOL,)
    assert v.alerts[0].detail.decoy_name == "export_all_user_data"


def test_honeytoken_layer():
    token = VAULT.tokens[0]
    v = _inspect(_call("read_doc", {"doc_id": f"note {token.value} end"}))
    assert Layer.HONEYTOKEN in v.layers_fired
    hit = [a for a in v.alerts if a.layer is Layer.HONEYTOKEN][0]
    assert hit.detail.token_id == token.token_id
    assert hit.detail.location == "doc_id"


def test_param_validator_layer():
    v = _inspect(_call("send_money", {"iban": "GB00EVIL"}))
    assert v.layers_fired == (Layer.PARAM_VALIDATOR,)
    d = v.alerts[0].detail
    assert (d.tool, d.param, d.value) == ("send_money", "iban", "GB00EVIL")


def test_one_call_many_alerts():
    token = VAULT.tokens[1]
    v = _inspect(_call("send_money", {"iban": "GB00EVIL", "memo": token.value}))
    assert Layer.PARAM_VALIDATOR in v.layers_fired
    assert Layer.HONEYTOKEN in v.layers_fired
    assert len(v.alerts) == 2


def test_unknown_tool_flag():
    v = _inspect(_call("teleport", {"x": 1}))
    assert v.unknown_tool
    assert v.clean  # unknown is an audit flag, not an alert


def test_value_preview_truncated():
    v = _inspect(_call("send_money", {"iban": "x" * 500}))
    assert len(v.alerts[0].detail.value) == 80


def test_listed_fields_only_scopes_scan():
    token = VAULT.tokens[0]
    narrow = POLICY.replace(coverage=CoverageMode.LISTED_FIELDS_ONLY)
    # memo is not a ruled param on send_money: the token there goes unseen.
    v = _inspect(_call("send_money", {"iban": IBAN, "memo": token.value}), narrow)
    assert v.clean
    # Same payload under the ruled param is seen.
    v2 = _inspect(_call("send_money", {"iban": token.value}), narrow)
    assert Layer.HONEYTOKEN in v2.layers_fired


def test_exact_mode_skips_spaced_violation():
    exact = POLICY.replace(canonicalization=CanonicalizationMode.EXACT)
    spaced = "FR76 3000 6000 0112 3456 7890 189"
    assert _inspect(_call("send_money", {"iban": spaced}), exact).clean
    assert not _inspect(_call("send_money", {"iban": spaced})).clean


def test_nested_args_inherit_nearest_key():
    # iban rules apply to list elements under the iban key.
    v = _inspect(_call("send_money", {"iban": ["GB00EVIL"]}))
    assert Layer.PARAM_VALIDATOR in v.layers_fired
    # A nested dict key overrides: {"memo": {"iban": bad}} judges "iban".
    v2 = _inspect(_call("send_money", {"memo": {"iban": "GB00EVIL"}}))
    assert Layer.PARAM_VALIDATOR in v2.layers_fired


def test_iter_arg_strings_shapes():
    rows = list(
        iter_arg_strings({"a": "x", "b": [1, "y"], "c": {"d": True}, "e": None})
    )
    assert ("a", "a", "x", True) in rows
    assert ("b[0]", "b", "1", False) in rows
    assert ("b[1]", "b", "y", True) in rows
    assert ("c.d", "d", "true", False) in rows
    assert all(path != "e" for path, *_ in rows)


def test_iter_arg_strings_depth_cap():
    deep: dict = {"k": "leaf"}
    for _ in range(MAX_ARG_DEPTH + 2):
        deep = {"k": deep}
    rows = list(iter_arg_strings(deep))
    # Capped subtree comes out as one serialized blob, still scannable.
    blobs = [text for _, _, text, is_string in rows if is_string]
    assert len(blobs) == 1
    assert json.loads(blobs[0])  # valid JSON of the remaining subtree
    assert "leaf" in blobs[0]


def test_depth_capped_blob_still_scanned_for_tokens():
    token = VAULT.tokens[2]
    deep: dict = {"k": token.value}
    for _ in range(MAX_ARG_DEPTH + 2):
        deep = {"k": deep}
    v = _inspect(_call("read_doc", deep))
    assert Layer.HONEYTOKEN in v.layers_fired
