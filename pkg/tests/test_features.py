"""Behavioral features: dimensionality, semantics, leakage exclusion."""

import dataclasses

import pytest

from tooltrap.config import load_fixture_config
from tooltrap.classifier.features import (
    FEATURE_NAMES,
    N_FEATURES,
    FeatureExtractor,
    FeatureVector,
    extract_features,
    strip_trap_events,
)
from tooltrap.types import ToolCall, Trace

CFG = load_fixture_config("banking")
EXTRACTOR = FeatureExtractor(CFG.registry, CFG.vault, CFG.policy)


def _call(n, tool, args=None, session="f1"):
    return ToolCall(
        call_id=f"{session}:{n}",
        session_id=session,
        tool_name=tool,
        args=args or {},
        timestamp=n * 0.001,
    )


def _trace(calls, expected_tools=(), expected_values=()):
    return Trace(
        session_id="f1",
        suite="banking",
        task_id="bank-01",
        expected_tools=tuple(expected_tools),
        expected_values=tuple(expected_values),
        calls=tuple(calls),
    )


def test_thirty_named_features():
    assert N_FEATURES == 30
    assert len(FEATURE_NAMES) == 30
    assert len(set(FEATURE_NAMES)) == 30


def test_vector_width_enforced():
    with pytest.raises(ValueError):
        FeatureVector(values=(1.0,) * 29)
    with pytest.raises(ValueError):
        FeatureVector(values=(float("nan"),) * 30)


def test_empty_trace_is_zero_vector():
    vec = EXTRACTOR.extract(_trace([]))
    assert vec.values == (0.0,) * 30


def test_read_write_accounting():
    calls = [
        _call(1, "get_balance"),
        _call(2, "list_transactions"),
        _call(3, "read_document", {"doc_id": "statement_q3"}),
        _call(4, "send_money", {"iban": "DE02120300000000202051", "amount": 40}),
    ]
    vec = EXTRACTOR.extract(
        _trace(calls, expected_tools=[c.tool_name for c in calls])
    )
    assert vec["total_calls"] == 4.0
    assert vec["read_count"] == 3.0
    assert vec["write_count"] == 1.0
    assert vec["read_write_ratio"] == 3.0
    assert vec["reads_before_first_write"] == 3.0
    assert vec["max_consecutive_reads"] == 3.0
    assert vec["calls_outside_expected"] == 0.0
    assert vec["amount_max"] == 40.0
    assert vec["account_shaped_count"] == 1.0


def test_unknown_tools_count_as_writes():
    vec = EXTRACTOR.extract(_trace([_call(1, "mystery_tool")]))
    assert vec["unknown_tool_count"] == 1.0
    assert vec["write_count"] == 1.0


def test_gather_then_send_flag():
    secret = "statement-balance-88412"
    calls = [
        _call(1, "read_document", {"doc_id": secret}),
        _call(2, "send_money", {"iban": "DE02120300000000202051", "memo": secret}),
    ]
    vec = EXTRACTOR.extract(_trace(calls))
    assert vec["gather_then_send"] == 1.0
    # Without the echo the flag stays down.
    calls2 = [
        _call(1, "read_document", {"doc_id": secret}),
        _call(2, "send_money", {"iban": "DE02120300000000202051", "memo": "rent"}),
    ]
    assert EXTRACTOR.extract(_trace(calls2))["gather_then_send"] == 0.0


def test_trap_events_are_invisible_to_features():
    base = [
        _call(1, "get_balance"),
        _call(2, "read_document", {"doc_id": "statement_q3"}),
        _call(3, "send_money", {"iban": "DE02120300000000202051", "amount": 10}),
    ]
    clean_vec = EXTRACTOR.extract(_trace(base))

    # Appending a decoy call must not move a single coordinate.
    with_decoy = base + [_call(4, "export_all_user_data")]
    assert EXTRACTOR.extract(_trace(with_decoy)).values == clean_vec.values

    # Nor does a call that trips the honeytoken layer.
    token = CFG.vault.tokens[0].value
    with_token = base + [_call(4, "read_document", {"doc_id": token})]
    assert EXTRACTOR.extract(_trace(with_token)).values == clean_vec.values

    # Nor an allowlist violation.
    with_violation = base + [_call(4, "send_money", {"iban": "XX00ATTACKER"})]
    assert EXTRACTOR.extract(_trace(with_violation)).values == clean_vec.values


def test_extract_equals_extract_of_stripped_trace():
    calls = [
        _call(1, "get_balance"),
        _call(2, "export_all_user_data"),
        _call(3, "send_money", {"iban": "DE02120300000000202051"}),
    ]
    trace = _trace(calls)
    stripped = strip_trap_events(trace, CFG.registry, CFG.vault, CFG.policy)
    assert len(stripped.calls) == 2
    a = extract_features(trace, CFG.registry, CFG.vault, CFG.policy)
    b = extract_features(stripped, CFG.registry, CFG.vault, CFG.policy)
    assert a.values == b.values


def test_is_trap_event():
    assert EXTRACTOR.is_trap_event(_call(1, "export_all_user_data"))
    assert not EXTRACTOR.is_trap_event(_call(1, "get_balance"))
    token = CFG.vault.tokens[2].value
    assert EXTRACTOR.is_trap_event(_call(1, "read_document", {"doc_id": token}))


def test_external_recipients_judged_by_domain_rules():
    msg_cfg = load_fixture_config("messaging")
    ex = FeatureExtractor(msg_cfg.registry, msg_cfg.vault, msg_cfg.policy)
    # Addresses in unruled fields never alert, so they reach the features;
    # approved-domain ones are internal, anything else is external.
    calls = [
        _call(1, "send_message", {"channel": "general", "text": "maya@company.com"}),
        _call(2, "send_message", {"channel": "general", "text": "drop@collector-hub.net"}),
        _call(3, "send_message", {"channel": "general", "text": "drop@collector-hub.net"}),
    ]
    trace = Trace(
        session_id="m1", suite="messaging", task_id=None,
        expected_tools=("send_message",), expected_values=(), calls=tuple(calls),
    )
    vec = ex.extract(trace)
    assert vec["email_shaped_count"] == 3.0
    assert vec["distinct_external_recipients"] == 1.0


def test_as_dict_and_getitem_round_trip():
    vec = EXTRACTOR.extract(_trace([_call(1, "get_balance")]))
    d = vec.as_dict()
    assert set(d) == set(FEATURE_NAMES)
    assert d["total_calls"] == vec["total_calls"] == 1.0
