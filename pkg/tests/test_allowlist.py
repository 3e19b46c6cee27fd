"""Layer-3 policy: rule kinds, the two canonicalization modes, coverage."""

import pytest

from tooltrap.allowlist import (
    AllowlistPolicy,
    CanonicalizationMode,
    CheckOutcome,
    CoverageMode,
    RuleKind,
    RuleSet,
    extract_domain,
    load_allowlist,
)
from tooltrap.errors import EmptyRuleSet, UnknownParam, UnknownTool
from tooltrap.registry import build_registry
from tooltrap.types import ParamKind, ToolSpec

IBAN = "DE89370400440532013000"


def _policy(mode=CanonicalizationMode.CANONICAL, coverage=CoverageMode.ALL_STRING_FIELDS):
    return AllowlistPolicy(
        rules=(
            ("send_money", "iban", RuleSet(RuleKind.VALUE_SET, (IBAN,))),
            (
                "send_email",
                "to",
                RuleSet(RuleKind.DOMAIN_SUFFIX_SET, ("company.com",)),
            ),
            (
                "visit_url",
                "url",
                RuleSet(
                    RuleKind.URL_PATTERN_SET, ("https://travel.company.com/*",)
                ),
            ),
        ),
        canonicalization=mode,
        coverage=coverage,
    )


def test_value_set_membership():
    p = _policy()
    assert p.check_value("send_money", "iban", IBAN) is CheckOutcome.APPROVED
    assert p.check_value("send_money", "iban", "GB00WRONG") is CheckOutcome.VIOLATION
    assert p.check_value("send_money", "memo", "anything") is CheckOutcome.NO_RULE


def test_canonical_mode_sees_through_formatting():
    p = _policy()
    spaced = "DE89 3704 0044 0532 0130 00"
    assert p.check_value("send_money", "iban", spaced) is CheckOutcome.APPROVED
    evil_spaced = "FR76 3000 6000 0112 3456 7890 189"
    assert p.check_value("send_money", "iban", evil_spaced) is CheckOutcome.VIOLATION


def test_exact_mode_fails_open_on_formatted_values():
    # The documented gap: byte-for-byte matching does not recognize a
    # formatted value as a candidate, so it passes unchecked.
    p = _policy(mode=CanonicalizationMode.EXACT)
    spaced = "DE89 3704 0044 0532 0130 00"
    assert p.check_value("send_money", "iban", spaced) is CheckOutcome.SKIPPED
    assert p.check_value("send_money", "iban", IBAN) is CheckOutcome.APPROVED
    assert p.check_value("send_money", "iban", "GB00WRONG") is CheckOutcome.VIOLATION


def test_exact_mode_zero_width_also_skipped():
    p = _policy(mode=CanonicalizationMode.EXACT)
    laced = "​".join(IBAN)
    assert p.check_value("send_money", "iban", laced) is CheckOutcome.SKIPPED


def test_domain_suffix_set():
    p = _policy()
    assert p.check_value("send_email", "to", "maya@company.com") is CheckOutcome.APPROVED
    assert (
        p.check_value("send_email", "to", "x@mail.company.com") is CheckOutcome.APPROVED
    )
    assert (
        p.check_value("send_email", "to", "drop@collector-hub.net")
        is CheckOutcome.VIOLATION
    )
    # Suffix match is on domain labels, not raw string endswith.
    assert (
        p.check_value("send_email", "to", "x@evilcompany.com") is CheckOutcome.VIOLATION
    )


def test_domain_rule_fails_closed_on_shapeless_value():
    p = _policy()
    assert p.check_value("send_email", "to", "not-an-address") is CheckOutcome.VIOLATION
    assert p.check_value("send_email", "to", "") is CheckOutcome.VIOLATION


def test_url_pattern_set():
    p = _policy()
    ok = "https://travel.company.com/book/fl-101"
    assert p.check_value("visit_url", "url", ok) is CheckOutcome.APPROVED
    assert (
        p.check_value("visit_url", "url", "https://collector-hub.net/upload")
        is CheckOutcome.VIOLATION
    )
    # Anchored: the approved prefix buried in a larger URL is no approval.
    tricky = "https://evil.example/?next=https://travel.company.com/"
    assert p.check_value("visit_url", "url", tricky) is CheckOutcome.VIOLATION


def test_extract_domain():
    assert extract_domain("a@b.co") == "b.co"
    assert extract_domain("https://host.example/path") == "host.example"
    assert extract_domain("plain text") is None


def test_empty_rule_set_rejected():
    with pytest.raises(EmptyRuleSet):
        RuleSet(RuleKind.VALUE_SET, ())


def test_listed_params():
    p = _policy()
    assert p.listed_params("send_money") == {"iban"}
    assert p.listed_params("unknown_tool") == frozenset()


def test_replace_swaps_modes_only():
    p = _policy()
    q = p.replace(canonicalization=CanonicalizationMode.EXACT)
    assert q.canonicalization is CanonicalizationMode.EXACT
    assert q.rules == p.rules
    r = p.replace(coverage=CoverageMode.LISTED_FIELDS_ONLY)
    assert r.coverage is CoverageMode.LISTED_FIELDS_ONLY


def test_load_allowlist_validates_against_registry():
    reg = build_registry(
        [
            ToolSpec(
                name="send_money",
                description="",
                params=(("iban", ParamKind.STRING),),
            )
        ]
    )
    raw = {
        "canonicalization": "canonical",
        "coverage": "all_string_fields",
        "rules": [
            {"tool": "send_money", "param": "iban", "kind": "value_set", "entries": [IBAN]}
        ],
    }
    p = load_allowlist(raw, reg)
    assert p.rule_for("send_money", "iban") is not None

    with pytest.raises(UnknownTool):
        load_allowlist(
            {"rules": [{"tool": "ghost", "param": "x", "kind": "value_set", "entries": ["v"]}]},
            reg,
        )
    with pytest.raises(UnknownParam):
        load_allowlist(
            {"rules": [{"tool": "send_money", "param": "ghost", "kind": "value_set", "entries": ["v"]}]},
            reg,
        )
