"""Config documents: parsing, bundled suites, round-trip, failure modes."""

import json

import pytest

from tooltrap.allowlist import CanonicalizationMode, CoverageMode
from tooltrap.config import (
    TrapConfig,
    load_config,
    load_fixture_config,
    parse_config,
)
from tooltrap.errors import ConfigError
from tooltrap.registry import DEFAULT_DECOYS
from tooltrap.sim.suites import SUITE_NAMES
from tooltrap.types import ToolKind

MINIMAL = {
    "suite": "mini",
    "tools": [
        {"name": "send_money", "params": [["iban", "string"]], "access": "write"}
    ],
    "honeytokens": {"seed": 11},
    "allowlist": {
        "rules": [
            {
                "tool": "send_money",
                "param": "iban",
                "kind": "value_set",
                "entries": ["DE89370400440532013000"],
            }
        ]
    },
}


def test_parse_minimal_document():
    cfg = parse_config(MINIMAL)
    assert cfg.suite == "mini"
    assert len(cfg.registry.real_tools) == 1
    # Decoys default to the bundled three when not declared.
    decoy_names = {t.name for t in cfg.registry.tools if t.kind is ToolKind.DECOY}
    assert decoy_names == {s.name for s in DEFAULT_DECOYS}
    assert len(cfg.vault.tokens) == 5
    assert cfg.policy.rule_for("send_money", "iban") is not None


def test_bundled_suites_load():
    for suite in SUITE_NAMES:
        cfg = load_fixture_config(suite)
        assert cfg.suite == suite
        assert len(cfg.registry.real_tools) == 10
        assert len(cfg.vault.tokens) == 5
        assert cfg.policy.canonicalization is CanonicalizationMode.CANONICAL
        assert cfg.policy.coverage is CoverageMode.ALL_STRING_FIELDS
        assert cfg.policy.rules


def test_round_trip():
    cfg = load_fixture_config("banking")
    again = parse_config(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()
    assert {t.name for t in again.registry.tools} == {
        t.name for t in cfg.registry.tools
    }
    assert [t.value for t in again.vault.tokens] == [t.value for t in cfg.vault.tokens]


def test_load_config_from_disk(tmp_path):
    path = tmp_path / "trap.json"
    path.write_text(json.dumps(MINIMAL), encoding="utf-8")
    cfg = load_config(path)
    assert cfg.suite == "mini"


def test_with_policy_swaps_only_policy():
    cfg = load_fixture_config("banking")
    flipped = cfg.with_policy(
        cfg.policy.replace(canonicalization=CanonicalizationMode.EXACT)
    )
    assert isinstance(flipped, TrapConfig)
    assert flipped.policy.canonicalization is CanonicalizationMode.EXACT
    assert flipped.registry is cfg.registry
    assert flipped.vault is cfg.vault


def test_unknown_fixture_suite():
    with pytest.raises(ConfigError):
        load_fixture_config("casino")


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")

    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(bad)

    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(arr)


def test_parse_config_wraps_shape_errors():
    with pytest.raises(ConfigError):
        parse_config({"tools": [{"description": "missing name"}]})
    with pytest.raises(ConfigError):
        parse_config({"tools": [{"name": "t", "params": [["p", "no_such_kind"]]}]})
