"""Environment config documents: one JSON file bundles a whole trap setup.

Sections: ``tools`` (real tool specs), ``decoys`` (decoy specs; defaults to
the bundled three), ``honeytokens`` (explicit values or a generator seed),
``allowlist`` (rules plus modes). Fixture configs for the bundled suites
live under ``tooltrap/fixtures/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .allowlist import AllowlistPolicy, load_allowlist
from .errors import ConfigError
from .registry import DEFAULT_DECOYS, ToolRegistry, build_registry
from .types import ToolKind, ToolSpec
from .vault import HoneytokenVault, vault_from_config


@dataclass(frozen=True)
class TrapConfig:
    """Parsed bundle: registry + vault + allowlist policy."""

    suite: str
    registry: ToolRegistry
    vault: HoneytokenVault
    policy: AllowlistPolicy

    def with_policy(self, policy: AllowlistPolicy) -> TrapConfig:
        return TrapConfig(
            suite=self.suite, registry=self.registry, vault=self.vault, policy=policy
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "tools": [t.to_dict() for t in self.registry.real_tools],
            "decoys": [
                t.to_dict() for t in self.registry.tools if t.kind is ToolKind.DECOY
            ],
            "honeytokens": [t.to_dict() for t in self.vault.tokens],
            "allowlist": self.policy.to_dict(),
        }


def parse_config(raw: dict[str, Any]) -> TrapConfig:
    """Build a TrapConfig from an already-parsed JSON document."""
    try:
        real = tuple(ToolSpec.from_dict(t) for t in raw.get("tools", []))
        if "decoys" in raw:
            decoys = tuple(
                ToolSpec.from_dict({**d, "kind": "decoy"}) for d in raw["decoys"]
            )
        else:
            decoys = DEFAULT_DECOYS
        registry = build_registry(real, decoys)
        vault = vault_from_config(raw.get("honeytokens", []))
        policy = load_allowlist(raw.get("allowlist", {}), registry)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config document: {exc}") from exc
    return TrapConfig(
        suite=raw.get("suite", ""), registry=registry, vault=vault, policy=policy
    )


def load_config(path: str | Path) -> TrapConfig:
    """Read and parse a config document from disk."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return parse_config(raw)


def fixture_text(name: str) -> str:
    """Read a bundled fixture file by name (path relative to fixtures/)."""
    root = resources.files("tooltrap") / "fixtures"
    return (root / name).read_text(encoding="utf-8")


def load_fixture_config(suite: str) -> TrapConfig:
    """Load the bundled trap config for one suite."""
    try:
        raw = json.loads(fixture_text(f"configs/{suite}.json"))
    except FileNotFoundError as exc:
        raise ConfigError(f"no bundled config for suite {suite!r}") from exc
    return parse_config(raw)
