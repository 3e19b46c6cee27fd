"""Parameter allowlists: per-(tool, param) approved-value rules.

Three rule kinds cover the common shapes of sensitive parameters:

* value_set: exact membership (account numbers, payment profiles)
* domain_suffix_set: recipient-ish values judged by their domain part
* url_pattern_set: anchored glob patterns for navigable URLs

Two canonicalization modes exist. Canonical strips whitespace/zero-width
and lowercases before comparing and fails closed. Exact compares bytes
as-is; a value carrying whitespace or zero-width formatting is not
recognized by the exact matcher at all and passes unchecked. That fail-open
hole is deliberate: it reproduces a known evasion (spacing out an account
number) so the fix can be demonstrated by flipping the mode.
"""

from __future__ import annotations

import fnmatch
import functools
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any
from urllib.parse import urlsplit

from .canonical import canonicalize, contains_formatting
from .errors import EmptyRuleSet, UnknownParam, UnknownTool
from .registry import ToolRegistry

EMAIL_SHAPED_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")
URL_SHAPED_RE = re.compile(r"^[a-z][a-z0-9+.-]*://", re.IGNORECASE)


class CanonicalizationMode(str, Enum):
    EXACT = "exact"
    CANONICAL = "canonical"


class CoverageMode(str, Enum):
    LISTED_FIELDS_ONLY = "listed_fields_only"
    ALL_STRING_FIELDS = "all_string_fields"


class RuleKind(str, Enum):
    VALUE_SET = "value_set"
    DOMAIN_SUFFIX_SET = "domain_suffix_set"
    URL_PATTERN_SET = "url_pattern_set"


class CheckOutcome(Enum):
    NO_RULE = "no_rule"
    APPROVED = "approved"
    VIOLATION = "violation"
    SKIPPED = "skipped"  # exact matcher failed open on a formatted value


@functools.lru_cache(maxsize=4096)
def _compiled_glob(pattern: str) -> re.Pattern[str]:
    return re.compile(fnmatch.translate(pattern))


def extract_domain(value: str) -> str | None:
    """Domain part of an email- or URL-shaped value, else None."""
    if EMAIL_SHAPED_RE.match(value):
        return value.rsplit("@", 1)[1]
    if URL_SHAPED_RE.match(value):
        host = urlsplit(value).hostname
        return host or None
    return None


@dataclass(frozen=True)
class RuleSet:
    """Approved values for one (tool, param) pair."""

    kind: RuleKind
    entries: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise EmptyRuleSet(f"{self.kind.value} rule with no entries")

    def approves(self, value: str, mode: CanonicalizationMode) -> bool:
        if mode is CanonicalizationMode.CANONICAL:
            value = canonicalize(value)
            entries = tuple(canonicalize(e) for e in self.entries)
        else:
            entries = self.entries

        if self.kind is RuleKind.VALUE_SET:
            return value in entries

        if self.kind is RuleKind.DOMAIN_SUFFIX_SET:
            domain = extract_domain(value)
            if domain is None:
                return False  # neither email- nor URL-shaped: fail closed
            domain = domain.lower()
            for suffix in entries:
                suffix = suffix.lower()
                if domain == suffix or domain.endswith("." + suffix):
                    return True
            return False

        # url_pattern_set: anchored glob match
        return any(_compiled_glob(e).match(value) for e in entries)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "entries": list(self.entries)}


@dataclass(frozen=True)
class AllowlistPolicy:
    """Full layer-3 policy: rules plus canonicalization and coverage modes."""

    rules: tuple[tuple[str, str, RuleSet], ...] = ()
    canonicalization: CanonicalizationMode = CanonicalizationMode.CANONICAL
    coverage: CoverageMode = CoverageMode.ALL_STRING_FIELDS
    _index: dict[tuple[str, str], RuleSet] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        index = {(tool, param): rs for tool, param, rs in self.rules}
        object.__setattr__(self, "_index", index)

    def rule_for(self, tool: str, param: str) -> RuleSet | None:
        return self._index.get((tool, param))

    def listed_params(self, tool: str) -> frozenset[str]:
        return frozenset(p for t, p in self._index if t == tool)

    def check_value(self, tool: str, param: str, value: str) -> CheckOutcome:
        """Evaluate one string value against the rule for (tool, param)."""
        rule = self.rule_for(tool, param)
        if rule is None:
            return CheckOutcome.NO_RULE
        if self.canonicalization is CanonicalizationMode.EXACT:
            if rule.approves(value, CanonicalizationMode.EXACT):
                return CheckOutcome.APPROVED
            if contains_formatting(value):
                # Exact matcher does not see formatted values as candidates.
                return CheckOutcome.SKIPPED
            return CheckOutcome.VIOLATION
        if rule.approves(value, CanonicalizationMode.CANONICAL):
            return CheckOutcome.APPROVED
        return CheckOutcome.VIOLATION

    def replace(self, **changes: Any) -> AllowlistPolicy:
        """Copy with selected fields changed (modes, rules)."""
        return AllowlistPolicy(
            rules=changes.get("rules", self.rules),
            canonicalization=changes.get("canonicalization", self.canonicalization),
            coverage=changes.get("coverage", self.coverage),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "canonicalization": self.canonicalization.value,
            "coverage": self.coverage.value,
            "rules": [
                {"tool": t, "param": p, **rs.to_dict()} for t, p, rs in self.rules
            ],
        }


def load_allowlist(
    raw: dict[str, Any], registry: ToolRegistry | None = None
) -> AllowlistPolicy:
    """Parse and validate an allowlist config section.

    When a registry is supplied, every rule must reference a known tool and
    a parameter that tool declares; decoys declare no parameters, so rules
    can never target them.
    """
    rules: list[tuple[str, str, RuleSet]] = []
    for item in raw.get("rules", []):
        tool = item["tool"]
        param = item["param"]
        if registry is not None:
            spec = registry.get(tool)
            if spec is None:
                raise UnknownTool(f"allowlist rule for unknown tool {tool!r}")
            if param not in spec.param_names:
                raise UnknownParam(
                    f"tool {tool!r} declares no parameter {param!r}"
                )
        ruleset = RuleSet(
            kind=RuleKind(item["kind"]), entries=tuple(item["entries"])
        )
        rules.append((tool, param, ruleset))

    return AllowlistPolicy(
        rules=tuple(rules),
        canonicalization=CanonicalizationMode(
            raw.get("canonicalization", "canonical")
        ),
        coverage=CoverageMode(raw.get("coverage", "all_string_fields")),
    )
