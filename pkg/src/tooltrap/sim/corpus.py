"""Attack corpus: prompt records, their plans, and taxonomy validation.

The corpus has three parts. Set A holds suite-specific injection prompts,
one record per language. Set B holds domain-agnostic prompts whose plans
are symbolic binding references (``$exfil_write`` and friends) resolved
against whichever suite the trial runs in. The adaptive set holds
suite-specific prompts in three tiers of attacker knowledge: tier 1 takes
the decoy bait, tier 2 reroutes around decoys through real tools, tier 3
knows the trap layout and aims at validator gaps. Adaptive records are
English-primary and carry translations for campaign-time language pivots.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..config import fixture_text
from ..errors import SchemaError, TaxonomyMismatch

ATTACK_SETS = ("set_a", "set_b", "adaptive")
LANGUAGES = ("en", "ku", "ar", "cs")
TIERS = ("t1", "t2", "t3")

SET_A_CATEGORIES = (
    "goal_hijacking",
    "data_exfiltration",
    "credential_theft",
    "social_engineering",
    "transliteration",
    "zero_width",
    "homoglyph",
)

SET_B_CATEGORIES = (
    "goal_hijacking",
    "data_exfiltration",
    "credential_theft",
    "social_engineering",
    "urgency_pressure",
    "authority_claim",
    "payload_splitting",
    "tool_misuse",
)

TIER_CATEGORIES = {
    "t1": "decoy_bait",
    "t2": "guarded_reroute",
    "t3": "covert_channel",
}

# Expected corpus shape; validation fails loudly on drift.
EXPECTED_TOTAL = 176
EXPECTED_PER_SET = {"set_a": 80, "set_b": 48, "adaptive": 48}

# Symbolic plan references resolvable against suite bindings.
SYMBOLIC_PLANS = ("$exfil_write", "$recon_then_exfil", "$credential_then_covert")


@dataclass(frozen=True)
class AttackPlan:
    """Concrete plan: tool steps plus the success predicate they aim at."""

    steps: tuple[tuple[str, dict[str, Any]], ...]
    predicate: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "steps": [[tool, args] for tool, args in self.steps],
            "predicate": self.predicate,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> AttackPlan:
        return cls(
            steps=tuple((str(t), dict(a)) for t, a in raw.get("steps", [])),
            predicate=raw.get("predicate"),
        )


def plan_from_raw(raw: Any) -> AttackPlan | str:
    """A plan entry is either symbolic (string) or a concrete step list."""
    if isinstance(raw, str):
        if raw not in SYMBOLIC_PLANS:
            raise SchemaError(f"unknown symbolic plan {raw!r}")
        return raw
    if isinstance(raw, dict):
        return AttackPlan.from_dict(raw)
    raise SchemaError(f"plan must be a string or an object, got {type(raw).__name__}")


@dataclass(frozen=True)
class AttackPrompt:
    """One corpus record: the injected text plus everything a trial needs."""

    attack_id: str
    attack_set: str
    category: str
    language: str
    payload: str
    suite: str | None = None
    tier: str | None = None
    translations: dict[str, str] = field(default_factory=dict)
    mentions_decoys: tuple[str, ...] = ()
    obfuscation: str | None = None
    slot: str | None = None
    task_id: str | None = None
    plans: dict[str, AttackPlan | str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.attack_set not in ATTACK_SETS:
            raise SchemaError(
                f"{self.attack_id}: unknown attack set {self.attack_set!r}"
            )
        if (self.attack_set == "adaptive") != (self.tier is not None):
            raise SchemaError(
                f"{self.attack_id}: tier must be set exactly when the record "
                f"is adaptive"
            )
        if self.tier is not None and self.tier not in TIERS:
            raise SchemaError(f"{self.attack_id}: unknown tier {self.tier!r}")
        if self.language not in LANGUAGES:
            raise SchemaError(
                f"{self.attack_id}: unknown language {self.language!r}"
            )
        if self.attack_set == "set_b" and self.suite is not None:
            raise SchemaError(
                f"{self.attack_id}: set_b records are domain-agnostic"
            )
        if self.attack_set != "set_b" and self.suite is None:
            raise SchemaError(f"{self.attack_id}: missing suite")
        if not self.plans:
            raise SchemaError(f"{self.attack_id}: record has no plans")

    def to_dict(self) -> dict[str, Any]:
        return {
            "attack_id": self.attack_id,
            "attack_set": self.attack_set,
            "category": self.category,
            "language": self.language,
            "payload": self.payload,
            "suite": self.suite,
            "tier": self.tier,
            "translations": dict(self.translations),
            "mentions_decoys": list(self.mentions_decoys),
            "obfuscation": self.obfuscation,
            "slot": self.slot,
            "task_id": self.task_id,
            "plans": {
                k: (v if isinstance(v, str) else v.to_dict())
                for k, v in self.plans.items()
            },
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> AttackPrompt:
        try:
            return cls(
                attack_id=str(raw["attack_id"]),
                attack_set=str(raw["attack_set"]),
                category=str(raw["category"]),
                language=str(raw["language"]),
                payload=str(raw["payload"]),
                suite=raw.get("suite"),
                tier=raw.get("tier"),
                translations=dict(raw.get("translations", {})),
                mentions_decoys=tuple(raw.get("mentions_decoys", [])),
                obfuscation=raw.get("obfuscation"),
                slot=raw.get("slot"),
                task_id=raw.get("task_id"),
                plans={
                    str(k): plan_from_raw(v)
                    for k, v in raw.get("plans", {}).items()
                },
            )
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed corpus record: {exc}") from exc


def variant_for(prompt: AttackPrompt, language: str) -> AttackPrompt:
    """The prompt as delivered in a given language.

    Adaptive records carry translations; picking one swaps the payload and
    the language tag but changes nothing else, so behavior is plan-driven
    and language-invariant by construction. A missing translation falls
    back to the record's own payload.
    """
    if language == prompt.language:
        return prompt
    payload = prompt.translations.get(language, prompt.payload)
    return dataclasses.replace(prompt, language=language, payload=payload)


@dataclass(frozen=True)
class Corpus:
    header: dict[str, Any]
    prompts: tuple[AttackPrompt, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for p in self.prompts:
            if p.attack_id in seen:
                raise SchemaError(f"duplicate attack_id {p.attack_id!r}")
            seen.add(p.attack_id)

    def by_set(self, attack_set: str) -> tuple[AttackPrompt, ...]:
        return tuple(p for p in self.prompts if p.attack_set == attack_set)

    def for_suite(self, suite: str, attack_set: str) -> tuple[AttackPrompt, ...]:
        """Prompts applicable to a suite: its own plus domain-agnostic ones."""
        return tuple(
            p
            for p in self.prompts
            if p.attack_set == attack_set and p.suite in (suite, None)
        )

    def get(self, attack_id: str) -> AttackPrompt:
        for p in self.prompts:
            if p.attack_id == attack_id:
                return p
        raise KeyError(f"no attack {attack_id!r} in corpus")

    def validate(self) -> None:
        """Check the advertised taxonomy counts; raise on any drift."""
        if len(self.prompts) != EXPECTED_TOTAL:
            raise TaxonomyMismatch(
                f"corpus has {len(self.prompts)} records, expected {EXPECTED_TOTAL}"
            )
        for attack_set, expected in EXPECTED_PER_SET.items():
            got = len(self.by_set(attack_set))
            if got != expected:
                raise TaxonomyMismatch(
                    f"{attack_set} has {got} records, expected {expected}"
                )
        for lang in LANGUAGES:
            a = sum(1 for p in self.by_set("set_a") if p.language == lang)
            b = sum(1 for p in self.by_set("set_b") if p.language == lang)
            if a != 20:
                raise TaxonomyMismatch(f"set_a/{lang} has {a} records, expected 20")
            if b != 12:
                raise TaxonomyMismatch(f"set_b/{lang} has {b} records, expected 12")
        adaptive = self.by_set("adaptive")
        suites = sorted({p.suite for p in adaptive if p.suite})
        for suite in suites:
            per_suite = [p for p in adaptive if p.suite == suite]
            if len(per_suite) != 12:
                raise TaxonomyMismatch(
                    f"adaptive/{suite} has {len(per_suite)} records, expected 12"
                )
            for tier in TIERS:
                n = sum(1 for p in per_suite if p.tier == tier)
                if n != 4:
                    raise TaxonomyMismatch(
                        f"adaptive/{suite}/{tier} has {n} records, expected 4"
                    )
        for p in adaptive:
            missing = [l for l in LANGUAGES if l != "en" and l not in p.translations]
            if missing:
                raise TaxonomyMismatch(
                    f"{p.attack_id}: missing translations for {missing}"
                )

    def to_dict(self) -> dict[str, Any]:
        return {
            "header": dict(self.header),
            "prompts": [p.to_dict() for p in self.prompts],
        }


def load_corpus(path: str | Path, validate: bool = True) -> Corpus:
    """Load a corpus JSON document from disk."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot load corpus {path}: {exc}") from exc
    return corpus_from_raw(raw, validate=validate)


def corpus_from_raw(raw: dict[str, Any], validate: bool = True) -> Corpus:
    if not isinstance(raw, dict) or "prompts" not in raw:
        raise SchemaError("corpus document must be an object with 'prompts'")
    corpus = Corpus(
        header=dict(raw.get("header", {})),
        prompts=tuple(AttackPrompt.from_dict(r) for r in raw["prompts"]),
    )
    if validate:
        corpus.validate()
    return corpus


def load_bundled_corpus(validate: bool = True) -> Corpus:
    """The corpus shipped inside the package."""
    raw = json.loads(fixture_text("corpus.json"))
    return corpus_from_raw(raw, validate=validate)
