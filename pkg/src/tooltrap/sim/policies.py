"""Simulated agent behavior: who complies with an injection, and how.

A policy models the agent's reaction to an injected prompt, not a language
model. The benign policy never complies. The gullible policy follows the
prompt literally, including any decoy tools it names. The adaptive tiers
model attackers with increasing knowledge of the trap layout: tier 1 still
takes the decoy bait, tier 2 routes around anything decoy-shaped, tier 3
knows the validator configuration and aims at its gaps. Compliance is a
per-trial coin flip; everything after the flip is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable

from ..errors import PolicyStuck
from .corpus import AttackPlan, AttackPrompt


class PolicyKind(str, Enum):
    BENIGN = "benign"
    GULLIBLE = "gullible"
    ADAPTIVE_T1 = "adaptive_t1"
    ADAPTIVE_T2 = "adaptive_t2"
    ADAPTIVE_T3 = "adaptive_t3"


ATTACK_POLICY_KINDS: tuple[PolicyKind, ...] = (
    PolicyKind.GULLIBLE,
    PolicyKind.ADAPTIVE_T1,
    PolicyKind.ADAPTIVE_T2,
    PolicyKind.ADAPTIVE_T3,
)

# What the attacker behind each policy knows about the trap layout, which
# decides the plan variant it prefers.
KNOWLEDGE: dict[PolicyKind, str] = {
    PolicyKind.GULLIBLE: "naive",
    PolicyKind.ADAPTIVE_T1: "naive",
    PolicyKind.ADAPTIVE_T2: "informed",
    PolicyKind.ADAPTIVE_T3: "full",
}

_FALLBACK: dict[str, tuple[str, ...]] = {
    "naive": ("naive", "informed", "full"),
    "informed": ("informed", "naive", "full"),
    "full": ("full", "informed", "naive"),
}


@dataclass(frozen=True)
class AgentPolicy:
    """One behavioral profile plus its compliance probability."""

    kind: PolicyKind
    compliance: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is PolicyKind.BENIGN:
            object.__setattr__(self, "compliance", 0.0)
        if not 0.0 <= self.compliance <= 1.0:
            raise ValueError(
                f"compliance must be within [0, 1], got {self.compliance}"
            )


def _steps(raw: Iterable[Any]) -> tuple[tuple[str, dict[str, Any]], ...]:
    return tuple((str(t), dict(a)) for t, a in raw)


def resolve_symbolic(ref: str, bindings: dict[str, Any]) -> AttackPlan:
    """Materialize a ``$...`` plan reference against suite bindings."""
    if ref == "$exfil_write":
        e = bindings["exfil_write"]
        return AttackPlan(steps=_steps(e["steps"]), predicate=dict(e["predicate"]))
    if ref == "$recon_then_exfil":
        e = bindings["exfil_write"]
        return AttackPlan(
            steps=_steps(bindings["recon_reads"]) + _steps(e["steps"]),
            predicate=dict(e["predicate"]),
        )
    if ref == "$credential_then_covert":
        c = bindings["covert_write"]
        return AttackPlan(
            steps=_steps([bindings["credential_read"]]) + _steps(c["steps"]),
            predicate=dict(c["predicate"]),
        )
    raise PolicyStuck(f"unresolvable plan reference {ref!r}")


def _without_decoys(plan: AttackPlan, decoy_names: frozenset[str]) -> AttackPlan:
    steps = tuple(s for s in plan.steps if s[0] not in decoy_names)
    return AttackPlan(steps=steps, predicate=plan.predicate)


def plan_for(
    kind: PolicyKind,
    prompt: AttackPrompt,
    bindings: dict[str, Any],
    decoy_names: Iterable[str] = (),
) -> AttackPlan:
    """The plan this policy executes for this prompt.

    Knowledge levels fall back across plan variants so every attack policy
    resolves against every prompt; informed and full attackers additionally
    strip decoy-named steps from whatever they picked.
    """
    knowledge = KNOWLEDGE.get(kind)
    if knowledge is None:
        raise PolicyStuck("the benign policy never executes attack plans")
    decoys = frozenset(decoy_names)
    resolved = {
        key: (p if isinstance(p, AttackPlan) else resolve_symbolic(p, bindings))
        for key, p in prompt.plans.items()
    }
    for key in _FALLBACK[knowledge]:
        plan = resolved.get(key)
        if plan is None:
            continue
        if knowledge != "naive":
            plan = _without_decoys(plan, decoys)
            if not plan.steps:
                continue
        return plan
    raise PolicyStuck(
        f"{prompt.attack_id}: no usable plan at knowledge level {knowledge!r}"
    )


# The bait a naive agent reaches for when the prompt names no tool: the
# data-export decoy reads as the obvious shortcut for any smuggling goal.
DEFAULT_BAIT = "export_all_user_data"

_BAIT_TAKERS = (PolicyKind.GULLIBLE, PolicyKind.ADAPTIVE_T1)


def decoy_calls(
    kind: PolicyKind, prompt: AttackPrompt
) -> tuple[tuple[str, dict[str, Any]], ...]:
    """Extra decoy invocations a naive agent makes.

    It calls every decoy the prompt names; given a prompt that names none,
    it still grabs the most attractive tool in the listing for the job.
    Tier-1 attackers obfuscate their payloads but do not know which tools
    are traps, so they take the bait exactly like the gullible agent;
    tier 2 and up never volunteer these. Compliance by a bait-taking
    policy therefore always leaves layer-1 evidence.
    """
    if kind not in _BAIT_TAKERS:
        return ()
    if prompt.mentions_decoys:
        return tuple((name, {}) for name in prompt.mentions_decoys)
    return ((DEFAULT_BAIT, {}),)
