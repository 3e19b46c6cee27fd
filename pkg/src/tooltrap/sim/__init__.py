"""Simulated tool environments, scripted agent policies, attack corpus."""

from .suites import SUITE_NAMES, get_suite, ATTACKER_EMAIL, ATTACKER_IBAN, ATTACKER_URL
from .environments import Environment, TaskScript, build_environment, ToolExecutionError
from .obfuscate import Transform, obfuscate, HOMOGLYPHS, DEFAULT_FLAGGED_KEYWORDS
from .corpus import AttackPrompt, AttackPlan, Corpus, load_corpus, load_bundled_corpus
from .policies import AgentPolicy, PolicyKind, ATTACK_POLICY_KINDS
from .trials import (
    CampaignPlan,
    TrialResult,
    run_trial,
    run_campaign,
    benign_plan,
    adaptive_plan,
    classifier_plan,
)

__all__ = [
    "SUITE_NAMES",
    "get_suite",
    "ATTACKER_EMAIL",
    "ATTACKER_IBAN",
    "ATTACKER_URL",
    "Environment",
    "TaskScript",
    "build_environment",
    "ToolExecutionError",
    "Transform",
    "obfuscate",
    "HOMOGLYPHS",
    "DEFAULT_FLAGGED_KEYWORDS",
    "AttackPrompt",
    "AttackPlan",
    "Corpus",
    "load_corpus",
    "load_bundled_corpus",
    "AgentPolicy",
    "PolicyKind",
    "ATTACK_POLICY_KINDS",
    "CampaignPlan",
    "TrialResult",
    "run_trial",
    "run_campaign",
    "benign_plan",
    "adaptive_plan",
    "classifier_plan",
]
