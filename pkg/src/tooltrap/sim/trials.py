"""Trial runner and campaign orchestration.

A trial plays one scripted task through a gateway session against a fresh
environment, optionally with an injected attack prompt. The simulated agent
reads the poisoned document mid-task; a seeded coin flip decides whether it
complies. On compliance it runs the attack sequence its policy selects,
then finishes the task. Detection comes from the alert log, attack success
strictly from the environment's final state, and evasion is success without
detection.

Campaigns enumerate trial coordinates deterministically and derive each
trial's seed from the campaign seed plus the trial id, so identical plans
always reproduce identical records.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from ..alertlog import AlertLog
from ..config import TrapConfig, load_fixture_config
from ..errors import ConfigError, InjectionSlotMissing, PolicyStuck
from ..gateway.server import GatewaySession
from ..types import InspectionVerdict, ToolCall, Trace, TrialRecord
from .corpus import AttackPlan, AttackPrompt, Corpus, load_bundled_corpus, variant_for
from .environments import Environment
from .policies import (
    ATTACK_POLICY_KINDS,
    AgentPolicy,
    PolicyKind,
    decoy_calls,
    plan_for,
)
from .suites import SUITE_NAMES, doc_for_slot, get_suite

_DOC_READERS = {"read_document": "doc_id", "read_file": "file_id"}


@dataclass(frozen=True)
class TrialResult:
    record: TrialRecord
    trace: Trace
    verdicts: tuple[InspectionVerdict, ...]


def _stable_seed(text: str) -> int:
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:6], "big")


def _stable_index(text: str, n: int) -> int:
    return _stable_seed(text) % n


def _resolve_args(env: Environment, value: Any) -> Any:
    if isinstance(value, str):
        return env.resolve_text(value)
    if isinstance(value, dict):
        return {k: _resolve_args(env, v) for k, v in value.items()}
    if isinstance(value, list):
        return [_resolve_args(env, v) for v in value]
    return value


def _plan_needs_credential(plan: AttackPlan) -> bool:
    return "$CRED:" in json.dumps([args for _, args in plan.steps])


def _attack_sequence(
    policy: AgentPolicy,
    prompt: AttackPrompt,
    plan: AttackPlan,
    bindings: dict[str, Any],
) -> list[tuple[str, dict[str, Any]]]:
    """Full call sequence for a complying agent: decoy extras the prompt
    talked a gullible agent into, a short gathering sweep (attackers case
    the joint before writing), a credential read when the plan needs one,
    then the plan itself."""
    seq: list[tuple[str, dict[str, Any]]] = []
    plan_tools = {tool for tool, _ in plan.steps}

    for name, args in decoy_calls(policy.kind, prompt):
        if name not in plan_tools:
            seq.append((name, args))

    for tool, args in bindings.get("recon_reads", []):
        if tool not in plan_tools:
            seq.append((str(tool), dict(args)))

    cred = bindings.get("credential_read")
    if cred is not None and _plan_needs_credential(plan):
        cred_step = (str(cred[0]), dict(cred[1]))
        if cred_step not in plan.steps:
            seq.append(cred_step)

    seq.extend(plan.steps)
    return seq


def run_trial(
    suite: str,
    task_id: str | None = None,
    attack: AttackPrompt | None = None,
    policy: AgentPolicy | None = None,
    config: TrapConfig | None = None,
    seed: int = 0,
    language: str | None = None,
    alert_log: AlertLog | None = None,
    trial_id: str | None = None,
) -> TrialResult:
    """Play one task (optionally under attack) and score the outcome."""
    suite_def = get_suite(suite)
    if config is None:
        config = load_fixture_config(suite)
    if policy is None:
        policy = (
            AgentPolicy(PolicyKind.BENIGN)
            if attack is None
            else AgentPolicy(PolicyKind.GULLIBLE)
        )
    if attack is not None and language is not None:
        attack = variant_for(attack, language)

    bindings = suite_def.bindings
    slot: str | None = None
    if attack is not None:
        if attack.slot is not None:
            slot = attack.slot
            if task_id is None:
                task_id = attack.task_id
        else:
            points = bindings["injection_points"]
            chosen = points[_stable_index(attack.attack_id, len(points))]
            slot = chosen[0]
            if task_id is None:
                task_id = chosen[1]
    if task_id is None:
        raise ConfigError("a trial needs a task: pass task_id or a placed attack")

    task = None
    for t in suite_def.tasks:
        if t.task_id == task_id:
            task = t
            break
    if task is None:
        raise ConfigError(f"suite {suite!r} has no task {task_id!r}")

    injection: tuple[str, str] | None = None
    trigger_idx: int | None = None
    if attack is not None:
        slot_doc = doc_for_slot(suite_def, slot)
        if slot_doc is None:
            raise InjectionSlotMissing(
                f"suite {suite!r} has no document with slot {slot!r}"
            )
        for i, (tool, args) in enumerate(task.steps):
            key = _DOC_READERS.get(tool)
            if key is not None and args.get(key) == slot_doc:
                trigger_idx = i
                break
        if trigger_idx is None:
            raise InjectionSlotMissing(
                f"task {task_id!r} never reads {slot_doc!r}, so an injection "
                f"at slot {slot!r} cannot reach the agent"
            )
        injection = (slot, attack.payload)

    if trial_id is None:
        parts = [
            suite,
            task_id,
            attack.attack_id if attack else "benign",
            policy.kind.value,
            attack.language if attack else "en",
            str(seed),
        ]
        trial_id = ".".join(parts)

    env = Environment(suite_def, config, injection)
    log = alert_log if alert_log is not None else AlertLog()

    tick = itertools.count()
    session = GatewaySession(
        config=config,
        backend=env,
        alert_log=log,
        session_id=trial_id,
        clock=lambda: next(tick) * 0.001,
    )

    calls: list[ToolCall] = []
    req_ids = itertools.count(1)

    def do_call(tool: str, args: dict[str, Any]) -> None:
        resolved = _resolve_args(env, dict(args))
        session.handle_frame(
            {"type": "call_tool", "id": next(req_ids), "name": tool, "args": resolved}
        )
        calls.append(
            ToolCall(
                call_id=f"{trial_id}:{len(calls) + 1}",
                session_id=trial_id,
                tool_name=tool,
                args=resolved,
                timestamp=len(calls) * 0.001,
            )
        )

    rng = random.Random(seed)
    complied = False
    plan: AttackPlan | None = None
    error = ""

    for i, (tool, args) in enumerate(task.steps):
        do_call(tool, args)
        if (
            attack is not None
            and i == trigger_idx
            and rng.random() < policy.compliance
        ):
            try:
                plan = plan_for(
                    policy.kind, attack, bindings, config.registry.decoy_names
                )
            except PolicyStuck as exc:
                error = str(exc)
            else:
                complied = True
                for step_tool, step_args in _attack_sequence(
                    policy, attack, plan, bindings
                ):
                    do_call(step_tool, step_args)

    session.handle_frame({"type": "close"})

    verdicts = log.session_verdicts(trial_id)
    n_alerts = sum(len(v.alerts) for v in verdicts)
    detected = n_alerts > 0
    layers: list[str] = []
    for v in verdicts:
        for layer in v.layers_fired:
            if layer.value not in layers:
                layers.append(layer.value)

    succeeded = bool(complied and plan is not None and env.check(plan.predicate))
    record = TrialRecord(
        trial_id=trial_id,
        suite=suite,
        task_id=task_id,
        policy=policy.kind.value,
        language=attack.language if attack else "en",
        attack_id=attack.attack_id if attack else None,
        attack_set=attack.attack_set if attack else None,
        tier=attack.tier if attack else None,
        category=attack.category if attack else None,
        complied=complied,
        seed=seed,
        attack_succeeded=succeeded,
        detected=detected,
        evaded=succeeded and not detected,
        layers_fired=tuple(layers),
        n_calls=len(calls),
        n_alerts=n_alerts,
        error=error,
    )
    trace = Trace(
        session_id=trial_id,
        suite=suite,
        task_id=task_id,
        expected_tools=task.expected_tools,
        expected_values=task.expected_values,
        calls=tuple(calls),
    )
    return TrialResult(record=record, trace=trace, verdicts=verdicts)


# --- campaigns ----------------------------------------------------------------


@dataclass(frozen=True)
class TrialCoord:
    suite: str
    task_id: str | None
    attack_id: str | None
    language: str
    policy: PolicyKind
    rep: int

    def trial_id(self, campaign: str) -> str:
        middle = self.attack_id if self.attack_id else f"{self.task_id}.benign"
        return (
            f"{campaign}.{self.suite}.{middle}.{self.language}"
            f".{self.policy.value}.r{self.rep}"
        )


@dataclass(frozen=True)
class CampaignPlan:
    """Deterministic enumeration of trials to run."""

    name: str
    suites: tuple[str, ...] = SUITE_NAMES
    attack_sets: tuple[str, ...] = ()
    languages: tuple[str, ...] = ("en",)
    policies: tuple[PolicyKind, ...] = ATTACK_POLICY_KINDS
    trials_per_combo: int = 1
    benign_repetitions: int = 0
    compliance: float = 1.0
    seed: int = 2025
    jobs: int = 1

    def coordinates(self, corpus: Corpus) -> tuple[TrialCoord, ...]:
        coords: list[TrialCoord] = []
        if self.benign_repetitions > 0:
            for suite in self.suites:
                for task in get_suite(suite).tasks:
                    for rep in range(self.benign_repetitions):
                        coords.append(
                            TrialCoord(
                                suite=suite,
                                task_id=task.task_id,
                                attack_id=None,
                                language="en",
                                policy=PolicyKind.BENIGN,
                                rep=rep,
                            )
                        )
        for suite in self.suites:
            for attack_set in self.attack_sets:
                for prompt in corpus.for_suite(suite, attack_set):
                    # Adaptive records pivot across languages at run time;
                    # set A/B records are already one-per-language.
                    if prompt.attack_set == "adaptive":
                        langs: tuple[str, ...] = self.languages
                    elif prompt.language in self.languages:
                        langs = (prompt.language,)
                    else:
                        langs = ()
                    for lang in langs:
                        for rep in range(self.trials_per_combo):
                            for pk in self.policies:
                                coords.append(
                                    TrialCoord(
                                        suite=suite,
                                        task_id=None,
                                        attack_id=prompt.attack_id,
                                        language=lang,
                                        policy=pk,
                                        rep=rep,
                                    )
                                )
        return tuple(coords)

    def size(self, corpus: Corpus) -> int:
        return len(self.coordinates(corpus))


@dataclass(frozen=True)
class CampaignOutcome:
    plan: CampaignPlan
    records: tuple[TrialRecord, ...]
    traces: tuple[Trace, ...]
    alert_log: AlertLog


def run_campaign(
    plan: CampaignPlan,
    corpus: Corpus | None = None,
    configs: dict[str, TrapConfig] | None = None,
    alert_log: AlertLog | None = None,
    jobs: int | None = None,
) -> CampaignOutcome:
    """Run every trial in the plan; results are ordered by coordinate."""
    if corpus is None:
        corpus = load_bundled_corpus()
    if configs is None:
        configs = {s: load_fixture_config(s) for s in plan.suites}
    log = alert_log if alert_log is not None else AlertLog()
    coords = plan.coordinates(corpus)

    def one(coord: TrialCoord) -> TrialResult:
        attack = corpus.get(coord.attack_id) if coord.attack_id else None
        policy = (
            AgentPolicy(PolicyKind.BENIGN)
            if coord.policy is PolicyKind.BENIGN
            else AgentPolicy(coord.policy, compliance=plan.compliance)
        )
        tid = coord.trial_id(plan.name)
        # Each trial gets a private log so parallel runs cannot interleave;
        # verdicts are merged below in coordinate order, making the outcome
        # log identical whatever the worker count.
        return run_trial(
            suite=coord.suite,
            task_id=coord.task_id,
            attack=attack,
            policy=policy,
            config=configs[coord.suite],
            seed=_stable_seed(f"{plan.seed}:{tid}"),
            language=coord.language if attack is not None else None,
            alert_log=None,
            trial_id=tid,
        )

    workers = jobs if jobs is not None else plan.jobs
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, coords))
    else:
        results = [one(c) for c in coords]

    for res in results:
        for verdict in res.verdicts:
            log.append(verdict)

    return CampaignOutcome(
        plan=plan,
        records=tuple(r.record for r in results),
        traces=tuple(r.trace for r in results),
        alert_log=log,
    )


def benign_plan(repetitions: int = 5, seed: int = 2025) -> CampaignPlan:
    """All 97 tasks, repeated; no attacks anywhere."""
    return CampaignPlan(
        name="benign",
        benign_repetitions=repetitions,
        attack_sets=(),
        policies=(),
        seed=seed,
    )


def adaptive_plan(
    trials: int = 3, compliance: float = 0.8, seed: int = 2025
) -> CampaignPlan:
    """Adaptive prompts crossed with languages, trials, and attack policies."""
    return CampaignPlan(
        name="adaptive",
        attack_sets=("adaptive",),
        languages=("en", "ku", "ar"),
        policies=ATTACK_POLICY_KINDS,
        trials_per_combo=trials,
        compliance=compliance,
        seed=seed,
    )


def classifier_plan(compliance: float = 0.65, seed: int = 2025) -> CampaignPlan:
    """Mixed benign/attack campaign sized for training the trace classifier."""
    return CampaignPlan(
        name="classifier",
        attack_sets=("adaptive",),
        languages=("en", "ku", "ar", "cs"),
        policies=ATTACK_POLICY_KINDS,
        trials_per_combo=1,
        benign_repetitions=3,
        compliance=compliance,
        seed=seed,
    )


def write_records(records: Iterable[TrialRecord], path: str | Path) -> int:
    """One JSON object per line; returns the number written."""
    path = Path(path)
    n = 0
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(), separators=(",", ":")) + "\n")
            n += 1
    return n


def read_records(path: str | Path) -> tuple[TrialRecord, ...]:
    out: list[TrialRecord] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(TrialRecord.from_dict(json.loads(line)))
    return tuple(out)
