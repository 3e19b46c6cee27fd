#!/usr/bin/env python3
"""Regenerate the bundled fixtures from the suite and corpus builders.

Everything written here is deterministic, so reruns produce identical
bytes and the drift-guard tests can compare fixtures against the builders.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from tooltrap.gateway.replay import write_traces  # noqa: E402
from tooltrap.sim.corpusgen import build_corpus  # noqa: E402
from tooltrap.sim.policies import AgentPolicy, PolicyKind  # noqa: E402
from tooltrap.sim.suites import SUITE_NAMES, get_suite, suite_config_raw  # noqa: E402
from tooltrap.sim.trials import run_trial, write_records  # noqa: E402
from tooltrap.types import TrialRecord  # noqa: E402

FIXTURES = REPO / "src" / "tooltrap" / "fixtures"


def write_configs() -> None:
    out = FIXTURES / "configs"
    out.mkdir(parents=True, exist_ok=True)
    for suite in SUITE_NAMES:
        raw = suite_config_raw(get_suite(suite))
        path = out / f"{suite}.json"
        path.write_text(json.dumps(raw, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


def write_corpus() -> None:
    corpus = build_corpus()
    path = FIXTURES / "corpus.json"
    path.write_text(json.dumps(corpus.to_dict(), indent=1, ensure_ascii=True) + "\n")
    print(f"wrote {path} ({len(corpus.prompts)} prompts)")


def _record(
    i: int,
    name: str,
    succeeded: bool,
    detected: bool,
    attack_set: str,
    policy: str,
    tier: str | None,
) -> TrialRecord:
    suites = SUITE_NAMES
    suite = suites[i % len(suites)]
    return TrialRecord(
        trial_id=f"{name}.{i:04d}",
        suite=suite,
        task_id=f"{suite[:4]}-fixture",
        policy=policy,
        language="en",
        attack_id=f"{name}-{i:04d}",
        attack_set=attack_set,
        tier=tier,
        category="data_exfiltration",
        complied=True,
        seed=i,
        attack_succeeded=succeeded,
        detected=detected,
        evaded=succeeded and not detected,
        layers_fired=("honeytool",) if detected else (),
        n_calls=8,
        n_alerts=1 if detected else 0,
        error="",
    )


def write_record_fixtures() -> None:
    out = FIXTURES / "records"
    out.mkdir(parents=True, exist_ok=True)

    # 176 attacked runs, 129 succeeded, 117 of those detected.
    rows: list[TrialRecord] = []
    i = 0
    for detected, count in ((True, 117), (False, 12)):
        for _ in range(count):
            rows.append(_record(i, "cd", True, detected, "set_a", "gullible", None))
            i += 1
    for detected, count in ((True, 30), (False, 17)):
        for _ in range(count):
            rows.append(_record(i, "cd", False, detected, "set_a", "gullible", None))
            i += 1
    path = out / "conditional_detection_sample.jsonl"
    write_records(rows, path)
    print(f"wrote {path} ({len(rows)} records)")

    # 432 adaptive runs, 17 succeeded, 12 of those detected (5 evaded).
    rows = []
    i = 0
    tiers = ("t1", "t2", "t3")
    policies = ("adaptive_t1", "adaptive_t2", "adaptive_t3")

    def adaptive(succeeded: bool, detected: bool, count: int) -> None:
        nonlocal i
        for _ in range(count):
            rows.append(
                _record(
                    i, "ae", succeeded, detected, "adaptive",
                    policies[i % 3], tiers[i % 3],
                )
            )
            i += 1

    adaptive(True, True, 12)
    adaptive(True, False, 5)
    adaptive(False, True, 360)
    adaptive(False, False, 55)
    path = out / "adaptive_evasion_sample.jsonl"
    write_records(rows, path)
    print(f"wrote {path} ({len(rows)} records)")


def write_trace_fixture() -> None:
    """A banking session where a gullible agent takes the bait."""
    out = FIXTURES / "traces"
    out.mkdir(parents=True, exist_ok=True)
    corpus = build_corpus()
    attack = corpus.get("adv-banking-t1-1")
    result = run_trial(
        suite="banking",
        attack=attack,
        policy=AgentPolicy(PolicyKind.GULLIBLE, compliance=1.0),
        seed=7,
        trial_id="fixture-compromised-banking",
    )
    assert result.record.detected, "fixture session must alert"
    assert "honeytool" in result.record.layers_fired
    path = out / "compromised_banking.jsonl"
    write_traces([result.trace], path)
    print(f"wrote {path} ({result.record.n_calls} calls)")


def main() -> None:
    write_configs()
    write_corpus()
    write_record_fixtures()
    write_trace_fixture()


if __name__ == "__main__":
    main()
