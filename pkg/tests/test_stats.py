"""Statistics: quantile accuracy, intervals, effect sizes, report rendering.

Expected values were frozen from an independent scipy session:
  scipy.stats.norm.ppf(0.975)                     -> 1.959963984540054
  proportion CIs recomputed from the closed form  -> see inline constants
"""

import math
import random

import pytest
from scipy import stats as sstats

from tooltrap.errors import (
    DomainError,
    EmptyInput,
    UndefinedConditional,
    ZeroSample,
)
from tooltrap.stats import (
    CampaignSummary,
    cohens_h,
    conditional_rate,
    normal_quantile,
    render_report,
    summarize,
    wilson_interval,
)
from tooltrap.types import TrialRecord


def _wilson_oracle(successes, n, confidence):
    z = sstats.norm.ppf(1 - (1 - confidence) / 2)
    p = successes / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    margin = (z / denom) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    low = 0.0 if successes == 0 else max(0.0, center - margin)
    high = 1.0 if successes == n else min(1.0, center + margin)
    return low, high


def _h_oracle(p1, p2):
    return abs(2 * math.asin(math.sqrt(p1)) - 2 * math.asin(math.sqrt(p2)))


# --- quantile ------------------------------------------------------------------


def test_normal_quantile_against_scipy():
    for p in (0.001, 0.025, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.999, 1e-9, 1 - 1e-9):
        assert normal_quantile(p) == pytest.approx(
            float(sstats.norm.ppf(p)), abs=1e-9
        )
    assert normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-12)


def test_normal_quantile_domain():
    for p in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(DomainError):
            normal_quantile(p)


# --- wilson interval --------------------------------------------------------------


def test_wilson_frozen_values():
    low, high = wilson_interval(0, 485, 0.95)
    assert low == 0.0
    assert high == pytest.approx(0.00785829178638296, abs=1e-15)

    low, high = wilson_interval(50, 100, 0.95)
    assert low == pytest.approx(0.4038315303659956, abs=1e-12)
    assert high == pytest.approx(0.5961684696340044, abs=1e-12)

    low, high = wilson_interval(485, 485, 0.95)
    assert low == pytest.approx(0.992141708213617, abs=1e-12)
    assert high == 1.0


def test_wilson_against_oracle_100_random_inputs():
    rng = random.Random(20250819)
    for _ in range(100):
        n = rng.randint(1, 5000)
        k = rng.randint(0, n)
        conf = rng.choice([0.8, 0.9, 0.95, 0.99])
        got = wilson_interval(k, n, conf)
        want = _wilson_oracle(k, n, conf)
        assert got[0] == pytest.approx(want[0], abs=1e-6)
        assert got[1] == pytest.approx(want[1], abs=1e-6)


def test_wilson_input_validation():
    with pytest.raises(ZeroSample):
        wilson_interval(0, 0)
    with pytest.raises(DomainError):
        wilson_interval(5, 4)
    with pytest.raises(DomainError):
        wilson_interval(-1, 4)
    with pytest.raises(DomainError):
        wilson_interval(1, 4, confidence=1.0)


# --- effect size -------------------------------------------------------------------


def test_cohens_h_frozen_value():
    assert cohens_h(0.453, 0.344) == pytest.approx(0.22315840410494414, abs=1e-15)
    assert cohens_h(0.453, 0.344) == pytest.approx(0.223, abs=1e-3)


def test_cohens_h_against_oracle_100_random_inputs():
    rng = random.Random(99)
    for _ in range(100):
        p1, p2 = rng.random(), rng.random()
        assert cohens_h(p1, p2) == pytest.approx(_h_oracle(p1, p2), abs=1e-6)


def test_cohens_h_properties():
    assert cohens_h(0.3, 0.3) == 0.0
    assert cohens_h(0.2, 0.7) == cohens_h(0.7, 0.2)
    with pytest.raises(DomainError):
        cohens_h(-0.1, 0.5)
    with pytest.raises(DomainError):
        cohens_h(0.5, 1.2)


def test_conditional_rate():
    assert conditional_rate(3, 4) == 0.75
    with pytest.raises(UndefinedConditional):
        conditional_rate(0, 0)


# --- summaries ----------------------------------------------------------------------


def _rec(i, attacked=True, succeeded=False, detected=False, language="en", policy="gullible"):
    return TrialRecord(
        trial_id=f"t{i}",
        suite="banking",
        task_id="bank-01",
        policy=policy if attacked else "benign",
        language=language,
        attack_id=f"a{i}" if attacked else None,
        attack_set="adaptive" if attacked else None,
        complied=attacked and succeeded,
        attack_succeeded=succeeded,
        detected=detected,
        evaded=succeeded and not detected,
        layers_fired=("honeytool",) if detected else (),
    )


def _fleet(n_succ_det, n_succ_undet, n_fail_det, n_fail_undet, **kw):
    rows = []
    i = 0
    for _ in range(n_succ_det):
        rows.append(_rec(i, succeeded=True, detected=True, **kw)); i += 1
    for _ in range(n_succ_undet):
        rows.append(_rec(i, succeeded=True, detected=False, **kw)); i += 1
    for _ in range(n_fail_det):
        rows.append(_rec(i, succeeded=False, detected=True, **kw)); i += 1
    for _ in range(n_fail_undet):
        rows.append(_rec(i, succeeded=False, detected=False, **kw)); i += 1
    return rows


def test_summarize_counts_and_invariant():
    rows = _fleet(117, 12, 30, 17)
    (s,) = summarize(rows)
    assert s.n_runs == 176
    assert s.n_succeeded == 129
    assert s.n_detected_given_success == 117
    assert s.n_evaded == 12
    assert s.detection_given_success.value == pytest.approx(117 / 129)
    assert s.fpr is None  # no benign rows in this group


def test_summary_invariant_enforced():
    rows = _fleet(2, 1, 0, 0)
    (s,) = summarize(rows)
    with pytest.raises(ValueError):
        CampaignSummary(
            group=s.group,
            n_runs=s.n_runs,
            n_attacked=s.n_attacked,
            n_benign=s.n_benign,
            n_succeeded=s.n_succeeded,
            n_detected_any=s.n_detected_any,
            n_detected_given_success=s.n_detected_given_success,
            n_evaded=s.n_evaded + 1,
            n_false_alarms=s.n_false_alarms,
            asr=s.asr,
            detection_given_success=s.detection_given_success,
            evasion_rate=s.evasion_rate,
            fpr=s.fpr,
        )


def test_summarize_empty_input():
    with pytest.raises(EmptyInput):
        summarize([])


def test_benign_report_cell():
    rows = [
        _rec(i, attacked=False, succeeded=False, detected=False) for i in range(485)
    ]
    (s,) = summarize(rows)
    assert s.n_benign == 485
    assert s.n_false_alarms == 0
    report = render_report([s])
    assert "0/485 = 0.0% [0.00%, 0.79%]" in report


def test_conditional_detection_report_cell():
    (s,) = summarize(_fleet(117, 12, 30, 17))
    report = render_report([s])
    assert "117/129 = 90.7%" in report


def test_evasion_report_cell():
    (s,) = summarize(_fleet(12, 5, 360, 55))
    assert s.n_succeeded == 17
    assert s.n_evaded == 5
    report = render_report([s])
    assert "5/17 = 29.4%" in report


def test_zero_denominator_renders_na():
    rows = _fleet(0, 0, 3, 2)
    (s,) = summarize(rows)
    assert s.detection_given_success is None
    report = render_report([s])
    assert "n/a (0 succeeded)" in report


def test_group_by_language_adds_gap_row():
    rows = _fleet(9, 1, 0, 0, language="en") + _fleet(7, 3, 0, 0, language="ku")
    summaries = summarize(rows, group_by=("language",))
    assert len(summaries) == 2
    report = render_report(summaries)
    # en detects 90%, ku 70%: a 20-point spread.
    assert "20.0 pp spread" in report


def test_jsonl_rendering_parses():
    import json

    rows = _fleet(2, 1, 1, 1)
    summaries = summarize(rows, group_by=("policy",))
    out = render_report(summaries, fmt="jsonl")
    parsed = [json.loads(line) for line in out.splitlines()]
    assert parsed[0]["group"] == {"policy": "gullible"}
    assert parsed[0]["n_succeeded"] == 3


def test_summaries_sorted_by_group_key():
    rows = _fleet(1, 1, 1, 1, policy="gullible") + _fleet(
        1, 1, 1, 1, policy="adaptive_t3"
    )
    summaries = summarize(rows, group_by=("policy",))
    labels = [dict(s.group)["policy"] for s in summaries]
    assert labels == sorted(labels)
