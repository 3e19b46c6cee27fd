"""Labeling rule, metric arithmetic, split hygiene, transfer protocol."""

import random

import pytest

from tooltrap.alertlog import AlertLog
from tooltrap.classifier.evaluate import (
    evaluate_predictions,
    split_rows,
    transfer_eval,
)
from tooltrap.classifier.features import FeatureExtractor
from tooltrap.classifier.labels import (
    LabeledTrace,
    LabelSource,
    TraceLabel,
    build_dataset,
    label_traces,
    read_dataset,
    write_dataset,
)
from tooltrap.config import load_fixture_config
from tooltrap.errors import EmptyData, LeakyPartition
from tooltrap.types import (
    Alert,
    HoneytokenDetail,
    HoneytoolDetail,
    InspectionVerdict,
    Layer,
    ParamDetail,
    TokenCategory,
    ToolCall,
    Trace,
)

CFG = load_fixture_config("banking")


def _trace(session_id, calls=()):
    return Trace(
        session_id=session_id,
        suite="banking",
        task_id="bank-01",
        calls=tuple(calls),
    )


def _verdict(session_id, layer=None):
    detail = {
        Layer.HONEYTOOL: HoneytoolDetail(decoy_name="export_all_user_data"),
        Layer.HONEYTOKEN: HoneytokenDetail(
            token_id="ht_api_key", category=TokenCategory.API_KEY, location="x"
        ),
        Layer.PARAM_VALIDATOR: ParamDetail(tool="send_money", param="iban", value="v"),
        None: None,
    }[layer]
    alerts = ()
    if detail is not None:
        alerts = (
            Alert(
                layer=layer,
                detail=detail,
                session_id=session_id,
                call_id=f"{session_id}:1",
                timestamp=0.0,
            ),
        )
    return InspectionVerdict(
        call_id=f"{session_id}:1",
        session_id=session_id,
        alerts=alerts,
        unknown_tool=False,
        latency_ms=0.1,
    )


# --- labeling rule --------------------------------------------------------------


def test_decoy_alert_labels_compromised():
    log = AlertLog()
    log.append(_verdict("s1", Layer.HONEYTOOL))
    out = label_traces([_trace("s1")], log)
    row = out.labeled[0]
    assert row.label is TraceLabel.COMPROMISED
    assert row.label_source is LabelSource.TRAP_TRIGGER
    assert out.audit_sessions == ()


def test_layer23_only_goes_to_audit_not_labels():
    log = AlertLog()
    log.append(_verdict("s2", Layer.HONEYTOKEN))
    log.append(_verdict("s3", Layer.PARAM_VALIDATOR))
    out = label_traces([_trace("s2"), _trace("s3")], log)
    assert all(row.label is TraceLabel.BENIGN for row in out.labeled)
    assert out.audit_sessions == ("s2", "s3")


def test_silent_session_assumed_benign():
    log = AlertLog()
    out = label_traces([_trace("quiet")], log)
    assert out.labeled[0].label is TraceLabel.BENIGN
    assert out.labeled[0].label_source is LabelSource.ASSUMED_BENIGN


def test_label_source_invariant_enforced():
    with pytest.raises(ValueError):
        LabeledTrace(
            trace=_trace("x"),
            label=TraceLabel.COMPROMISED,
            label_source=LabelSource.ASSUMED_BENIGN,
        )
    with pytest.raises(ValueError):
        LabeledTrace(
            trace=_trace("x"),
            label=TraceLabel.BENIGN,
            label_source=LabelSource.TRAP_TRIGGER,
        )


def test_build_dataset_attaches_metadata():
    from tooltrap.types import TrialRecord

    rec = TrialRecord(
        trial_id="s1",
        suite="banking",
        task_id="bank-01",
        policy="gullible",
        language="ku",
        complied=True,
    )
    log = AlertLog()
    log.append(_verdict("s1", Layer.HONEYTOOL))
    out = build_dataset([_trace("s1")], log, records=[rec])
    row = out.labeled[0]
    assert row.policy == "gullible"
    assert row.language == "ku"
    assert row.ground_truth_compromised is True


def test_dataset_round_trip(tmp_path):
    log = AlertLog()
    log.append(_verdict("s1", Layer.HONEYTOOL))
    calls = (ToolCall("s1:1", "s1", "get_balance", {}, 0.0),)
    out = label_traces([_trace("s1", calls)], log)
    path = tmp_path / "rows.jsonl"
    assert write_dataset(out.labeled, path) == 1
    again = read_dataset(path)
    assert again == list(out.labeled)


# --- metric arithmetic ------------------------------------------------------------


def test_confusion_against_brute_force_oracle():
    rng = random.Random(1234)
    for _ in range(200):
        n = rng.randint(1, 60)
        y_true = [rng.random() < 0.5 for _ in range(n)]
        y_pred = [rng.random() < 0.5 for _ in range(n)]
        m = evaluate_predictions(y_true, y_pred)
        tp = sum(t and p for t, p in zip(y_true, y_pred))
        fp = sum((not t) and p for t, p in zip(y_true, y_pred))
        fn = sum(t and (not p) for t, p in zip(y_true, y_pred))
        tn = sum((not t) and (not p) for t, p in zip(y_true, y_pred))
        assert (m["tp"], m["fp"], m["fn"], m["tn"]) == (tp, fp, fn, tn)
        assert m["n"] == n
        if not m["degenerate"]:
            prec = tp / (tp + fp) if tp + fp else 0.0
            rec = tp / (tp + fn)
            f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
            assert m["f1"] == pytest.approx(f1, abs=1e-12)


def test_known_f1_value():
    # 114 positives, one missed, nothing falsely flagged.
    y_true = [True] * 114 + [False] * 300
    y_pred = [True] * 113 + [False] * 301
    m = evaluate_predictions(y_true, y_pred)
    assert (m["tp"], m["fp"], m["fn"]) == (113, 0, 1)
    assert m["recall"] == pytest.approx(0.9912280701754386, abs=1e-15)
    assert m["f1"] == pytest.approx(0.9955947136563876, abs=1e-15)
    assert m["fpr"] == 0.0


def test_degenerate_positive_free_set():
    m = evaluate_predictions([False, False], [False, False])
    assert m["degenerate"] and m["f1"] == 1.0
    m2 = evaluate_predictions([False, False], [True, False])
    assert m2["degenerate"] and m2["f1"] == 0.0


def test_eval_input_validation():
    with pytest.raises(EmptyData):
        evaluate_predictions([], [])
    with pytest.raises(ValueError):
        evaluate_predictions([True], [True, False])


# --- splits and transfer -----------------------------------------------------------


def _labeled_row(session_id, policy="gullible", language="en", compromised=False):
    calls = tuple(
        ToolCall(f"{session_id}:{i}", session_id, "get_balance", {}, i * 0.001)
        for i in range(1, 3)
    )
    return LabeledTrace(
        trace=_trace(session_id, calls),
        label=TraceLabel.COMPROMISED if compromised else TraceLabel.BENIGN,
        label_source=(
            LabelSource.TRAP_TRIGGER if compromised else LabelSource.ASSUMED_BENIGN
        ),
        policy=policy,
        language=language,
        ground_truth_compromised=compromised,
    )


def test_split_rows_deterministic_and_disjoint():
    rows = [_labeled_row(f"s{i}") for i in range(200)]
    train, test = split_rows(rows, test_fraction=0.3, seed=7)
    train2, test2 = split_rows(rows, test_fraction=0.3, seed=7)
    assert [r.trace.session_id for r in train] == [r.trace.session_id for r in train2]
    assert len(train) + len(test) == 200
    assert 30 <= len(test) <= 90  # loose band around the 30% target
    ids_train = {r.trace.session_id for r in train}
    ids_test = {r.trace.session_id for r in test}
    assert not ids_train & ids_test
    # Duplicate session rows land on the same side as each other.
    doubled = rows + [_labeled_row(f"s{i}") for i in range(200)]
    tr, te = split_rows(doubled, test_fraction=0.3, seed=7)
    assert {r.trace.session_id for r in tr} == ids_train
    assert {r.trace.session_id for r in te} == ids_test


def test_transfer_eval_rejects_leaky_partitions():
    extractors = {"banking": FeatureExtractor(CFG.registry, CFG.vault, CFG.policy)}
    rows = [
        _labeled_row("shared", policy="gullible", compromised=True),
        _labeled_row("shared", policy="adaptive_t2"),
        _labeled_row("x1", policy="gullible"),
        _labeled_row("x2", policy="adaptive_t2"),
    ]
    with pytest.raises(LeakyPartition):
        transfer_eval(
            rows,
            extractors,
            scheme="policy",
            train_values=["gullible"],
            test_values=["adaptive_t2"],
        )


def test_transfer_eval_input_validation():
    extractors = {"banking": FeatureExtractor(CFG.registry, CFG.vault, CFG.policy)}
    rows = [_labeled_row("a", policy="gullible", compromised=True)]
    with pytest.raises(ValueError):
        transfer_eval(rows, extractors, "suite", ["x"], ["y"])
    with pytest.raises(EmptyData):
        transfer_eval(rows, extractors, "policy", ["gullible"], ["adaptive_t3"])
