"""Alert log: accounting, attribution, export format, thread safety."""

import json
import threading

import pytest

from tooltrap.alertlog import AlertLog
from tooltrap.errors import UnknownSession
from tooltrap.types import (
    Alert,
    HoneytokenDetail,
    HoneytoolDetail,
    InspectionVerdict,
    Layer,
    ParamDetail,
    TokenCategory,
)


def _alert(layer, session_id="s1", call_id="c1", ts=1.0):
    detail = {
        Layer.HONEYTOOL: HoneytoolDetail(decoy_name="export_all_user_data"),
        Layer.HONEYTOKEN: HoneytokenDetail(
            token_id="ht_api_key", category=TokenCategory.API_KEY, location="memo"
        ),
        Layer.PARAM_VALIDATOR: ParamDetail(tool="send_money", param="iban", value="x"),
    }[layer]
    return Alert(
        layer=layer, detail=detail, session_id=session_id, call_id=call_id, timestamp=ts
    )


def _verdict(session_id, call_id, layers=(), ts=1.0, latency=0.2):
    return InspectionVerdict(
        call_id=call_id,
        session_id=session_id,
        alerts=tuple(_alert(l, session_id, call_id, ts) for l in layers),
        unknown_tool=False,
        latency_ms=latency,
    )


def test_counts_and_recount_agree():
    log = AlertLog()
    log.append(_verdict("s1", "c1", (Layer.HONEYTOOL, Layer.HONEYTOKEN)))
    log.append(_verdict("s1", "c2", (Layer.PARAM_VALIDATOR,)))
    log.append(_verdict("s2", "c3", ()))
    assert log.total_alerts == 3
    assert log.counts == log.recount()
    assert log.counts[Layer.HONEYTOOL] == 1
    assert len(log.verdicts) == 3
    assert len(log.alerts) == 3


def test_session_queries():
    log = AlertLog()
    log.append(_verdict("s1", "c1", (Layer.HONEYTOKEN,)))
    log.append(_verdict("s1", "c2", (Layer.HONEYTOOL,)))
    assert log.sessions() == ("s1",)
    assert log.session_alert_count("s1") == 2
    # First alerting verdict wins the attribution, not the loudest.
    assert log.first_layers("s1") == (Layer.HONEYTOKEN,)
    with pytest.raises(UnknownSession):
        log.session_verdicts("ghost")


def test_first_layers_clean_session():
    log = AlertLog()
    log.append(_verdict("s1", "c1", ()))
    assert log.first_layers("s1") == ()


def test_layer_attribution_shape():
    log = AlertLog()
    for i in range(3):
        log.append(_verdict(f"a{i}", f"c{i}", (Layer.HONEYTOOL,)))
    log.append(_verdict("b0", "d0", (Layer.PARAM_VALIDATOR, Layer.HONEYTOKEN)))
    out = log.layer_attribution()
    assert out["alert_counts"] == {
        "honeytool": 3,
        "honeytoken": 1,
        "param_validator": 1,
    }
    assert out["first_layer_sessions"]["honeytool"] == 3
    # One session whose first alerting call fired two layers at once.
    assert out["first_layer_sessions"]["param_validator"] == 1
    assert out["first_layer_sessions"]["honeytoken"] == 1


def test_export_field_order_and_detail_rendering():
    log = AlertLog()
    log.append(
        _verdict("s9", "c9", (Layer.HONEYTOOL, Layer.HONEYTOKEN, Layer.PARAM_VALIDATOR))
    )
    lines = list(log.export_lines())
    assert len(lines) == 3
    for line in lines:
        row = json.loads(line)
        assert list(row) == ["timestamp", "session_id", "call_id", "layer", "detail"]
    details = [json.loads(l)["detail"] for l in lines]
    assert details[0] == "decoy=export_all_user_data"
    assert details[1] == "token=ht_api_key at memo"
    assert details[2] == "send_money.iban='x' not approved"


def test_write_export(tmp_path):
    log = AlertLog()
    log.append(_verdict("s1", "c1", (Layer.HONEYTOOL,)))
    path = tmp_path / "alerts.jsonl"
    assert log.write_export(path) == 1
    assert path.read_text(encoding="utf-8").count("\n") == 1


def test_latencies():
    log = AlertLog()
    log.append(_verdict("s1", "c1", (), latency=0.5))
    log.append(_verdict("s1", "c2", (), latency=1.5))
    assert log.latencies_ms() == (0.5, 1.5)


def test_concurrent_appends_lose_nothing():
    log = AlertLog()

    def worker(tag):
        for i in range(200):
            log.append(_verdict(f"s{tag}", f"{tag}:{i}", (Layer.HONEYTOOL,)))

    threads = [threading.Thread(target=worker, args=(t,)) for t in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert log.total_alerts == 1600
    assert log.counts == log.recount()
    assert len(log.sessions()) == 8
    # Per-session arrival order survives interleaving.
    ids = [v.call_id for v in log.session_verdicts("s3")]
    assert ids == [f"3:{i}" for i in range(200)]
