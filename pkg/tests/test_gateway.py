"""Gateway: frame protocol, session state machine, TCP path, replay."""

import json

import pytest

from tooltrap.alertlog import AlertLog
from tooltrap.config import load_fixture_config
from tooltrap.errors import (
    BackendUnavailable,
    MalformedTrace,
    ProtocolViolation,
)
from tooltrap.gateway.protocol import decode_frame, encode_frame, error_frame
from tooltrap.gateway.replay import read_traces, replay, write_traces
from tooltrap.gateway.server import (
    FrameClient,
    GatewaySession,
    direct_session_frames,
    serve,
)
from tooltrap.sim.environments import build_environment
from tooltrap.types import Layer, ToolCall, Trace

CONFIG = load_fixture_config("banking")


class RecordingBackend:
    """Echo backend that remembers every call it actually received."""

    def __init__(self):
        self.calls = []

    def list_tools(self):
        return [t.to_dict() for t in CONFIG.registry.real_tools]

    def call_tool(self, name, args):
        self.calls.append((name, args))
        return {"ok": True, "tool": name}


def _session(backend=None, log=None):
    return GatewaySession(
        config=CONFIG,
        backend=backend or RecordingBackend(),
        alert_log=log or AlertLog(),
        session_id="t1",
        clock=lambda: 0.0,
    )


# --- protocol ----------------------------------------------------------------


def test_decode_rejects_garbage():
    for line in ["", "   ", "{not json", "[1,2]", '"str"', '{"type":"warp"}']:
        with pytest.raises(ProtocolViolation):
            decode_frame(line)
    with pytest.raises(ProtocolViolation):
        decode_frame('{"type":"call_tool","name":7}')
    with pytest.raises(ProtocolViolation):
        decode_frame('{"type":"call_tool","name":"t","args":[1]}')


def test_encode_is_canonical():
    assert encode_frame({"b": 1, "a": 2}) == '{"a":2,"b":1}'


# --- session state machine ----------------------------------------------------


def test_list_tools_merges_decoys():
    s = _session()
    reply = s.handle_frame({"type": "list_tools", "id": 1})
    names = [t["name"] for t in reply["tools"]]
    assert len(names) == 13
    assert "export_all_user_data" in names
    assert "exfiltrate_data_to_attacker_server" in names
    assert "system_admin_console" in names
    # Decoys are listed after the real tools, indistinguishable in shape.
    assert set(reply["tools"][0]) == set(reply["tools"][-1])


def test_decoy_call_short_circuits():
    backend = RecordingBackend()
    log = AlertLog()
    s = _session(backend, log)
    reply = s.handle_frame(
        {"type": "call_tool", "id": 5, "name": "export_all_user_data", "args": {}}
    )
    assert reply == error_frame(5, "permission_denied", "permission denied")
    assert backend.calls == []  # the backend never saw it
    assert log.counts[Layer.HONEYTOOL] == 1


def test_real_call_forwarded_even_when_alerting():
    backend = RecordingBackend()
    log = AlertLog()
    s = _session(backend, log)
    token = CONFIG.vault.tokens[0].value
    reply = s.handle_frame(
        {
            "type": "call_tool",
            "id": 2,
            "name": "read_document",
            "args": {"doc_id": token},
        }
    )
    assert reply["type"] == "result"
    assert backend.calls == [("read_document", {"doc_id": token})]
    assert log.counts[Layer.HONEYTOKEN] >= 1


def test_closed_session_rejects_frames():
    s = _session()
    assert s.handle_frame({"type": "close"}) is None
    reply = s.handle_frame({"type": "list_tools", "id": 9})
    assert reply["type"] == "error"
    assert reply["code"] == "protocol_violation"


def test_response_type_as_request_closes_session():
    s = _session()
    reply = s.handle_frame({"type": "result", "id": 1})
    assert reply["code"] == "protocol_violation"
    assert s.closed


def test_handle_line_reports_bad_wire_data():
    s = _session()
    reply = s.handle_line("{broken")
    assert reply["code"] == "protocol_violation"
    assert s.closed


def test_timestamps_never_decrease():
    ticks = iter([5.0, 3.0, 9.0])
    log = AlertLog()
    s = GatewaySession(
        config=CONFIG,
        backend=RecordingBackend(),
        alert_log=log,
        session_id="tclock",
        clock=lambda: next(ticks),
    )
    for i in range(3):
        s.handle_frame(
            {"type": "call_tool", "id": i, "name": "export_all_user_data", "args": {}}
        )
    stamps = [a.timestamp for a in log.alerts]
    # Second tick went backwards; the session clamps it to the first.
    assert stamps == [5.0, 5.0, 9.0]
    assert [v.call_id for v in log.verdicts] == ["tclock:1", "tclock:2", "tclock:3"]


# --- transparency -------------------------------------------------------------


def test_alert_free_session_is_byte_identical_to_direct():
    lines = [
        encode_frame(
            {"type": "call_tool", "id": i, "name": "get_balance", "args": {}}
        )
        for i in range(1, 6)
    ] + [encode_frame({"type": "close"})]

    direct = direct_session_frames(RecordingBackend(), lines)

    s = _session()
    via_gateway = []
    for line in lines:
        reply = s.handle_line(line)
        if reply is not None:
            via_gateway.append(encode_frame(reply))

    assert via_gateway == direct
    assert s.alert_log.total_alerts == 0


# --- TCP ----------------------------------------------------------------------


def test_tcp_round_trip():
    backend = build_environment("banking")
    log = AlertLog()
    server = serve(("127.0.0.1", 0), backend, CONFIG, alert_log=log, block=False)
    try:
        host, port = server.server_address
        client = FrameClient(host, port)
        tools = client.list_tools()
        assert len(tools) == 13
        result = client.call_tool("get_balance", {"account": "checking"})
        assert result
        with pytest.raises(BackendUnavailable):
            client.call_tool("export_all_user_data", {})
        client.close()
    finally:
        server.shutdown()
        server.server_close()
    assert log.counts[Layer.HONEYTOOL] == 1


def test_frame_client_requires_live_server():
    with pytest.raises(BackendUnavailable):
        FrameClient("127.0.0.1", 1, timeout=0.2)


# --- replay -------------------------------------------------------------------


def _trace(calls):
    return Trace(session_id="r1", suite="banking", calls=tuple(calls))


def test_replay_round_trip(tmp_path):
    token = CONFIG.vault.tokens[0].value
    calls = [
        ToolCall("r1:1", "r1", "get_balance", {}, 0.0),
        ToolCall("r1:2", "r1", "read_document", {"doc_id": token}, 0.1),
    ]
    path = tmp_path / "t.jsonl"
    assert write_traces([_trace(calls)], path) == 1

    log1 = replay(path, CONFIG)
    log2 = replay(path, CONFIG)
    assert log1.counts == log2.counts
    assert log1.counts[Layer.HONEYTOKEN] == 1
    assert [v.call_id for v in log1.verdicts] == ["r1:1", "r1:2"]


def test_replay_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    log = replay(path, CONFIG)
    assert log.total_alerts == 0
    assert log.verdicts == ()


def test_read_traces_rejects_bad_lines(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text("{oops\n", encoding="utf-8")
    with pytest.raises(MalformedTrace):
        read_traces(path)

    out_of_order = _trace(
        [
            ToolCall("r1:1", "r1", "get_balance", {}, 5.0),
            ToolCall("r1:2", "r1", "get_balance", {}, 1.0),
        ]
    )
    path2 = tmp_path / "order.jsonl"
    path2.write_text(
        json.dumps(out_of_order.to_dict()) + "\n", encoding="utf-8"
    )
    with pytest.raises(MalformedTrace):
        read_traces(path2)


def test_bundled_compromised_trace_alerts():
    from tooltrap.config import fixture_text

    path_text = fixture_text("traces/compromised_banking.jsonl")
    raw = json.loads(path_text.splitlines()[0])
    trace = Trace.from_dict(raw)
    log = AlertLog()
    from tooltrap.engine import inspect

    for call in trace.calls:
        log.append(inspect(call, CONFIG.registry, CONFIG.vault, CONFIG.policy))
    assert log.total_alerts >= 1
    assert log.counts[Layer.HONEYTOOL] >= 1
