"""Gateway sessions and the TCP server around them.

A session sits between one client connection and the backend: list_tools
responses get the decoys merged in, every call_tool is inspected before
forwarding, and decoy calls are answered with a generic permission-denied
error without ever touching the backend. Detection never blocks a real
call: alert or not, real tools are forwarded unchanged.
"""

from __future__ import annotations

import itertools
import logging
import socket
import socketserver
import threading
import time
from typing import Any, Callable, Protocol

from ..alertlog import AlertLog
from ..config import TrapConfig
from ..engine import inspect
from ..errors import BackendUnavailable, ProtocolViolation
from ..types import ToolCall, ToolKind
from .protocol import decode_frame, encode_frame, error_frame, result_frame

logger = logging.getLogger(__name__)

_session_counter = itertools.count(1)


class Backend(Protocol):
    """Anything that can list tools and execute real calls."""

    def list_tools(self) -> list[dict[str, Any]]: ...

    def call_tool(self, name: str, args: dict[str, Any]) -> dict[str, Any]: ...


class GatewaySession:
    """State machine for one client session."""

    def __init__(
        self,
        config: TrapConfig,
        backend: Backend,
        alert_log: AlertLog,
        session_id: str | None = None,
        clock: Callable[[], float] | None = None,
    ) -> None:
        self.config = config
        self.backend = backend
        self.alert_log = alert_log
        self.session_id = session_id or f"s{next(_session_counter):06d}"
        self.clock = clock or time.time
        self.closed = False
        self._seq = 0
        self._last_ts = float("-inf")

    def _next_call_id(self) -> str:
        # Strictly increasing per session; never reused.
        self._seq += 1
        return f"{self.session_id}:{self._seq}"

    def handle_line(self, line: str) -> dict[str, Any] | None:
        """Decode one wire line and handle it; protocol errors become
        error frames rather than silent drops."""
        try:
            frame = decode_frame(line)
        except ProtocolViolation as exc:
            self.closed = True
            return error_frame(None, "protocol_violation", str(exc))
        return self.handle_frame(frame)

    def handle_frame(self, frame: dict[str, Any]) -> dict[str, Any] | None:
        if self.closed:
            return error_frame(
                frame.get("id"), "protocol_violation", "session is closed"
            )
        ftype = frame["type"]
        if ftype == "close":
            self.closed = True
            return None
        if ftype == "list_tools":
            return self._handle_list_tools(frame)
        if ftype == "call_tool":
            return self._handle_call_tool(frame)
        # result/error are response types; receiving one as a request is a
        # violation worth reporting.
        self.closed = True
        return error_frame(
            frame.get("id"),
            "protocol_violation",
            f"frame type {ftype!r} is not a request",
        )

    def _handle_list_tools(self, frame: dict[str, Any]) -> dict[str, Any]:
        try:
            tools = list(self.backend.list_tools())
        except Exception as exc:
            return error_frame(frame.get("id"), "backend_unavailable", str(exc))
        decoys = [
            t.to_dict()
            for t in self.config.registry.tools
            if t.kind is ToolKind.DECOY
        ]
        return result_frame(frame.get("id"), tools=tools + decoys)

    def _handle_call_tool(self, frame: dict[str, Any]) -> dict[str, Any]:
        ts = float(self.clock())
        if ts < self._last_ts:
            ts = self._last_ts  # keep per-session timestamps non-decreasing
        self._last_ts = ts

        call = ToolCall(
            call_id=self._next_call_id(),
            session_id=self.session_id,
            tool_name=frame["name"],
            args=frame.get("args", {}),
            timestamp=ts,
        )
        verdict = inspect(
            call, self.config.registry, self.config.vault, self.config.policy
        )
        self.alert_log.append(verdict)

        if self.config.registry.is_decoy(call.tool_name):
            # Short-circuit: generic denial, backend never sees the call,
            # and nothing in the reply admits the tool was a trap.
            return error_frame(frame.get("id"), "permission_denied", "permission denied")

        try:
            result = self.backend.call_tool(call.tool_name, call.args)
        except BackendUnavailable as exc:
            return error_frame(frame.get("id"), "backend_unavailable", str(exc))
        except Exception as exc:
            return error_frame(frame.get("id"), "tool_error", str(exc))
        return result_frame(frame.get("id"), result=result)


def direct_session_frames(
    backend: Backend, lines: list[str]
) -> list[str]:
    """Answer request lines straight from the backend, no traps involved.

    Used to establish the transparency baseline: an alert-free session
    through the gateway must produce byte-identical call_tool exchanges.
    """
    out: list[str] = []
    for line in lines:
        frame = decode_frame(line)
        ftype = frame["type"]
        if ftype == "close":
            break
        if ftype == "list_tools":
            out.append(
                encode_frame(result_frame(frame.get("id"), tools=list(backend.list_tools())))
            )
        elif ftype == "call_tool":
            try:
                result = backend.call_tool(frame["name"], frame.get("args", {}))
            except Exception as exc:
                out.append(encode_frame(error_frame(frame.get("id"), "tool_error", str(exc))))
                continue
            out.append(encode_frame(result_frame(frame.get("id"), result=result)))
        else:
            out.append(
                encode_frame(
                    error_frame(frame.get("id"), "protocol_violation", "not a request")
                )
            )
    return out


# --- TCP plumbing -------------------------------------------------------------


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:  # one connection == one session
        server: GatewayServer = self.server  # type: ignore[assignment]
        session = GatewaySession(
            config=server.trap_config,
            backend=server.backend,
            alert_log=server.alert_log,
        )
        logger.info("session %s opened", session.session_id)
        for raw in self.rfile:
            response = session.handle_line(raw.decode("utf-8"))
            if response is not None:
                self.wfile.write((encode_frame(response) + "\n").encode("utf-8"))
                self.wfile.flush()
            if session.closed:
                break
        logger.info("session %s closed", session.session_id)


class GatewayServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        trap_config: TrapConfig,
        backend: Backend,
        alert_log: AlertLog | None = None,
    ) -> None:
        super().__init__(address, _Handler)
        self.trap_config = trap_config
        self.backend = backend
        self.alert_log = alert_log if alert_log is not None else AlertLog()


def serve(
    listen: tuple[str, int],
    backend: Backend,
    config: TrapConfig,
    alert_log: AlertLog | None = None,
    block: bool = True,
) -> GatewayServer:
    """Start the gateway. With block=False the server runs on a thread and
    is returned for the caller to shut down."""
    server = GatewayServer(listen, config, backend, alert_log)
    if block:
        try:
            server.serve_forever()
        finally:
            server.server_close()
        return server
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


class FrameClient:
    """Client for a frame-protocol server; also usable as a Backend."""

    def __init__(self, host: str, port: int, timeout: float = 10.0) -> None:
        try:
            self._sock = socket.create_connection((host, port), timeout=timeout)
        except OSError as exc:
            raise BackendUnavailable(f"cannot connect to {host}:{port}: {exc}") from exc
        self._file = self._sock.makefile("rwb")
        self._next_id = itertools.count(1)

    def request(self, frame: dict[str, Any]) -> dict[str, Any]:
        line = encode_frame(frame) + "\n"
        try:
            self._file.write(line.encode("utf-8"))
            self._file.flush()
            raw = self._file.readline()
        except OSError as exc:
            raise BackendUnavailable(f"connection lost: {exc}") from exc
        if not raw:
            raise BackendUnavailable("server closed the connection")
        return decode_frame(raw.decode("utf-8"))

    def list_tools(self) -> list[dict[str, Any]]:
        reply = self.request({"type": "list_tools", "id": next(self._next_id)})
        if reply["type"] == "error":
            raise BackendUnavailable(reply.get("message", "backend error"))
        return reply["tools"]

    def call_tool(self, name: str, args: dict[str, Any]) -> dict[str, Any]:
        reply = self.request(
            {"type": "call_tool", "id": next(self._next_id), "name": name, "args": args}
        )
        if reply["type"] == "error":
            raise BackendUnavailable(reply.get("message", "backend error"))
        return reply["result"]

    def close(self) -> None:
        try:
            self._file.write((encode_frame({"type": "close"}) + "\n").encode("utf-8"))
            self._file.flush()
        except OSError:
            pass
        self._sock.close()
