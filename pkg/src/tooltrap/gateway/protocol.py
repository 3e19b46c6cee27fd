"""Line-delimited JSON frame protocol.

One frame per line, no length prefixes. Frame types: list_tools, call_tool,
result, error, close. Requests carry a client-chosen ``id`` echoed back on
the matching response, so a session transcript is self-describing.
"""

from __future__ import annotations

import json
from typing import Any

from ..errors import ProtocolViolation

FRAME_TYPES: frozenset[str] = frozenset(
    {"list_tools", "call_tool", "result", "error", "close"}
)


def encode_frame(frame: dict[str, Any]) -> str:
    """Serialize one frame to its wire line (no trailing newline)."""
    return json.dumps(frame, separators=(",", ":"), sort_keys=True)


def decode_frame(line: str) -> dict[str, Any]:
    """Parse and validate one wire line."""
    line = line.strip()
    if not line:
        raise ProtocolViolation("empty frame")
    try:
        frame = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolViolation(f"frame is not valid JSON: {exc}") from exc
    if not isinstance(frame, dict):
        raise ProtocolViolation("frame must be a JSON object")
    ftype = frame.get("type")
    if ftype not in FRAME_TYPES:
        raise ProtocolViolation(f"unknown frame type: {ftype!r}")
    if ftype == "call_tool":
        if not isinstance(frame.get("name"), str):
            raise ProtocolViolation("call_tool frame needs a string 'name'")
        if "args" in frame and not isinstance(frame["args"], dict):
            raise ProtocolViolation("call_tool 'args' must be a mapping")
    return frame


def result_frame(req_id: Any, **payload: Any) -> dict[str, Any]:
    return {"type": "result", "id": req_id, **payload}


def error_frame(req_id: Any, code: str, message: str) -> dict[str, Any]:
    return {"type": "error", "id": req_id, "code": code, "message": message}
