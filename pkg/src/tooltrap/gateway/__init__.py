"""Tool-call gateway: interception, decoy merging, serving, replay."""

from .protocol import (
    FRAME_TYPES,
    decode_frame,
    encode_frame,
    error_frame,
    result_frame,
)
from .server import GatewaySession, direct_session_frames, serve, FrameClient
from .replay import replay, read_traces, write_traces

__all__ = [
    "FRAME_TYPES",
    "decode_frame",
    "encode_frame",
    "error_frame",
    "result_frame",
    "GatewaySession",
    "direct_session_frames",
    "serve",
    "FrameClient",
    "replay",
    "read_traces",
    "write_traces",
]
