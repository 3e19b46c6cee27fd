"""Offline replay: run recorded traces back through inspection.

Trace files are line-delimited JSON, one session object per line. Replay
is pure over (file, config): same inputs, same alert log contents.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from ..alertlog import AlertLog
from ..config import TrapConfig
from ..engine import inspect
from ..errors import MalformedCall, MalformedTrace
from ..types import Trace


def read_traces(path: str | Path) -> list[Trace]:
    """Parse a trace file; any bad line is a MalformedTrace."""
    traces: list[Trace] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                trace = Trace.from_dict(raw)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, MalformedCall) as exc:
                raise MalformedTrace(f"{path}:{lineno}: {exc}") from exc
            last_ts = float("-inf")
            for call in trace.calls:
                if call.timestamp < last_ts:
                    raise MalformedTrace(
                        f"{path}:{lineno}: timestamps decrease within session "
                        f"{trace.session_id!r}"
                    )
                last_ts = call.timestamp
            traces.append(trace)
    return traces


def write_traces(traces: Iterable[Trace], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for trace in traces:
            fh.write(json.dumps(trace.to_dict(), separators=(",", ":")) + "\n")
            n += 1
    return n


def replay(trace_path: str | Path, config: TrapConfig) -> AlertLog:
    """Inspect every recorded call in file order."""
    log = AlertLog()
    for trace in read_traces(trace_path):
        for call in trace.calls:
            verdict = inspect(
                call, config.registry, config.vault, config.policy
            )
            log.append(verdict)
    return log
