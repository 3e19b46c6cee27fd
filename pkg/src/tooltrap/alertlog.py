"""Append-only alert log with per-layer accounting and line export.

One log instance serves a whole gateway process; many sessions append
concurrently, so every mutation happens under a lock and each session's
verdicts keep their arrival order.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Iterator

from .errors import UnknownSession
from .types import Alert, InspectionVerdict, Layer


class AlertLog:
    """Collects inspection verdicts; never drops or rewrites an entry."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._verdicts: list[InspectionVerdict] = []
        self._by_session: dict[str, list[InspectionVerdict]] = {}
        self._counts: dict[Layer, int] = {layer: 0 for layer in Layer}

    def append(self, verdict: InspectionVerdict) -> None:
        with self._lock:
            self._verdicts.append(verdict)
            self._by_session.setdefault(verdict.session_id, []).append(verdict)
            for alert in verdict.alerts:
                self._counts[alert.layer] += 1

    # --- queries ----------------------------------------------------------

    @property
    def verdicts(self) -> tuple[InspectionVerdict, ...]:
        with self._lock:
            return tuple(self._verdicts)

    @property
    def alerts(self) -> tuple[Alert, ...]:
        return tuple(a for v in self.verdicts for a in v.alerts)

    @property
    def counts(self) -> dict[Layer, int]:
        with self._lock:
            return dict(self._counts)

    def recount(self) -> dict[Layer, int]:
        """Recompute per-layer totals from the raw entries."""
        fresh = {layer: 0 for layer in Layer}
        for alert in self.alerts:
            fresh[alert.layer] += 1
        return fresh

    @property
    def total_alerts(self) -> int:
        return sum(self.counts.values())

    def sessions(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(self._by_session)

    def session_verdicts(self, session_id: str) -> tuple[InspectionVerdict, ...]:
        with self._lock:
            if session_id not in self._by_session:
                raise UnknownSession(f"no verdicts for session {session_id!r}")
            return tuple(self._by_session[session_id])

    def session_alert_count(self, session_id: str) -> int:
        return sum(len(v.alerts) for v in self.session_verdicts(session_id))

    def first_layers(self, session_id: str) -> tuple[Layer, ...]:
        """Layers of the session's earliest alerting verdict (empty if clean)."""
        for verdict in self.session_verdicts(session_id):
            if verdict.alerts:
                return verdict.layers_fired
        return ()

    def layer_attribution(self) -> dict[str, dict[str, int]]:
        """Per-layer alert totals plus which layer fired first per session."""
        totals = {layer.value: n for layer, n in self.counts.items()}
        first: dict[str, int] = {layer.value: 0 for layer in Layer}
        for sid in self.sessions():
            for layer in self.first_layers(sid):
                first[layer.value] += 1
        return {"alert_counts": totals, "first_layer_sessions": first}

    def latencies_ms(self) -> tuple[float, ...]:
        return tuple(v.latency_ms for v in self.verdicts)

    # --- export -------------------------------------------------------------

    def export_lines(self) -> Iterator[str]:
        """One JSON line per alert: timestamp, session, call, layer, detail."""
        for alert in self.alerts:
            yield json.dumps(alert.to_dict(), separators=(",", ":"))

    def write_export(self, path: str | Path) -> int:
        """Write the export; returns the number of lines written."""
        n = 0
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.export_lines():
                fh.write(line + "\n")
                n += 1
        return n
