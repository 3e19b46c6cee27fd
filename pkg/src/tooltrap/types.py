"""Core domain types: tools, calls, tokens, alerts, traces.

Everything here is a frozen dataclass or an enum; instances never change
after construction. Collections are stored as tuples for the same reason.
Argument payloads (`args`) are plain JSON-style mappings owned by their call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import MalformedCall


class ToolKind(str, Enum):
    REAL = "real"
    DECOY = "decoy"


class AccessKind(str, Enum):
    READ = "read"
    WRITE = "write"


class ParamKind(str, Enum):
    STRING = "string"
    NUMBER = "number"
    BOOLEAN = "boolean"
    LIST = "list"
    OBJECT = "object"


class TokenCategory(str, Enum):
    API_KEY = "api_key"
    ADMIN_PASSWORD = "admin_password"
    DB_CONNECTION_STRING = "db_connection_string"
    INTERNAL_URL = "internal_url"
    SSH_KEY_PATH = "ssh_key_path"


class Layer(str, Enum):
    """Which trap layer produced an alert."""

    HONEYTOOL = "honeytool"
    HONEYTOKEN = "honeytoken"
    PARAM_VALIDATOR = "param_validator"


@dataclass(frozen=True)
class ToolSpec:
    """Declared shape of one tool exposed to the agent."""

    name: str
    description: str
    params: tuple[tuple[str, ParamKind], ...] = ()
    kind: ToolKind = ToolKind.REAL
    access: AccessKind = AccessKind.READ

    @property
    def param_names(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.params)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "params": [[n, k.value] for n, k in self.params],
            "kind": self.kind.value,
            "access": self.access.value,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> ToolSpec:
        return cls(
            name=raw["name"],
            description=raw.get("description", ""),
            params=tuple((n, ParamKind(k)) for n, k in raw.get("params", [])),
            kind=ToolKind(raw.get("kind", "real")),
            access=AccessKind(raw.get("access", "read")),
        )


@dataclass(frozen=True)
class ToolCall:
    """One tool invocation observed at the gateway."""

    call_id: str
    session_id: str
    tool_name: str
    args: dict[str, Any] = field(default_factory=dict)
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.args, dict):
            raise MalformedCall(
                f"call {self.call_id}: args must be a mapping, got {type(self.args).__name__}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "call_id": self.call_id,
            "session_id": self.session_id,
            "tool_name": self.tool_name,
            "args": self.args,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> ToolCall:
        return cls(
            call_id=str(raw["call_id"]),
            session_id=str(raw["session_id"]),
            tool_name=str(raw["tool_name"]),
            args=raw.get("args", {}),
            timestamp=float(raw.get("timestamp", 0.0)),
        )


@dataclass(frozen=True)
class Honeytoken:
    """A planted fake credential. Any outbound appearance is hostile."""

    token_id: str
    category: TokenCategory
    value: str
    planted_at: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "token_id": self.token_id,
            "category": self.category.value,
            "value": self.value,
            "planted_at": self.planted_at,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> Honeytoken:
        return cls(
            token_id=raw["token_id"],
            category=TokenCategory(raw["category"]),
            value=raw["value"],
            planted_at=raw.get("planted_at", ""),
        )


# --- alerts -----------------------------------------------------------------


@dataclass(frozen=True)
class HoneytoolDetail:
    decoy_name: str

    def render(self) -> str:
        return f"decoy={self.decoy_name}"


@dataclass(frozen=True)
class HoneytokenDetail:
    token_id: str
    category: TokenCategory
    location: str  # dotted arg path where the token value surfaced

    def render(self) -> str:
        return f"token={self.token_id} at {self.location}"


@dataclass(frozen=True)
class ParamDetail:
    tool: str
    param: str
    value: str

    def render(self) -> str:
        return f"{self.tool}.{self.param}={self.value!r} not approved"


AlertDetail = HoneytoolDetail | HoneytokenDetail | ParamDetail

_DETAIL_FOR_LAYER: dict[Layer, type] = {
    Layer.HONEYTOOL: HoneytoolDetail,
    Layer.HONEYTOKEN: HoneytokenDetail,
    Layer.PARAM_VALIDATOR: ParamDetail,
}


@dataclass(frozen=True)
class Alert:
    """One trap firing. The detail variant always matches the layer."""

    layer: Layer
    detail: AlertDetail
    session_id: str
    call_id: str
    timestamp: float

    def __post_init__(self) -> None:
        expected = _DETAIL_FOR_LAYER[self.layer]
        if not isinstance(self.detail, expected):
            raise ValueError(
                f"alert detail {type(self.detail).__name__} does not match layer {self.layer.value}"
            )

    def to_dict(self) -> dict[str, Any]:
        # Field order here is the documented export order; keep it stable.
        return {
            "timestamp": self.timestamp,
            "session_id": self.session_id,
            "call_id": self.call_id,
            "layer": self.layer.value,
            "detail": self.detail.render(),
        }


@dataclass(frozen=True)
class InspectionVerdict:
    """Outcome of inspecting a single call.

    Detection is passive: a verdict carries alerts and bookkeeping, never a
    block signal. ``alerts`` empty means the call looked clean.
    """

    call_id: str
    session_id: str
    alerts: tuple[Alert, ...]
    unknown_tool: bool = False
    latency_ms: float = 0.0

    @property
    def layers_fired(self) -> tuple[Layer, ...]:
        # Derived, so "alerts nonempty iff layers_fired nonempty" holds by
        # construction.
        seen: list[Layer] = []
        for alert in self.alerts:
            if alert.layer not in seen:
                seen.append(alert.layer)
        return tuple(seen)

    @property
    def clean(self) -> bool:
        return not self.alerts


# --- trial records ------------------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one simulated session (benign or attacked).

    ``detected`` means at least one trap layer fired during the session;
    ``attack_succeeded`` means the attacker's success predicate held over the
    final environment state. The two are independent: a detected attack may
    still have failed. ``evaded`` is their sharpened conjunction and implies
    success by construction.
    """

    trial_id: str
    suite: str
    task_id: str
    policy: str
    language: str = "en"
    attack_id: str | None = None
    attack_set: str | None = None
    tier: str | None = None
    category: str | None = None
    complied: bool = False
    seed: int = 0
    attack_succeeded: bool = False
    detected: bool = False
    evaded: bool = False
    layers_fired: tuple[str, ...] = ()
    n_calls: int = 0
    n_alerts: int = 0
    error: str = ""

    def __post_init__(self) -> None:
        if self.evaded and not self.attack_succeeded:
            raise ValueError(
                f"trial {self.trial_id}: evaded implies attack_succeeded"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "trial_id": self.trial_id,
            "suite": self.suite,
            "task_id": self.task_id,
            "policy": self.policy,
            "language": self.language,
            "attack_id": self.attack_id,
            "attack_set": self.attack_set,
            "tier": self.tier,
            "category": self.category,
            "complied": self.complied,
            "seed": self.seed,
            "attack_succeeded": self.attack_succeeded,
            "detected": self.detected,
            "evaded": self.evaded,
            "layers_fired": list(self.layers_fired),
            "n_calls": self.n_calls,
            "n_alerts": self.n_alerts,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> TrialRecord:
        return cls(
            trial_id=str(raw["trial_id"]),
            suite=raw.get("suite", ""),
            task_id=raw.get("task_id", ""),
            policy=raw.get("policy", ""),
            language=raw.get("language", "en"),
            attack_id=raw.get("attack_id"),
            attack_set=raw.get("attack_set"),
            tier=raw.get("tier"),
            category=raw.get("category"),
            complied=bool(raw.get("complied", False)),
            seed=int(raw.get("seed", 0)),
            attack_succeeded=bool(raw.get("attack_succeeded", False)),
            detected=bool(raw.get("detected", False)),
            evaded=bool(raw.get("evaded", False)),
            layers_fired=tuple(raw.get("layers_fired", [])),
            n_calls=int(raw.get("n_calls", 0)),
            n_alerts=int(raw.get("n_alerts", 0)),
            error=raw.get("error", ""),
        )


# --- traces -----------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    """A full session of calls plus the task context needed for features."""

    session_id: str
    suite: str = ""
    task_id: str = ""
    expected_tools: tuple[str, ...] = ()
    expected_values: tuple[str, ...] = ()
    calls: tuple[ToolCall, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "suite": self.suite,
            "task_id": self.task_id,
            "expected_tools": list(self.expected_tools),
            "expected_values": list(self.expected_values),
            "calls": [c.to_dict() for c in self.calls],
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> Trace:
        return cls(
            session_id=str(raw["session_id"]),
            suite=raw.get("suite", ""),
            task_id=raw.get("task_id", ""),
            expected_tools=tuple(raw.get("expected_tools", [])),
            expected_values=tuple(raw.get("expected_values", [])),
            calls=tuple(ToolCall.from_dict(c) for c in raw.get("calls", [])),
        )
