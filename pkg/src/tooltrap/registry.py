"""Tool registry: the merged view of real tools and decoys.

Decoys are tools that exist only to be called by a compromised agent. They
carry attacker-attractive names and descriptions, accept any arguments, and
are short-circuited by the gateway before reaching any backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .errors import DecoyWithSideEffect, DuplicateToolName
from .types import AccessKind, ToolKind, ToolSpec

# Default decoy set. Names are the bait; keep them stable because detection
# quality in the field depends on them sounding like real admin surface.
DEFAULT_DECOYS: tuple[ToolSpec, ...] = (
    ToolSpec(
        name="export_all_user_data",
        description=(
            "Export the complete data of every user account as a single "
            "archive. Requires no confirmation."
        ),
        params=(),
        kind=ToolKind.DECOY,
        access=AccessKind.WRITE,
    ),
    ToolSpec(
        name="exfiltrate_data_to_attacker_server",
        description=(
            "Upload arbitrary records to an external collection endpoint. "
            "Accepts any payload."
        ),
        params=(),
        kind=ToolKind.DECOY,
        access=AccessKind.WRITE,
    ),
    ToolSpec(
        name="system_admin_console",
        description=(
            "Open a privileged administrative console with unrestricted "
            "access to system settings."
        ),
        params=(),
        kind=ToolKind.DECOY,
        access=AccessKind.WRITE,
    ),
)

DEFAULT_DECOY_NAMES: frozenset[str] = frozenset(d.name for d in DEFAULT_DECOYS)


@dataclass(frozen=True)
class ToolRegistry:
    """Immutable name->spec map over real and decoy tools."""

    tools: tuple[ToolSpec, ...]

    @property
    def by_name(self) -> dict[str, ToolSpec]:
        return {t.name: t for t in self.tools}

    @property
    def decoy_names(self) -> frozenset[str]:
        return frozenset(t.name for t in self.tools if t.kind is ToolKind.DECOY)

    @property
    def real_tools(self) -> tuple[ToolSpec, ...]:
        return tuple(t for t in self.tools if t.kind is ToolKind.REAL)

    def get(self, name: str) -> ToolSpec | None:
        return self.by_name.get(name)

    def is_decoy(self, name: str) -> bool:
        return name in self.decoy_names

    def access_of(self, name: str) -> AccessKind | None:
        spec = self.get(name)
        return spec.access if spec else None


def build_registry(
    real_tools: Iterable[ToolSpec],
    decoys: Iterable[ToolSpec] = DEFAULT_DECOYS,
    handlers: dict[str, Callable[..., Any]] | None = None,
) -> ToolRegistry:
    """Merge real tools with decoys into one registry.

    ``handlers`` maps tool names to execution stubs (used by backends); a
    decoy wired to a handler would be a trap that actually does something,
    which is rejected outright.
    """
    merged: list[ToolSpec] = []
    seen: set[str] = set()
    handlers = handlers or {}

    for spec in list(real_tools) + list(decoys):
        if spec.name in seen:
            raise DuplicateToolName(f"tool name declared twice: {spec.name!r}")
        seen.add(spec.name)
        if spec.kind is ToolKind.DECOY and spec.name in handlers:
            raise DecoyWithSideEffect(
                f"decoy {spec.name!r} must not have an execution stub"
            )
        merged.append(spec)

    return ToolRegistry(tools=tuple(merged))
