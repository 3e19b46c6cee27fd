"""tooltrap: layered tripwires for tool-using agents.

Decoy tools, planted credentials, and per-parameter allowlists sit behind a
transparent gateway that watches every tool call without ever blocking one.
The package also ships a simulated agent/attack harness for measuring the
traps and a behavioral classifier bootstrapped from their verdicts.
"""

from .alertlog import AlertLog
from .canonical import canonicalize, contains_formatting, strip_zero_width
from .config import TrapConfig, load_config, load_fixture_config, parse_config
from .engine import inspect
from .errors import ToolTrapError
from .registry import DEFAULT_DECOYS, ToolRegistry, build_registry
from .types import (
    AccessKind,
    Alert,
    Honeytoken,
    InspectionVerdict,
    Layer,
    ParamKind,
    TokenCategory,
    ToolCall,
    ToolKind,
    ToolSpec,
    Trace,
    TrialRecord,
)
from .vault import HoneytokenVault, plant_tokens, vault_from_config

__version__ = "0.1.0"

__all__ = [
    "AccessKind",
    "Alert",
    "AlertLog",
    "DEFAULT_DECOYS",
    "Honeytoken",
    "HoneytokenVault",
    "InspectionVerdict",
    "Layer",
    "ParamKind",
    "TokenCategory",
    "ToolCall",
    "ToolKind",
    "ToolRegistry",
    "ToolSpec",
    "ToolTrapError",
    "Trace",
    "TrapConfig",
    "TrialRecord",
    "build_registry",
    "canonicalize",
    "contains_formatting",
    "inspect",
    "load_config",
    "load_fixture_config",
    "parse_config",
    "plant_tokens",
    "strip_zero_width",
    "vault_from_config",
    "__version__",
]
