"""Exception hierarchy for the tooltrap package.

Every error raised by the package derives from ToolTrapError so callers can
catch broadly at process boundaries (the CLI maps them to exit codes).
"""

from __future__ import annotations


class ToolTrapError(Exception):
    """Base class for all package errors."""


class ConfigError(ToolTrapError):
    """A configuration document is missing, unreadable, or invalid."""


# --- registry -------------------------------------------------------------

class DuplicateToolName(ConfigError):
    """Two tools (real or decoy) share a name."""


class DecoyWithSideEffect(ConfigError):
    """A decoy was declared with a non-error execution stub."""


# --- honeytoken vault -----------------------------------------------------

class TokenCollision(ConfigError):
    """One planted token value is a substring of another."""


class TokenTooShort(ConfigError):
    """A planted token value is below the minimum length."""


# --- allowlist ------------------------------------------------------------

class UnknownTool(ConfigError):
    """An allowlist rule references a tool absent from the registry."""


class UnknownParam(ConfigError):
    """An allowlist rule references a parameter the tool does not declare."""


class EmptyRuleSet(ConfigError):
    """An allowlist rule has no entries; it could never approve anything."""


# --- inspection / logging -------------------------------------------------

class MalformedCall(ToolTrapError):
    """A tool call's arguments are not a JSON-style mapping."""


class UnknownSession(ToolTrapError):
    """An operation referenced a session id the log has never seen."""


# --- gateway --------------------------------------------------------------

class BackendUnavailable(ToolTrapError):
    """The upstream tool backend cannot be reached or refused the request."""


class ProtocolViolation(ToolTrapError):
    """A frame was not valid line-delimited JSON or had an unknown type."""


class MalformedTrace(ToolTrapError):
    """A trace file line could not be parsed into a session of calls."""


# --- simulation harness ---------------------------------------------------

class SchemaError(ToolTrapError):
    """A corpus or fixture record is structurally invalid."""


class TaxonomyMismatch(ToolTrapError):
    """Corpus counts per set/language disagree with the declared header."""


class InjectionSlotMissing(ToolTrapError):
    """The attack targets an injection slot the chosen task never reads."""


class PolicyStuck(ToolTrapError):
    """A scripted policy could not produce its next step."""


# --- classifier -----------------------------------------------------------

class EmptyData(ToolTrapError):
    """A training or evaluation set has no rows."""


class SingleClassData(ToolTrapError):
    """Training data contains only one label class."""


class LeakyPartition(ToolTrapError):
    """Train and test partitions share at least one session."""


# --- statistics -----------------------------------------------------------

class ZeroSample(ToolTrapError):
    """An interval or rate was requested over zero trials."""


class DomainError(ToolTrapError):
    """A statistical input lies outside its domain (e.g. p not in [0, 1])."""


class UndefinedConditional(ToolTrapError):
    """A conditional rate's denominator is zero."""


class EmptyInput(ToolTrapError):
    """summarize() received no records."""
