"""String canonicalization shared by every detection layer.

Canonical form = all whitespace removed, zero-width characters removed,
lowercased. The function is idempotent and invariant under whitespace or
zero-width insertion, which is exactly what defeats spacing and zero-width
smuggling tricks. Exact mode (compare bytes as-is) lives in the allowlist,
not here.
"""

from __future__ import annotations

import re

# Zero-width and invisible joiner codepoints seen in smuggling payloads.
# str.isspace() is False for all of these, so they need their own set.
ZERO_WIDTH_CHARS: frozenset[str] = frozenset({
    "​",  # zero width space
    "‌",  # zero width non-joiner
    "‍",  # zero width joiner
    "⁠",  # word joiner
    "﻿",  # zero width no-break space / BOM
    "᠎",  # mongolian vowel separator
})

_ZERO_WIDTH_RE = re.compile("[" + "".join(ZERO_WIDTH_CHARS) + "]")
# \s covers unicode whitespace under re.UNICODE (default for str patterns)
_WS_RE = re.compile(r"\s+")


def strip_zero_width(text: str) -> str:
    """Remove every zero-width character, leaving all else untouched."""
    return _ZERO_WIDTH_RE.sub("", text)


def canonicalize(text: str) -> str:
    """Collapse text to its canonical comparison form.

    Removes all whitespace, strips zero-width characters, and lowercases.
    Idempotent: canonicalize(canonicalize(s)) == canonicalize(s).
    """
    return _WS_RE.sub("", strip_zero_width(text)).lower()


def contains_formatting(text: str) -> bool:
    """True when the raw text carries whitespace or zero-width characters.

    Exact-mode allowlist checks skip such values: a byte-for-byte matcher
    does not recognize a formatted value as a candidate at all, which is the
    fail-open gap Canonical mode exists to close.
    """
    return _WS_RE.search(text) is not None or _ZERO_WIDTH_RE.search(text) is not None
