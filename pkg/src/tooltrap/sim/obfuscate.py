"""Payload obfuscation transforms used by the attack corpus.

ZeroWidth interleaves zero-width joiners/spaces inside flagged keywords so
the visible text is unchanged while naive keyword filters miss it; the
canonicalizer strips exactly those characters, so canonical comparisons are
invariant under this transform. Homoglyph swaps Latin letters for
confusable Cyrillic codepoints from a fixed table; output renders like the
input but differs byte-wise.
"""

from __future__ import annotations

import re
from enum import Enum

from ..canonical import strip_zero_width


class Transform(str, Enum):
    ZERO_WIDTH = "zero_width"
    HOMOGLYPH = "homoglyph"


# Alternate the two characters so runs of one codepoint don't stand out.
_ZW_CYCLE = ("​", "‍")  # zero width space, zero width joiner

DEFAULT_FLAGGED_KEYWORDS: tuple[str, ...] = (
    "ignore",
    "instructions",
    "transfer",
    "send",
    "export",
    "password",
    "credentials",
    "urgent",
    "immediately",
    "admin",
    "forward",
    "upload",
)

# Latin -> Cyrillic confusables. Fixed table; applied to every occurrence.
HOMOGLYPHS: dict[str, str] = {
    "a": "а", "c": "с", "e": "е", "i": "і", "j": "ј",
    "o": "о", "p": "р", "s": "ѕ", "x": "х", "y": "у",
    "A": "А", "B": "В", "C": "С", "E": "Е", "H": "Н",
    "K": "К", "M": "М", "O": "О", "P": "Р", "T": "Т",
    "X": "Х",
}


def _interleave(word: str) -> str:
    out: list[str] = []
    for i, ch in enumerate(word):
        out.append(ch)
        if i < len(word) - 1:
            out.append(_ZW_CYCLE[i % len(_ZW_CYCLE)])
    return "".join(out)


def obfuscate(
    text: str,
    transform: Transform,
    keywords: tuple[str, ...] | None = None,
) -> str:
    """Apply one transform to the payload text."""
    if transform is Transform.HOMOGLYPH:
        return "".join(HOMOGLYPHS.get(ch, ch) for ch in text)

    words = keywords if keywords is not None else DEFAULT_FLAGGED_KEYWORDS
    result = text
    for word in words:
        pattern = re.compile(re.escape(word), re.IGNORECASE)
        result = pattern.sub(lambda m: _interleave(m.group(0)), result)
    return result


def deobfuscate_zero_width(text: str) -> str:
    """Inverse of the ZeroWidth transform for inputs free of zero-width
    characters: stripping recovers the original exactly."""
    return strip_zero_width(text)
