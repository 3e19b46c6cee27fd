"""Honeytoken vault: generation, validation, and scanning.

A honeytoken is a fake credential planted where only a snooping agent will
find it. Legitimate flows never touch the value, so any outbound appearance
is a high-confidence compromise signal. Matching is substring-based on both
the raw value and the canonical form, which keeps zero-width or spacing
tricks from smuggling a token past the scanner.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Any, Iterable

from .canonical import canonicalize
from .errors import TokenCollision, TokenTooShort
from .types import Honeytoken, TokenCategory

MIN_TOKEN_LENGTH = 16

_ALNUM = string.ascii_letters + string.digits


def _rand(rng: random.Random, alphabet: str, n: int) -> str:
    return "".join(rng.choice(alphabet) for _ in range(n))


def _generate_value(category: TokenCategory, rng: random.Random) -> str:
    """Produce a realistic-looking credential for one category."""
    if category is TokenCategory.API_KEY:
        # prefix plus 32 random alphanumerics
        return "ak_live_" + _rand(rng, _ALNUM, 32)
    if category is TokenCategory.ADMIN_PASSWORD:
        return "Adm!" + _rand(rng, _ALNUM, 18)
    if category is TokenCategory.DB_CONNECTION_STRING:
        return (
            "postgres://svc_admin:" + _rand(rng, _ALNUM, 16)
            + "@db-internal.corp.local:5432/corpdata"
        )
    if category is TokenCategory.INTERNAL_URL:
        return "https://intranet-" + _rand(rng, _ALNUM.lower(), 10) + ".corp.local/admin"
    if category is TokenCategory.SSH_KEY_PATH:
        return "/home/svc/.ssh/id_ed25519_" + _rand(rng, _ALNUM.lower(), 12)
    raise ValueError(f"unknown token category: {category}")


@dataclass(frozen=True)
class HoneytokenVault:
    """Immutable set of planted tokens plus the scanning primitive."""

    tokens: tuple[Honeytoken, ...]

    def __post_init__(self) -> None:
        for tok in self.tokens:
            if len(tok.value) < MIN_TOKEN_LENGTH:
                raise TokenTooShort(
                    f"token {tok.token_id!r} is {len(tok.value)} chars; "
                    f"minimum is {MIN_TOKEN_LENGTH}"
                )
        values = [t.value for t in self.tokens]
        for i, a in enumerate(values):
            for j, b in enumerate(values):
                if i != j and a in b:
                    raise TokenCollision(
                        f"token {self.tokens[i].token_id!r} is a substring of "
                        f"{self.tokens[j].token_id!r}"
                    )

    def scan(self, text: str) -> tuple[Honeytoken, ...]:
        """Tokens whose value appears in the text, raw or canonicalized.

        Raw match is case-sensitive (credentials are verbatim secrets); the
        canonical pass catches values laundered through case changes,
        whitespace, or zero-width insertion.
        """
        canon_text: str | None = None
        hits: list[Honeytoken] = []
        for tok in self.tokens:
            if tok.value in text:
                hits.append(tok)
                continue
            if canon_text is None:
                canon_text = canonicalize(text)
            if canonicalize(tok.value) in canon_text:
                hits.append(tok)
        return tuple(hits)

    @property
    def values(self) -> tuple[str, ...]:
        return tuple(t.value for t in self.tokens)

    def get(self, token_id: str) -> Honeytoken | None:
        for tok in self.tokens:
            if tok.token_id == token_id:
                return tok
        return None


def plant_tokens(
    seed: int,
    categories: Iterable[TokenCategory] = tuple(TokenCategory),
    planted_at: dict[TokenCategory, str] | None = None,
) -> HoneytokenVault:
    """Generate one token per category, deterministically from the seed."""
    rng = random.Random(seed)
    planted_at = planted_at or {}
    tokens = tuple(
        Honeytoken(
            token_id=f"ht_{cat.value}",
            category=cat,
            value=_generate_value(cat, rng),
            planted_at=planted_at.get(cat, ""),
        )
        for cat in categories
    )
    return HoneytokenVault(tokens=tokens)


def vault_from_config(raw: list[dict[str, Any]] | dict[str, Any]) -> HoneytokenVault:
    """Build a vault from a config section.

    Accepts either an explicit token list or {"seed": N[, "planted_at": {...}]}
    for generated values.
    """
    if isinstance(raw, dict):
        planted = {
            TokenCategory(k): v for k, v in raw.get("planted_at", {}).items()
        }
        return plant_tokens(int(raw["seed"]), planted_at=planted)
    return HoneytokenVault(tokens=tuple(Honeytoken.from_dict(r) for r in raw))
