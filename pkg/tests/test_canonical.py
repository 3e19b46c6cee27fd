"""Canonicalization is the backbone of every matcher; pin its algebra."""

import string

from hypothesis import given
from hypothesis import strategies as st

from tooltrap.canonical import (
    ZERO_WIDTH_CHARS,
    canonicalize,
    contains_formatting,
    strip_zero_width,
)

ZW = sorted(ZERO_WIDTH_CHARS)


def test_strips_whitespace_and_lowercases():
    assert canonicalize("DE89 3704 0044") == "de8937040044"
    assert canonicalize("  Tabs\tand\nnewlines  ") == "tabsandnewlines"


def test_strips_zero_width_characters():
    spaced = "s​e‌c‍r⁠e﻿t"
    assert strip_zero_width(spaced) == "secret"
    assert canonicalize(spaced) == "secret"


def test_zero_width_chars_are_not_python_whitespace():
    # The dedicated set exists because \s does not cover these.
    for ch in ZW:
        assert not ch.isspace() or ch == " ", ch


@given(st.text())
def test_idempotent(s):
    assert canonicalize(canonicalize(s)) == canonicalize(s)


@given(st.text(alphabet=string.ascii_letters + string.digits, max_size=30))
def test_invariant_under_zero_width_insertion(s):
    laced = "​".join(s)
    assert canonicalize(laced) == canonicalize(s)


@given(
    st.text(alphabet=string.ascii_letters + string.digits, max_size=30),
    st.integers(min_value=0, max_value=10),
)
def test_invariant_under_whitespace_insertion(s, k):
    padded = (" " * k).join(s) + " " * k
    assert canonicalize(padded) == canonicalize(s)


def test_contains_formatting():
    assert contains_formatting("a b")
    assert contains_formatting("a‍b")
    assert contains_formatting("trailing ")
    assert not contains_formatting("plain-value_1@x.y")
    assert not contains_formatting("")


@given(st.text())
def test_canonical_output_has_no_formatting(s):
    out = canonicalize(s)
    assert not contains_formatting(out)
