"""Tokenizer for the surface language.

Identifiers are Unicode letters and digits plus `-` and `'` (not
starting with a digit, and `--` always starts a line comment, never an
identifier chunk).  All tokens carry byte-offset spans.
"""

from __future__ import annotations

from typing import NamedTuple

from .diagnostics import PARSE_ERROR, error
from .syntax import Span


class Token(NamedTuple):
    kind: str  # "ident", "num", "kw", or the punctuation itself
    value: str
    span: Span


# structural keywords; fst/snd/inl/inr/refl parse as builtin references
KEYWORDS = {
    "def",
    "postulate",
    "hit",
    "where",
    "import",
    "fun",
    "U",
    "in",
    "elim",
    "fst",
    "snd",
    "inl",
    "inr",
    "refl",
}

_PUNCT2 = (":=", "->")
_PUNCT1 = "()⟨⟩<>,.:=*×+_|→"


def _is_ident_start(c: str) -> bool:
    return c.isalpha()


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "'"


def tokenize(source: str) -> list:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n":
            i += 1
            continue
        if source.startswith("--", i):
            nl = source.find("\n", i)
            i = n if nl < 0 else nl + 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("num", source[i:j], Span(i, j)))
            i = j
            continue
        if _is_ident_start(c):
            j = i + 1
            while j < n:
                if _is_ident_char(source[j]):
                    j += 1
                elif (
                    source[j] == "-"
                    and j + 1 < n
                    and _is_ident_char(source[j + 1])
                ):
                    j += 2
                else:
                    break
            word = source[i:j]
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, Span(i, j)))
            i = j
            continue
        two = source[i : i + 2]
        if two in _PUNCT2:
            tokens.append(Token(two, two, Span(i, i + 2)))
            i += 2
            continue
        if c in _PUNCT1:
            # normalize the Unicode aliases
            kind = {"→": "->", "×": "*", "⟨": "<", "⟩": ">"}.get(c, c)
            tokens.append(Token(kind, c, Span(i, i + 1)))
            i += 1
            continue
        raise error(PARSE_ERROR, f"illegal character {c!r}", Span(i, i + 1))
    return tokens
