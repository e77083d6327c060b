"""Tokenizer shared by the formula, lambda-term and f-term readers."""

import re
from dataclasses import dataclass


class SyntaxError_(ValueError):
    """Raised on malformed concrete syntax.

    ``offset`` is a byte offset into the UTF-8 encoding of ``text``.
    """

    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{message} (at byte {self.offset})" if text else message)


# `-o` must stay a separate token even when written without spaces.
IDENT_RE = r"[A-Za-z][A-Za-z0-9_']*(?:-(?!o\b)[A-Za-z0-9_']+)*"

_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<ident>{IDENT_RE})
  | (?P<op>-o|⊸|->|→|\\|λ|\.|\(|\)|,|:|=|\$|↓|;|\[|\])
    """,
    re.VERBOSE,
)

_ALIASES = {"⊸": "-o", "λ": "\\", "↓": "$", "→": "->"}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" or "op"
    value: str
    pos: int


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SyntaxError_(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            tokens.append(Token(kind, _ALIASES.get(value, value), pos))
        pos = m.end()
    return tokens


def find_close(tokens, start, text=""):
    """Index of the ``)`` matching the ``(`` at ``start``."""
    depth = 0
    for i in range(start, len(tokens)):
        v = tokens[i].value
        if v == "(":
            depth += 1
        elif v == ")":
            depth -= 1
            if depth == 0:
                return i
    raise SyntaxError_("unbalanced parenthesis", text, tokens[start].pos)


def split_top(tokens, sep):
    """Split a token slice on ``sep`` occurring outside parentheses."""
    parts, current, depth = [], [], 0
    for tok in tokens:
        if tok.value == "(":
            depth += 1
        elif tok.value == ")":
            depth -= 1
        if depth == 0 and tok.kind == "op" and tok.value == sep:
            parts.append(current)
            current = []
        else:
            current.append(tok)
    parts.append(current)
    return parts


def has_top(tokens, sep):
    return len(split_top(tokens, sep)) > 1
