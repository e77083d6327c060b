"""F-formulae, their vocabulary, and the mapping to model-theoretic types.

An f-formula is a typed atom, an attribute-prefixed formula (``SUBJ e``),
or a linear implication (``NOM -o e``).  Attributes are semantically
vacuous; impotent atoms (case, number) map to the one-element type
:data:`UNIT` and vanish from the natural type of an implication that
consumes them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ._lexer import SyntaxError_, find_close, tokenize

CONTENTFUL = "contentful"
IMPOTENT = "impotent"
RESERVED = frozenset({"opt", "lex", "rule"})


class VocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    """Declared atoms (by kind) and attributes."""

    contentful: frozenset = frozenset({"e", "t"})
    impotent: frozenset = frozenset()
    attrs: frozenset = frozenset()

    def __post_init__(self):
        for name in ("contentful", "impotent", "attrs"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        clash = (self.contentful & self.impotent) | (
            (self.contentful | self.impotent) & self.attrs
        )
        if clash:
            raise VocabularyError(f"name declared twice: {', '.join(sorted(clash))}")
        bad = (self.contentful | self.impotent | self.attrs) & RESERVED
        if bad:
            raise VocabularyError(f"reserved word used as a name: {', '.join(sorted(bad))}")

    def is_atom(self, name):
        return name in self.contentful or name in self.impotent

    def kind(self, name):
        if name in self.contentful:
            return CONTENTFUL
        if name in self.impotent:
            return IMPOTENT
        raise VocabularyError(f"undeclared atom {name!r}")


# -- formulae ---------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Modal:
    attr: str
    body: "FFormula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Implic:
    antecedent: "FFormula"
    consequent: "FFormula"

    def __str__(self):
        return format_formula(self)


FFormula = Union[Atom, Modal, Implic]


def modal_prefix(phi, attrs):
    """Wrap ``phi`` in the attribute sequence ``attrs`` (outermost first)."""
    for a in reversed(tuple(attrs)):
        phi = Modal(a, phi)
    return phi


def split_prefix(phi):
    """Return ``(attrs, core)`` where ``core`` is not a Modal."""
    attrs = []
    while isinstance(phi, Modal):
        attrs.append(phi.attr)
        phi = phi.body
    return tuple(attrs), phi


def prefix_depth(phi):
    return len(split_prefix(phi)[0])


def atoms_of(phi):
    if isinstance(phi, Atom):
        return {phi.name}
    if isinstance(phi, Modal):
        return atoms_of(phi.body)
    return atoms_of(phi.antecedent) | atoms_of(phi.consequent)


def attrs_of(phi):
    if isinstance(phi, Atom):
        return set()
    if isinstance(phi, Modal):
        return {phi.attr} | attrs_of(phi.body)
    return attrs_of(phi.antecedent) | attrs_of(phi.consequent)


def check_formula(phi, vocab):
    for a in sorted(atoms_of(phi)):
        if not vocab.is_atom(a):
            raise VocabularyError(f"undeclared atom {a!r}")
    for a in sorted(attrs_of(phi)):
        if a not in vocab.attrs:
            raise VocabularyError(f"undeclared attribute {a!r}")


# -- semantic types ---------------------------------------------------------


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return format_type(self)


@dataclass(frozen=True)
class UnitType:
    def __str__(self):
        return "∅"


@dataclass(frozen=True)
class Arrow:
    source: "SemanticType"
    target: "SemanticType"

    def __str__(self):
        return format_type(self)


@dataclass(frozen=True)
class TypeVar:
    """Unknown type; only produced by inference over unannotated terms."""

    n: int

    def __str__(self):
        return format_type(self)


UNIT = UnitType()
SemanticType = Union[Base, UnitType, Arrow, TypeVar]


def format_type(ty):
    if isinstance(ty, Base):
        return ty.name
    if isinstance(ty, UnitType):
        return "∅"
    if isinstance(ty, TypeVar):
        return "'" + _tv_name(ty.n)
    src = format_type(ty.source)
    if isinstance(ty.source, Arrow):
        src = f"({src})"
    return f"{src} -> {format_type(ty.target)}"


def _tv_name(n):
    letters = "abcdefghijklmnopqrstuvwxyz"
    return letters[n % 26] + (str(n // 26) if n >= 26 else "")


def natural_type(phi, vocab):
    """Map an f-formula to its model-theoretic type.

    >>> v = Vocabulary(impotent={"NOM"})
    >>> str(natural_type(parse_formula("NOM -o e", v), v))
    'e'
    """
    if isinstance(phi, Atom):
        return Base(phi.name) if vocab.kind(phi.name) == CONTENTFUL else UNIT
    if isinstance(phi, Modal):
        return natural_type(phi.body, vocab)
    source = natural_type(phi.antecedent, vocab)
    target = natural_type(phi.consequent, vocab)
    if source == UNIT:
        return target
    return Arrow(source, target)


# -- concrete syntax --------------------------------------------------------


class _FormulaReader:
    def __init__(self, tokens, vocab, text):
        self.tokens = tokens
        self.vocab = vocab
        self.text = text
        self.i = 0

    def error(self, msg, i=None):
        i = self.i if i is None else i
        pos = self.tokens[i].pos if i < len(self.tokens) else len(self.text)
        return SyntaxError_(msg, self.text, pos)

    def peek(self):
        return self.tokens[self.i].value if self.i < len(self.tokens) else None

    def formula(self):
        left = self.unary()
        if self.peek() == "-o":
            self.i += 1
            return Implic(left, self.formula())
        return left

    def unary(self):
        if self.i >= len(self.tokens):
            raise self.error("unexpected end of formula")
        tok = self.tokens[self.i]
        if tok.value == "(":
            close = find_close(self.tokens, self.i, self.text)
            inner = _FormulaReader(self.tokens[self.i + 1 : close], self.vocab, self.text)
            if not inner.tokens:
                raise self.error("empty parentheses")
            phi = inner.formula()
            if inner.i != len(inner.tokens):
                raise inner.error("unexpected token in parentheses")
            self.i = close + 1
            return phi
        if tok.kind != "ident":
            raise self.error(f"unexpected {tok.value!r}")
        self.i += 1
        if tok.value in self.vocab.attrs:
            return Modal(tok.value, self.unary())
        if self.vocab.is_atom(tok.value):
            return Atom(tok.value)
        raise SyntaxError_(f"undeclared identifier {tok.value!r}", self.text, tok.pos)


def formula_from_tokens(tokens, vocab, text=""):
    if not tokens:
        raise SyntaxError_("empty formula", text, len(text))
    reader = _FormulaReader(tokens, vocab, text)
    phi = reader.formula()
    if reader.i != len(tokens):
        raise reader.error(f"unexpected {reader.peek()!r} after formula")
    return phi


def parse_formula(text, vocab):
    """Parse ``SUBJ e -o t`` style text into an :data:`FFormula`."""
    return formula_from_tokens(tokenize(text), vocab, text)


def format_formula(phi):
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Modal):
        body = format_formula(phi.body)
        if isinstance(phi.body, Implic):
            body = f"({body})"
        return f"{phi.attr} {body}"
    left = format_formula(phi.antecedent)
    if isinstance(phi.antecedent, Implic):
        left = f"({left})"
    return f"{left} -o {format_formula(phi.consequent)}"
