"""F-terms and their normalization into flat resource states.

An f-term is a multiset of labelled formulae, attribute embeddings,
path equations and optional elements.  :func:`normalize` folds every
embedding into the modal prefix of the formulae beneath it, flattens
multisets, and resolves each optional element both ways.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union

from ._lexer import SyntaxError_, find_close, split_top, tokenize
from .formula import (
    Implic,
    Modal,
    VocabularyError,
    check_formula,
    format_formula,
    formula_from_tokens,
    modal_prefix,
)
from .lam import Term, canonical_key, format_term, term_from_tokens


class UnsupportedStructure(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    formula: object
    label: Optional[Term] = None


@dataclass(frozen=True, eq=False)
class Multiset:
    """Order-insensitive, multiplicity-sensitive collection of f-terms."""

    items: tuple

    def __init__(self, items=()):
        object.__setattr__(self, "items", tuple(items))

    def __eq__(self, other):
        return isinstance(other, Multiset) and Counter(self.items) == Counter(other.items)

    def __hash__(self):
        return hash(frozenset(Counter(self.items).items()))


@dataclass(frozen=True)
class Embed:
    attr: str
    body: "FTerm"


@dataclass(frozen=True)
class PathEq:
    lhs: tuple
    rhs: tuple

    def __init__(self, lhs, rhs):
        object.__setattr__(self, "lhs", tuple(lhs))
        object.__setattr__(self, "rhs", tuple(rhs))

    def __str__(self):
        return f"{' '.join(self.lhs)} = {' '.join(self.rhs)}".strip()


@dataclass(frozen=True)
class Opt:
    body: "FTerm"


@dataclass(frozen=True)
class Hole:
    """The ``$`` placeholder of a rule template."""


HOLE = Hole()
FTerm = Union[Leaf, Multiset, Embed, PathEq, Opt, Hole]


@dataclass(frozen=True)
class Resource:
    formula: object
    label: Optional[Term]
    id: int

    def content_key(self):
        return (format_formula(self.formula), canonical_key(self.label))

    def __str__(self):
        f = format_formula(self.formula)
        return f if self.label is None else f"{format_term(self.label)} : {f}"


@dataclass(frozen=True)
class Equation:
    eq: PathEq
    uses: Optional[int] = 1  # None means unbounded


@dataclass(frozen=True, eq=False)
class NormalState:
    """Flat resource multiset plus path equations.

    Equality and hashing ignore resource ids and ordering.
    """

    resources: tuple
    equations: tuple = ()

    def key(self):
        return (
            tuple(sorted(Counter(r.content_key() for r in self.resources).items())),
            tuple(sorted(Counter((e.eq.lhs, e.eq.rhs, e.uses) for e in self.equations).items(),
                         key=repr)),
        )

    def __eq__(self, other):
        return isinstance(other, NormalState) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_fterm(self):
        items = [Leaf(r.formula, r.label) for r in self.resources]
        items += [e.eq for e in self.equations]
        return Multiset(items)

    def __str__(self):
        parts = [str(r) for r in self.resources] + [str(e.eq) for e in self.equations]
        return "{ " + "; ".join(parts) + " }"


def substitute_hole(t, value):
    if isinstance(t, Hole):
        return value
    if isinstance(t, Multiset):
        return Multiset(substitute_hole(c, value) for c in t.items)
    if isinstance(t, Embed):
        return Embed(t.attr, substitute_hole(t.body, value))
    if isinstance(t, Opt):
        return Opt(substitute_hole(t.body, value))
    return t


def count_holes(t):
    if isinstance(t, Hole):
        return 1
    if isinstance(t, Multiset):
        return sum(count_holes(c) for c in t.items)
    if isinstance(t, (Embed, Opt)):
        return count_holes(t.body)
    return 0


def leaves(t):
    if isinstance(t, Leaf):
        yield t
    elif isinstance(t, Multiset):
        for c in t.items:
            yield from leaves(c)
    elif isinstance(t, (Embed, Opt)):
        yield from leaves(t.body)


def _expand(t, prefix):
    """List of (leaves, equations) branches, absent-first for optionals."""
    if isinstance(t, Leaf):
        return [(((modal_prefix(t.formula, prefix), t.label),), ())]
    if isinstance(t, Embed):
        return _expand(t.body, prefix + (t.attr,))
    if isinstance(t, PathEq):
        if prefix:
            raise UnsupportedStructure(
                f"path equation {t} embedded under {' '.join(prefix)}"
            )
        return [((), (t,))]
    if isinstance(t, Opt):
        return [((), ())] + _expand(t.body, prefix)
    if isinstance(t, Multiset):
        result = []
        for combo in itertools.product(*(_expand(c, prefix) for c in t.items)):
            res = tuple(r for rs, _ in combo for r in rs)
            eqs = tuple(e for _, es in combo for e in es)
            result.append((res, eqs))
        return result
    if isinstance(t, Hole):
        raise UnsupportedStructure("unfilled $ placeholder")
    raise TypeError(f"not an f-term: {t!r}")


def normalize(t, eq_uses=1):
    """All flat states of ``t``: 2**k of them for k optional elements.

    ``eq_uses`` is the use budget given to every path equation (None for
    unbounded reuse).
    """
    states = []
    for res, eqs in _expand(t, ()):
        states.append(
            NormalState(
                tuple(Resource(f, lab, i) for i, (f, lab) in enumerate(res)),
                tuple(Equation(e, eq_uses) for e in eqs),
            )
        )
    return states


def distribute_factor_equal(t1, t2):
    """Do two f-terms denote the same resource configurations?"""
    try:
        return set(normalize(t1)) == set(normalize(t2))
    except UnsupportedStructure:
        return False


def check_fterm(t, vocab):
    for leaf in leaves(t):
        check_formula(leaf.formula, vocab)
    _check_attrs(t, vocab)


def _check_attrs(t, vocab):
    if isinstance(t, Embed):
        if t.attr not in vocab.attrs:
            raise VocabularyError(f"undeclared attribute {t.attr!r}")
        _check_attrs(t.body, vocab)
    elif isinstance(t, PathEq):
        for a in t.lhs + t.rhs:
            if a not in vocab.attrs:
                raise VocabularyError(f"undeclared attribute {a!r} in path equation")
    elif isinstance(t, Multiset):
        for c in t.items:
            _check_attrs(c, vocab)
    elif isinstance(t, Opt):
        _check_attrs(t.body, vocab)


# -- concrete syntax --------------------------------------------------------


class _FTermReader:
    def __init__(self, vocab, text):
        self.vocab = vocab
        self.text = text

    def error(self, msg, tokens):
        pos = tokens[0].pos if tokens else len(self.text)
        return SyntaxError_(msg, self.text, pos)

    def items(self, tokens, sep=","):
        if not tokens:
            raise self.error("empty f-term", tokens)
        parts = split_top(tokens, sep)
        out = []
        for part in parts:
            if not part:
                raise self.error(f"empty item before {sep!r}", tokens)
            out.append(self.item(part) if sep == "," else self.group(part))
        return out

    def group(self, tokens, sep=","):
        items = self.items(tokens, sep)
        return items[0] if len(items) == 1 else Multiset(items)

    def item(self, tokens):
        eq_parts = split_top(tokens, "=")
        if len(eq_parts) == 2:
            sides = []
            for side in eq_parts:
                if any(t.kind != "ident" or t.value not in self.vocab.attrs for t in side):
                    raise self.error("path equation sides must be attribute sequences", side or tokens)
                sides.append(tuple(t.value for t in side))
            return PathEq(*sides)
        if len(eq_parts) > 2:
            raise self.error("more than one '=' in path equation", tokens)
        label_parts = split_top(tokens, ":")
        if len(label_parts) == 2:
            label = term_from_tokens(label_parts[0], self.text)
            phi = formula_from_tokens(label_parts[1], self.vocab, self.text)
            return Leaf(phi, label)
        if len(label_parts) > 2:
            raise self.error("more than one ':' in item", tokens)
        t, rest = self.expr(tokens)
        if rest:
            raise self.error(f"unexpected {rest[0].value!r}", rest)
        return t

    def expr(self, tokens):
        left, rest = self.unary(tokens)
        if rest and rest[0].value == "-o":
            right, rest = self.expr(rest[1:])
            if not (_is_plain(left) and _is_plain(right)):
                raise self.error("'-o' joins formulas only", tokens)
            return Leaf(Implic(left.formula, right.formula)), rest
        return left, rest

    def unary(self, tokens):
        if not tokens:
            raise self.error("unexpected end of f-term", tokens)
        tok = tokens[0]
        if tok.value == "$":
            return HOLE, tokens[1:]
        if tok.value == "(":
            close = find_close(tokens, 0, self.text)
            return self.group(tokens[1:close]), tokens[close + 1 :]
        if tok.kind != "ident":
            raise self.error(f"unexpected {tok.value!r}", tokens)
        if tok.value == "opt":
            if len(tokens) < 2 or tokens[1].value != "(":
                raise self.error("expected '(' after opt", tokens)
            close = find_close(tokens, 1, self.text)
            return Opt(self.group(tokens[2:close])), tokens[close + 1 :]
        if tok.value in self.vocab.attrs:
            body, rest = self.unary(tokens[1:])
            if _is_plain(body):
                return Leaf(Modal(tok.value, body.formula)), rest
            return Embed(tok.value, body), rest
        phi = formula_from_tokens([tok], self.vocab, self.text)
        return Leaf(phi), tokens[1:]


def _is_plain(t):
    return isinstance(t, Leaf) and t.label is None


def fterm_from_tokens(tokens, vocab, text="", sep=","):
    return _FTermReader(vocab, text).group(tokens, sep)


def parse_fterm(text, vocab, sep=","):
    """Parse f-term syntax, e.g. ``SUBJ(opt(NOM), $), \\x. snores(x) : SUBJ e -o t``."""
    return fterm_from_tokens(tokenize(text), vocab, text, sep)


def format_fterm(t, top=True):
    if isinstance(t, Hole):
        return "$"
    if isinstance(t, Leaf):
        f = format_formula(t.formula)
        return f if t.label is None else f"{format_term(t.label)} : {f}"
    if isinstance(t, PathEq):
        return str(t)
    if isinstance(t, Opt):
        return f"opt({format_fterm(t.body)})"
    if isinstance(t, Embed):
        body = t.body
        if isinstance(body, (Hole, Embed)):
            return f"{t.attr} {format_fterm(body, top=False)}"
        return f"{t.attr}({format_fterm(body)})"
    inner = ", ".join(format_fterm(c, top=False) for c in t.items)
    return inner if top else f"({inner})"


def format_boxed(t, indent=0):
    """Indented text rendering of an f-term, one resource per line."""
    pad = "  " * indent
    if isinstance(t, Multiset):
        return "\n".join(format_boxed(c, indent) for c in t.items)
    if isinstance(t, Embed):
        return f"{pad}{t.attr} [\n{format_boxed(t.body, indent + 1)}\n{pad}]"
    if isinstance(t, Opt):
        return f"{pad}opt [\n{format_boxed(t.body, indent + 1)}\n{pad}]"
    return pad + format_fterm(t)
