"""Grammar files: declarations, lexicon and annotated phrase-structure rules.

File format (UTF-8, ``#`` starts a comment)::

    atoms contentful: e t
    atoms impotent: NOM ACC
    attrs: SUBJ OBJ XCOMP
    start: S
    goal: t
    set path_eq_reuse = off
    rule S -> NP:SUBJ(opt(NOM), $) VP:$
    rule VP -> V:$ [NP:OBJ(opt(ACC), $)] [VP:XCOMP $]
    lex kyssti V : \\y. \\x. kissed(x,y) : OBJ e -o SUBJ e -o t
    lex virðist V : \\P. seems(P) : XCOMP t -o t ; SUBJ = XCOMP SUBJ
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ._lexer import SyntaxError_, tokenize
from .formula import (
    UNIT,
    Atom,
    Vocabulary,
    VocabularyError,
    format_formula,
    formula_from_tokens,
    natural_type,
)
from .fterm import (
    Embed,
    FTerm,
    Leaf,
    Multiset,
    Opt,
    PathEq,
    check_fterm,
    count_holes,
    format_fterm,
    fterm_from_tokens,
    leaves,
)
from .lam import TypeMismatch, check_label, format_term
from .prover import DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES, SearchLimits

CATEGORY_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_']*$")


class GrammarError(ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if line is not None:
            where = f"{path or '<grammar>'}:{line}"
            if column is not None:
                where += f":{column}"
            where += ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class LexEntry:
    word: str
    category: str
    fterm: FTerm
    line: Optional[int] = field(default=None, compare=False)

    def items(self):
        return self.fterm.items if isinstance(self.fterm, Multiset) else (self.fterm,)


@dataclass(frozen=True)
class RhsItem:
    category: str
    template: FTerm
    optional: bool = False


@dataclass(frozen=True)
class PSRule:
    mother: str
    rhs: tuple
    line: Optional[int] = field(default=None, compare=False)

    def variants(self):
        """Index tuples of the daughters present in each expansion."""
        opt = [i for i, item in enumerate(self.rhs) if item.optional]
        out = []
        for bits in range(1 << len(opt)):
            omitted = {opt[k] for k in range(len(opt)) if (bits >> k) & 1}
            present = tuple(i for i in range(len(self.rhs)) if i not in omitted)
            if present:
                out.append(present)
        return out


@dataclass
class Settings:
    path_eq_reuse: bool = False
    max_depth: int = DEFAULT_MAX_DEPTH
    max_nodes: int = DEFAULT_MAX_NODES

    def limits(self):
        return SearchLimits(self.max_nodes, self.max_depth)


@dataclass
class Grammar:
    vocab: Vocabulary
    start: str
    goal: object = field(default_factory=lambda: Atom("t"))
    lexicon: dict = field(default_factory=dict)
    rules: list = field(default_factory=list)
    settings: Settings = field(default_factory=Settings)
    type_env: dict = field(default_factory=dict)

    def entries(self):
        return [e for word in self.lexicon for e in self.lexicon[word]]

    def categories(self):
        cats = {self.start}
        for r in self.rules:
            cats.add(r.mother)
            cats.update(i.category for i in r.rhs)
        cats.update(e.category for e in self.entries())
        return cats

    def canonical(self):
        """Order-insensitive view used for equality up to ordering."""
        return (
            self.vocab,
            self.start,
            self.goal,
            sorted((repr(e.word), repr(e.category), repr(e.fterm)) for e in self.entries()),
            sorted(repr((r.mother, r.rhs)) for r in self.rules),
            (self.settings.path_eq_reuse, self.settings.max_depth, self.settings.max_nodes),
        )


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    message: str
    line: Optional[int] = None

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        return f"{self.severity}: {where}{self.message}"


# -- parsing ----------------------------------------------------------------


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def _on_off(value, lineno):
    v = value.strip().lower()
    if v in ("on", "true", "yes", "unbounded"):
        return True
    if v in ("off", "false", "no", "single"):
        return False
    raise GrammarError(f"expected on/off, got {value.strip()!r}", lineno)


def _positive_int(value, lineno):
    try:
        n = int(value.strip())
    except ValueError:
        raise GrammarError(f"expected an integer, got {value.strip()!r}", lineno) from None
    if n < 1:
        raise GrammarError("bound must be positive", lineno)
    return n


def _wrap_syntax(err, lineno, base, path):
    col = base + len(err.text[: err.pos]) + 1 if isinstance(err, SyntaxError_) else None
    msg = err.args[0] if isinstance(err, SyntaxError_) else str(err)
    if isinstance(err, SyntaxError_) and " (at byte" in msg:
        msg = msg[: msg.index(" (at byte")]
    return GrammarError(msg, lineno, col, path)


def parse_grammar(text, path=None):
    """Parse grammar-file text.  Raises :class:`GrammarError` with a location."""
    contentful, impotent, attrs = [], [], []
    start = goal_text = None
    settings = Settings()
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        head = stripped.split(None, 1)[0]
        if stripped.startswith("atoms"):
            m = re.match(r"atoms\s+(contentful|impotent)\s*:\s*(.*)$", stripped)
            if not m:
                raise GrammarError("expected 'atoms contentful: ...' or 'atoms impotent: ...'",
                                   lineno, path=path)
            names = m.group(2).split()
            (contentful if m.group(1) == "contentful" else impotent).extend(
                (n, lineno) for n in names)
        elif head in ("attrs:", "attrs"):
            m = re.match(r"attrs\s*:\s*(.*)$", stripped)
            if not m:
                raise GrammarError("expected 'attrs: ...'", lineno, path=path)
            attrs.extend((n, lineno) for n in m.group(1).split())
        elif head in ("start:", "start"):
            m = re.match(r"start\s*:\s*(\S+)\s*$", stripped)
            if not m or not CATEGORY_RE.match(m.group(1)):
                raise GrammarError("expected 'start: <Category>'", lineno, path=path)
            start = m.group(1)
        elif head in ("goal:", "goal"):
            m = re.match(r"goal\s*:\s*(.+)$", stripped)
            if not m:
                raise GrammarError("expected 'goal: <formula>'", lineno, path=path)
            goal_text = (m.group(1), lineno, line.index(m.group(1)))
        elif head == "set":
            m = re.match(r"set\s+(\w+)\s*=\s*(.+)$", stripped)
            if not m:
                raise GrammarError("expected 'set <name> = <value>'", lineno, path=path)
            name, value = m.groups()
            if name == "path_eq_reuse":
                settings.path_eq_reuse = _on_off(value, lineno)
            elif name == "max_depth":
                settings.max_depth = _positive_int(value, lineno)
            elif name == "max_nodes":
                settings.max_nodes = _positive_int(value, lineno)
            else:
                raise GrammarError(f"unknown setting {name!r}", lineno, path=path)
        elif head in ("lex", "rule"):
            body.append((lineno, line))
        else:
            raise GrammarError(f"unrecognized line starting with {head!r}", lineno, path=path)

    seen = {}
    for name, lineno in contentful + impotent + attrs:
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_'-]*", name):
            raise GrammarError(f"bad identifier {name!r}", lineno, path=path)
        if name in seen:
            raise GrammarError(f"duplicate declaration of {name!r} (first on line {seen[name]})",
                               lineno, path=path)
        seen[name] = lineno
    try:
        vocab = Vocabulary(
            frozenset(n for n, _ in contentful),
            frozenset(n for n, _ in impotent),
            frozenset(n for n, _ in attrs),
        )
    except VocabularyError as exc:
        raise GrammarError(str(exc), path=path) from None
    if start is None:
        raise GrammarError("no start symbol", path=path)

    goal = Atom("t")
    if goal_text is not None:
        gtext, glineno, gcol = goal_text
        try:
            goal = formula_from_tokens(tokenize(gtext), vocab, gtext)
        except SyntaxError_ as exc:
            raise _wrap_syntax(exc, glineno, gcol, path) from None
    elif not vocab.is_atom("t"):
        raise GrammarError("default goal t is not declared; add 'goal: ...'", path=path)

    g = Grammar(vocab, start, goal, settings=settings)
    for lineno, line in body:
        if line.lstrip().startswith("lex"):
            entry = _parse_lex(line, lineno, vocab, path)
            g.lexicon.setdefault(entry.word, []).append(entry)
        else:
            g.rules.append(_parse_rule(line, lineno, vocab, path))
    return g


_LEX_RE = re.compile(r"^\s*lex\s+(\S+)\s+(\S+)\s*:(.*)$")


def _parse_lex(line, lineno, vocab, path):
    m = _LEX_RE.match(line)
    if not m:
        raise GrammarError("expected 'lex <word> <Category> : <items>'", lineno, path=path)
    word, cat, rest = m.groups()
    if not CATEGORY_RE.match(cat):
        raise GrammarError(f"bad category name {cat!r}", lineno, path=path)
    base = m.start(3)
    try:
        t = fterm_from_tokens(tokenize(rest), vocab, rest, sep=";")
        check_fterm(t, vocab)
    except SyntaxError_ as exc:
        raise _wrap_syntax(exc, lineno, base, path) from None
    except VocabularyError as exc:
        raise GrammarError(str(exc), lineno, path=path) from None
    if count_holes(t):
        raise GrammarError("$ may only appear in rule templates", lineno, path=path)
    _check_impotent_labels(t, vocab, lineno, path)
    return LexEntry(word, cat, t, lineno)


def _check_impotent_labels(t, vocab, lineno, path):
    for leaf in leaves(t):
        if leaf.label is not None and natural_type(leaf.formula, vocab) == UNIT:
            raise GrammarError(
                f"label {format_term(leaf.label)} on semantically impotent "
                f"{format_formula(leaf.formula)}", lineno, path=path)


def _parse_rule(line, lineno, vocab, path):
    m = re.match(r"^\s*rule\s+(\S+)\s*->(.*)$", line)
    if not m:
        raise GrammarError("expected 'rule <Category> -> <elements>'", lineno, path=path)
    mother, rest = m.groups()
    if not CATEGORY_RE.match(mother):
        raise GrammarError(f"bad category name {mother!r}", lineno, path=path)
    base = m.start(2)
    try:
        tokens = tokenize(rest)
    except SyntaxError_ as exc:
        raise _wrap_syntax(exc, lineno, base, path) from None
    if not tokens:
        raise GrammarError("rule has no daughters", lineno, path=path)

    # element starts: '[' or an identifier followed by ':' outside parentheses
    starts = []
    depth = 0
    for i, tok in enumerate(tokens):
        if tok.value == "(":
            depth += 1
        elif tok.value == ")":
            depth -= 1
        elif depth == 0 and (
            tok.value == "["
            or (tok.kind == "ident" and i + 1 < len(tokens) and tokens[i + 1].value == ":"
                and (i == 0 or tokens[i - 1].value != "["))
        ):
            starts.append(i)
    if not starts or starts[0] != 0:
        raise GrammarError("expected '<Category>:<template>'", lineno, base + 1, path)
    rhs = []
    for n, s in enumerate(starts):
        e = starts[n + 1] if n + 1 < len(starts) else len(tokens)
        chunk = tokens[s:e]
        optional = chunk[0].value == "["
        if optional:
            if chunk[-1].value != "]":
                raise GrammarError("unclosed '['", lineno, base + chunk[0].pos + 1, path)
            chunk = chunk[1:-1]
        if len(chunk) < 3 or chunk[0].kind != "ident" or chunk[1].value != ":":
            raise GrammarError("expected '<Category>:<template>'", lineno,
                               base + (chunk[0].pos if chunk else 0) + 1, path)
        cat = chunk[0].value
        try:
            template = fterm_from_tokens(chunk[2:], vocab, rest)
            check_fterm(template, vocab)
        except SyntaxError_ as exc:
            raise _wrap_syntax(exc, lineno, base, path) from None
        except VocabularyError as exc:
            raise GrammarError(str(exc), lineno, path=path) from None
        if count_holes(template) == 0:
            raise GrammarError(f"template for {cat} has no $", lineno,
                               base + chunk[0].pos + 1, path)
        _check_impotent_labels(template, vocab, lineno, path)
        rhs.append(RhsItem(cat, template, optional))
    return PSRule(mother, tuple(rhs), lineno)


def load_grammar(path, validate_grammar=True):
    """Read, parse and validate a grammar file; error findings raise."""
    path = Path(path)
    g = parse_grammar(path.read_text(encoding="utf-8"), str(path))
    if validate_grammar:
        errors = [f for f in validate(g) if f.severity == "error"]
        if errors:
            first = errors[0]
            raise GrammarError(first.message, first.line, path=str(path))
    return g


# -- validation -------------------------------------------------------------


def _all_leaves(g):
    for e in g.entries():
        for leaf in leaves(e.fterm):
            yield leaf, e.line, f"{e.word}/{e.category}"
    for r in g.rules:
        for item in r.rhs:
            for leaf in leaves(item.template):
                yield leaf, r.line, f"rule {r.mother}"


def validate(g):
    """Check label typing and category structure; fills ``g.type_env``."""
    findings = []
    env = {}
    for leaf, line, where in _all_leaves(g):
        expected = natural_type(leaf.formula, g.vocab)
        if expected == UNIT:
            if leaf.label is not None:
                findings.append(Finding("error", f"{where}: label on impotent "
                                        f"{format_formula(leaf.formula)}", line))
            continue
        if leaf.label is None:
            findings.append(Finding("error", f"{where}: contentful "
                                    f"{format_formula(leaf.formula)} has no label", line))
            continue
        try:
            env.update(check_label(leaf.label, expected, env))
        except TypeMismatch as exc:
            findings.append(Finding("error", f"{where}: {exc}", line))
    g.type_env = env

    producible = {e.category for e in g.entries()} | {r.mother for r in g.rules}
    if g.start not in producible:
        findings.append(Finding("error", f"start symbol {g.start} has no rules or entries"))
    for r in g.rules:
        for item in r.rhs:
            if item.category not in producible:
                findings.append(Finding(
                    "error", f"rule {r.mother} uses undefined category {item.category}", r.line))

    reachable = {g.start}
    frontier = [g.start]
    while frontier:
        c = frontier.pop()
        for r in g.rules:
            if r.mother == c:
                for item in r.rhs:
                    if item.category not in reachable:
                        reachable.add(item.category)
                        frontier.append(item.category)
    for c in sorted(producible - reachable):
        findings.append(Finding("warning", f"category {c} is unreachable from {g.start}"))
    used = {i.category for r in g.rules for i in r.rhs} | {g.start}
    for e in g.entries():
        if e.category not in used:
            findings.append(Finding(
                "warning", f"word {e.word!r} has category {e.category} that no rule uses", e.line))
    return findings


# -- printing ---------------------------------------------------------------


def _format_item(t):
    if isinstance(t, Multiset):
        return format_fterm(t, top=False)
    return format_fterm(t)


def format_grammar(g):
    lines = [f"atoms contentful: {' '.join(sorted(g.vocab.contentful))}"]
    if g.vocab.impotent:
        lines.append(f"atoms impotent: {' '.join(sorted(g.vocab.impotent))}")
    if g.vocab.attrs:
        lines.append(f"attrs: {' '.join(sorted(g.vocab.attrs))}")
    lines.append(f"start: {g.start}")
    lines.append(f"goal: {format_formula(g.goal)}")
    s = g.settings
    lines.append(f"set path_eq_reuse = {'on' if s.path_eq_reuse else 'off'}")
    lines.append(f"set max_depth = {s.max_depth}")
    lines.append(f"set max_nodes = {s.max_nodes}")
    for r in g.rules:
        elems = []
        for item in r.rhs:
            e = f"{item.category}:{format_fterm(item.template)}"
            elems.append(f"[{e}]" if item.optional else e)
        lines.append(f"rule {r.mother} -> {' '.join(elems)}")
    for e in g.entries():
        items = " ; ".join(_format_item(i) for i in e.items())
        lines.append(f"lex {e.word} {e.category} : {items}")
    return "\n".join(lines) + "\n"
