"""Lambda terms used as semantic labels on resources."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from ._lexer import SyntaxError_, find_close, split_top, tokenize
from .formula import UNIT, Arrow, Implic, TypeVar, natural_type


class LabelError(ValueError):
    """A label is present where none is allowed, or vice versa."""


class TypeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Abs:
    var: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Var, Const, Abs, App]


def apply_all(fun, *args):
    for a in args:
        fun = App(fun, a)
    return fun


def spine(m):
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while isinstance(m, App):
        args.append(m.arg)
        m = m.fun
    return m, args[::-1]


def free_vars(m):
    if isinstance(m, Var):
        return {m.name}
    if isinstance(m, Const):
        return set()
    if isinstance(m, Abs):
        return free_vars(m.body) - {m.var}
    return free_vars(m.fun) | free_vars(m.arg)


def constants(m):
    if isinstance(m, Const):
        return {m.name}
    if isinstance(m, Var):
        return set()
    if isinstance(m, Abs):
        return constants(m.body)
    return constants(m.fun) | constants(m.arg)


def _all_names(m):
    if isinstance(m, (Var, Const)):
        return {m.name}
    if isinstance(m, Abs):
        return {m.var} | _all_names(m.body)
    return _all_names(m.fun) | _all_names(m.arg)


def _fresh(base, avoid):
    stem = base.rstrip("0123456789") or "v"
    for i in itertools.count(1):
        name = f"{stem}{i}"
        if name not in avoid:
            return name


def substitute(m, name, value):
    """Capture-avoiding ``m[name := value]``."""
    if isinstance(m, Var):
        return value if m.name == name else m
    if isinstance(m, Const):
        return m
    if isinstance(m, App):
        return App(substitute(m.fun, name, value), substitute(m.arg, name, value))
    if m.var == name:
        return m
    fv = free_vars(value)
    if m.var in fv and name in free_vars(m.body):
        new = _fresh(m.var, fv | _all_names(m.body) | {name})
        body = substitute(m.body, m.var, Var(new))
        return Abs(new, substitute(body, name, value))
    return Abs(m.var, substitute(m.body, name, value))


def beta_normalize(m):
    """Normal-order reduction to beta-normal form.

    Total on simply typed terms; an untypable term such as
    ``(\\x. x x)(\\x. x x)`` will not terminate.
    """
    if isinstance(m, (Var, Const)):
        return m
    if isinstance(m, Abs):
        return Abs(m.var, beta_normalize(m.body))
    head, args = spine(m)
    while isinstance(head, Abs) and args:
        head = substitute(head.body, head.var, args.pop(0))
        if isinstance(head, App):
            inner, more = spine(head)
            head, args = inner, more + args
    if isinstance(head, Abs):
        return beta_normalize(head)
    return apply_all(head, *(beta_normalize(a) for a in args))


def canonical(m, bound=()):
    """Nameless form: bound variables become de Bruijn indices."""
    if isinstance(m, Var):
        for i, name in enumerate(reversed(bound)):
            if name == m.name:
                return i
        return ("free", m.name)
    if isinstance(m, Const):
        return ("c", m.name)
    if isinstance(m, Abs):
        return ("lam", canonical(m.body, bound + (m.var,)))
    return ("app", canonical(m.fun, bound), canonical(m.arg, bound))


def alpha_equal(m1, m2):
    return canonical(m1) == canonical(m2)


def canonical_key(m):
    """A string that sorts and compares like the nameless form."""
    return repr(canonical(m)) if m is not None else ""


def rename_constants(m, mapping):
    if isinstance(m, Const):
        return Const(mapping.get(m.name, m.name))
    if isinstance(m, Var):
        return m
    if isinstance(m, Abs):
        return Abs(m.var, rename_constants(m.body, mapping))
    return App(rename_constants(m.fun, mapping), rename_constants(m.arg, mapping))


# -- typing -----------------------------------------------------------------


class _Unifier:
    def __init__(self):
        self.subst = {}
        self.counter = itertools.count()

    def fresh(self):
        return TypeVar(next(self.counter))

    def resolve(self, ty):
        while isinstance(ty, TypeVar) and ty.n in self.subst:
            ty = self.subst[ty.n]
        if isinstance(ty, Arrow):
            return Arrow(self.resolve(ty.source), self.resolve(ty.target))
        return ty

    def occurs(self, n, ty):
        ty = self.resolve(ty)
        if isinstance(ty, TypeVar):
            return ty.n == n
        if isinstance(ty, Arrow):
            return self.occurs(n, ty.source) or self.occurs(n, ty.target)
        return False

    def unify(self, a, b):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return True
        if isinstance(a, TypeVar):
            if self.occurs(a.n, b):
                return False
            self.subst[a.n] = b
            return True
        if isinstance(b, TypeVar):
            return self.unify(b, a)
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            return self.unify(a.source, b.source) and self.unify(a.target, b.target)
        return False


def _rename_tvars(ty, table):
    if isinstance(ty, TypeVar):
        return table.setdefault(ty.n, TypeVar(len(table)))
    if isinstance(ty, Arrow):
        return Arrow(_rename_tvars(ty.source, table), _rename_tvars(ty.target, table))
    return ty


def _infer(m, env, u, scope, unknown):
    if isinstance(m, Var):
        if m.name not in scope:
            raise TypeMismatch(f"free variable {m.name!r}")
        return scope[m.name]
    if isinstance(m, Const):
        if m.name in env:
            return env[m.name]
        if unknown is None:
            raise TypeMismatch(f"constant {m.name!r} has no type")
        return unknown.setdefault(m.name, u.fresh())
    if isinstance(m, Abs):
        arg = u.fresh()
        body = _infer(m.body, env, u, {**scope, m.var: arg}, unknown)
        return Arrow(arg, body)
    fun = _infer(m.fun, env, u, scope, unknown)
    arg = _infer(m.arg, env, u, scope, unknown)
    result = u.fresh()
    if not u.unify(fun, Arrow(arg, result)):
        raise TypeMismatch(
            f"ill-typed application {format_term(m)}: function has type "
            f"{u.resolve(fun)}, argument has type {u.resolve(arg)}"
        )
    return result


def type_of(m, env):
    """Simple type of ``m`` with constants typed by ``env``."""
    u = _Unifier()
    ty = u.resolve(_infer(m, env, u, {}, None))
    return _rename_tvars(ty, {})


def check_label(m, expected, env):
    """Check ``m`` against ``expected``; return types for constants not in ``env``.

    Constants missing from ``env`` are inferred from the expected type, which
    is how a grammar's constant types are derived from its lexical formulas.
    """
    u = _Unifier()
    unknown = {}
    ty = _infer(m, env, u, {}, unknown)
    if not u.unify(ty, expected):
        what = "λ-abstraction" if isinstance(m, Abs) else "term"
        raise TypeMismatch(
            f"{what} {format_term(m)} has type {_rename_tvars(u.resolve(ty), {})}, "
            f"expected {expected}"
        )
    found = {}
    for name, tv in unknown.items():
        resolved = u.resolve(tv)
        if _has_tvar(resolved):
            raise TypeMismatch(f"cannot determine the type of constant {name!r}")
        found[name] = resolved
    return found


def _has_tvar(ty):
    if isinstance(ty, TypeVar):
        return True
    if isinstance(ty, Arrow):
        return _has_tvar(ty.source) or _has_tvar(ty.target)
    return False


def label_apply(fun_label: Optional[Term], fun_type, arg_label: Optional[Term], vocab):
    """Label of the resource produced by applying ``fun_type`` to its argument."""
    if not isinstance(fun_type, Implic):
        raise LabelError(f"{fun_type} is not an implication")
    source = natural_type(fun_type.antecedent, vocab)
    fun_unit = natural_type(fun_type, vocab) == UNIT
    if (fun_label is None) != fun_unit:
        raise LabelError(f"function label {'missing' if fun_label is None else 'not allowed'} on {fun_type}")
    if source == UNIT:
        if arg_label is not None:
            raise LabelError(f"label on impotent argument {fun_type.antecedent}")
        return fun_label
    if arg_label is None:
        raise LabelError(f"missing label on argument {fun_type.antecedent}")
    return beta_normalize(App(fun_label, arg_label))


# -- concrete syntax --------------------------------------------------------


class _TermReader:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def error(self, msg):
        pos = self.tokens[self.i].pos if self.i < len(self.tokens) else len(self.text)
        return SyntaxError_(msg, self.text, pos)

    def peek(self):
        return self.tokens[self.i].value if self.i < len(self.tokens) else None

    def term(self, bound):
        if self.peek() == "\\":
            self.i += 1
            names = []
            while self.i < len(self.tokens) and self.tokens[self.i].kind == "ident":
                names.append(self.tokens[self.i].value)
                self.i += 1
            if not names or self.peek() != ".":
                raise self.error("expected variable(s) and '.' after '\\'")
            self.i += 1
            body = self.term(bound | set(names))
            for n in reversed(names):
                body = Abs(n, body)
            return body
        head = self.atom(bound)
        while self.i < len(self.tokens) and (
            self.tokens[self.i].kind == "ident" or self.peek() in ("(", "\\")
        ):
            if self.peek() == "\\":
                head = App(head, self.term(bound))
                break
            head = App(head, self.atom(bound))
        return head

    def atom(self, bound):
        if self.i >= len(self.tokens):
            raise self.error("unexpected end of term")
        tok = self.tokens[self.i]
        if tok.value == "(":
            close = find_close(self.tokens, self.i, self.text)
            m = self._sub(self.tokens[self.i + 1 : close], bound)
            self.i = close + 1
            return m
        if tok.kind != "ident":
            raise self.error(f"unexpected {tok.value!r} in term")
        self.i += 1
        head = Var(tok.value) if tok.value in bound else Const(tok.value)
        # c(a,b) sugar only when the parenthesis is attached: "k (x)" is application
        if self.peek() == "(" and self.tokens[self.i].pos == tok.pos + len(tok.value):
            close = find_close(self.tokens, self.i, self.text)
            inner = self.tokens[self.i + 1 : close]
            if not inner:
                raise self.error("empty argument list")
            args = [self._sub(part, bound) for part in split_top(inner, ",")]
            self.i = close + 1
            head = apply_all(head, *args)
        return head

    def _sub(self, tokens, bound):
        if not tokens:
            raise self.error("empty term")
        r = _TermReader(tokens, self.text)
        m = r.term(bound)
        if r.i != len(tokens):
            raise r.error(f"unexpected {r.peek()!r} in term")
        return m


def term_from_tokens(tokens, text=""):
    if not tokens:
        raise SyntaxError_("empty term", text, len(text))
    r = _TermReader(tokens, text)
    m = r.term(frozenset())
    if r.i != len(tokens):
        raise r.error(f"unexpected {r.peek()!r} after term")
    return m


def parse_term(text):
    r"""Parse ``\x. snores(x)``; unbound identifiers are constants."""
    return term_from_tokens(tokenize(text), text)


def format_term(m, sugar=True):
    """Print ``m``; with ``sugar``, constant-headed spines print as ``c(a,b)``."""
    if m is None:
        return "-"
    if isinstance(m, (Var, Const)):
        return m.name
    if isinstance(m, Abs):
        return f"\\{m.var}. {format_term(m.body, sugar)}"
    head, args = spine(m)
    if sugar and isinstance(head, Const):
        return f"{head.name}({','.join(format_term(a, sugar) for a in args)})"
    parts = [_wrap(head, sugar)] + [_wrap(a, sugar, arg=True) for a in args]
    return " ".join(parts)


def _wrap(m, sugar, arg=False):
    s = format_term(m, sugar)
    if isinstance(m, Abs) or (arg and isinstance(m, App) and not (sugar and isinstance(spine(m)[0], Const))):
        return f"({s})"
    return s
