"""Slow, unpruned reference implementations used as test oracles.

Nothing here shares search code with the package: the prover oracle walks
whole resource multisets one rule application at a time, and the parser
oracle enumerates trees top-down.
"""

import itertools

from rlfg.formula import UNIT, Arrow, Atom, Base, Implic, Modal, natural_type
from rlfg.lam import App, beta_normalize, canonical_key


def _lift(phi):
    """Distribute the innermost modal of the top chain over an implication."""
    if not isinstance(phi, Modal):
        return None
    body = phi.body
    if isinstance(body, Implic):
        return Implic(Modal(phi.attr, body.antecedent), Modal(phi.attr, body.consequent))
    inner = _lift(body)
    return None if inner is None else Modal(phi.attr, inner)


def _chain(phi):
    attrs = []
    while isinstance(phi, Modal):
        attrs.append(phi.attr)
        phi = phi.body
    return attrs, phi


def _wrap(attrs, core):
    for a in reversed(attrs):
        core = Modal(a, core)
    return core


def _rewrite(phi, lhs, rhs):
    attrs, core = _chain(phi)
    if tuple(attrs[: len(lhs)]) != tuple(lhs):
        return None
    return _wrap(list(rhs) + attrs[len(lhs):], core)


def _key(resources, uses):
    return (tuple(sorted((repr(f), canonical_key(l)) for f, l in resources)), uses)


def brute_readings(state, goal, vocab, max_depth=8, max_states=200000):
    """Labels (canonical keys) of every way to reduce ``state`` to one ``goal``.

    Explores the full state graph: every apply of every matching pair,
    every lift, every path-equation rewrite.
    """
    start = tuple((r.formula, r.label) for r in state.resources)
    eqs = [(e.eq.lhs, e.eq.rhs) for e in state.equations]
    uses0 = tuple(-1 if e.uses is None else e.uses for e in state.equations)
    seen = set()
    stack = [(start, uses0)]
    found = set()
    while stack:
        res, uses = stack.pop()
        k = _key(res, uses)
        if k in seen:
            continue
        seen.add(k)
        if len(seen) > max_states:
            raise RuntimeError("oracle state budget exceeded")
        if len(res) == 1 and res[0][0] == goal:
            found.add(canonical_key(res[0][1]))
        for i, (f, lab) in enumerate(res):
            rest = res[:i] + res[i + 1:]
            lifted = _lift(f)
            if lifted is not None:
                stack.append((rest + ((lifted, lab),), uses))
            for j, (lhs, rhs) in enumerate(eqs):
                if uses[j] == 0:
                    continue
                g = _rewrite(f, lhs, rhs)
                if g is None or g == f or len(_chain(g)[0]) > max_depth:
                    continue
                u = list(uses)
                if u[j] > 0:
                    u[j] -= 1
                stack.append((rest + ((g, lab),), tuple(u)))
            if isinstance(f, Implic):
                for j, (a, alab) in enumerate(res):
                    if j == i or a != f.antecedent:
                        continue
                    others = tuple(r for n, r in enumerate(res) if n not in (i, j))
                    if natural_type(a, vocab) == UNIT:
                        new = lab
                    elif lab is None:
                        new = None
                    else:
                        new = beta_normalize(App(lab, alab))
                    stack.append((others + ((f.consequent, new),), uses))
    return found


def brute_trees(g, tokens, max_depth=None):
    """Every tree for ``tokens``, top-down, as ``CTree.key()``-shaped tuples.

    A category may not recur over the same span on one root-to-leaf path.
    """
    n = len(tokens)
    if max_depth is None:
        max_depth = 3 * n + 3
    by_mother = {}
    for rule in g.rules:
        for present in rule.variants():
            by_mother.setdefault(rule.mother, []).append((rule, present))

    def gen(cat, i, j, depth, path):
        if depth == 0 or (cat, i, j) in path:
            return
        path = path | {(cat, i, j)}
        if j == i + 1:
            for e in g.lexicon.get(tokens[i], ()):
                if e.category == cat:
                    yield (cat, ("lex", e.word, e.category, e.line),
                           ((tokens[i], None, ()),))
        for rule, present in by_mother.get(cat, ()):
            cats = [rule.rhs[k].category for k in present]
            if len(cats) > j - i:
                continue
            for cuts in itertools.combinations(range(i + 1, j), len(cats) - 1):
                bounds = (i,) + cuts + (j,)
                spans = [(cats[k], bounds[k], bounds[k + 1]) for k in range(len(cats))]
                options = [list(gen(c, a, b, depth - 1, path)) for c, a, b in spans]
                for combo in itertools.product(*options):
                    yield (cat, ("rule", rule.line, rule.mother, present), tuple(combo))

    if n == 0:
        return set()
    return set(gen(g.start, 0, n, max_depth, frozenset()))


def natural_type_oracle(phi, contentful):
    """Clause-by-clause reference for the semantic type mapping."""
    if isinstance(phi, Atom):
        return Base(phi.name) if phi.name in contentful else UNIT
    if isinstance(phi, Modal):
        return natural_type_oracle(phi.body, contentful)
    a = natural_type_oracle(phi.antecedent, contentful)
    c = natural_type_oracle(phi.consequent, contentful)
    return c if a == UNIT else Arrow(a, c)
