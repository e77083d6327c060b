"""Exhaustive bottom-up chart parsing and f-term assembly."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fterm import Multiset, substitute_hole
from .grammar import LexEntry

PUNCTUATION = ".?!"


class UnknownWord(LookupError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"unknown word {word!r}")


def tokenize(sentence):
    """Whitespace split; sentence-final punctuation is dropped."""
    tokens = sentence.split()
    while tokens and tokens[-1].rstrip(PUNCTUATION) != tokens[-1]:
        stripped = tokens[-1].rstrip(PUNCTUATION)
        if stripped:
            tokens[-1] = stripped
            break
        tokens.pop()
    return tokens


@dataclass(frozen=True)
class CTree:
    label: str
    children: tuple = ()
    provenance: object = field(default=None, compare=False)

    def is_word(self):
        return not self.children and self.provenance is None

    def words(self):
        if self.is_word():
            return [self.label]
        return [w for c in self.children for w in c.words()]

    def key(self):
        """Structural identity including the rule or entry used."""
        prov = self.provenance
        if isinstance(prov, LexEntry):
            pk = ("lex", prov.word, prov.category, prov.line)
        elif prov is None:
            pk = None
        else:
            rule, present = prov
            pk = ("rule", rule.line, rule.mother, present)
        return (self.label, pk, tuple(c.key() for c in self.children))

    def __str__(self):
        if self.is_word():
            return self.label
        return f"[{self.label} {' '.join(str(c) for c in self.children)}]"


@dataclass
class ParseResult:
    tokens: list
    ctrees: list
    fterms: list


def _variants(g):
    out = []
    for rule in g.rules:
        for present in rule.variants():
            out.append((rule, present, tuple(rule.rhs[i].category for i in present)))
    return out


def _chart(g, tokens):
    n = len(tokens)
    chart = {}
    variants = _variants(g)
    unary = [v for v in variants if len(v[2]) == 1]
    longer = [v for v in variants if len(v[2]) > 1]

    def cell(i, j):
        return chart.setdefault((i, j), {})

    def splits(cats, i, j):
        """Ways to cover i..j with ``cats``, each on a non-empty span."""
        if len(cats) == 1:
            if cats[0] in chart.get((i, j), {}):
                yield ((cats[0], i, j),)
            return
        for mid in range(i + 1, j - len(cats) + 2):
            if cats[0] in chart.get((i, mid), {}):
                for rest in splits(cats[1:], mid, j):
                    yield ((cats[0], i, mid),) + rest

    for length in range(1, n + 1):
        for i in range(n - length + 1):
            j = i + length
            c = cell(i, j)
            if length == 1:
                for entry in g.lexicon.get(tokens[i], ()):
                    c.setdefault(entry.category, []).append(("lex", entry))
            for rule, present, cats in longer:
                if len(cats) > length:
                    continue
                for kids in splits(cats, i, j):
                    c.setdefault(rule.mother, []).append(("rule", (rule, present), kids))
            # unary closure; back-pointers may form cycles, trees may not
            seen = set()
            changed = True
            while changed:
                changed = False
                for rule, present, cats in unary:
                    key = (rule.line, rule.mother, present)
                    if cats[0] in c and key not in seen:
                        seen.add(key)
                        c.setdefault(rule.mother, []).append(
                            ("rule", (rule, present), ((cats[0], i, j),)))
                        changed = True
    return chart


def parse_sentence(g, tokens):
    """All c-structures rooted at the start symbol spanning ``tokens``."""
    tokens = list(tokens)
    for w in tokens:
        if w not in g.lexicon:
            raise UnknownWord(w)
    if not tokens:
        return ParseResult(tokens, [], [])
    chart = _chart(g, tokens)

    memo = {}

    def trees(cat, i, j, above):
        # only unary chains revisit a span, so the cycle guard needs just the
        # categories already used over this same span
        if cat in above:
            return []
        key = (cat, i, j, above)
        if key in memo:
            return memo[key]
        above = above | {cat}
        out = []
        for bp in chart.get((i, j), {}).get(cat, ()):
            if bp[0] == "lex":
                out.append(CTree(cat, (CTree(tokens[i]),), bp[1]))
                continue
            _, prov, kids = bp
            options = [trees(c, a, b, above if (a, b) == (i, j) else frozenset())
                       for c, a, b in kids]
            for combo in itertools.product(*options):
                out.append(CTree(cat, tuple(combo), prov))
        memo[key] = out
        return out

    found = trees(g.start, 0, len(tokens), frozenset())
    uniq = {}
    for t in found:
        uniq.setdefault(t.key(), t)
    ctrees = [uniq[k] for k in sorted(uniq, key=repr)]
    return ParseResult(tokens, ctrees, [assemble_fterm(t, g) for t in ctrees])


def _items(t):
    return list(t.items) if isinstance(t, Multiset) else [t]


def assemble_fterm(tree, g=None):
    """Multiset union over daughters of ``template[$ := daughter f-term]``."""
    prov = tree.provenance
    if isinstance(prov, LexEntry):
        return prov.fterm
    rule, present = prov
    items = []
    for child, idx in zip(tree.children, present):
        items.extend(_items(substitute_hole(rule.rhs[idx].template, assemble_fterm(child, g))))
    return items[0] if len(items) == 1 else Multiset(items)


def format_tree(tree, indent=0):
    """Indented c-structure, one node per line."""
    pad = "  " * indent
    if tree.is_word():
        return pad + tree.label
    if len(tree.children) == 1 and tree.children[0].is_word():
        return f"{pad}{tree.label} {tree.children[0].label}"
    return "\n".join([pad + tree.label] + [format_tree(c, indent + 1) for c in tree.children])
