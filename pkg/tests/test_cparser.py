import pytest
from hypothesis import given, strategies as st

from generators import random_cfg, seeded
from oracles import brute_trees
from rlfg.cparser import (
    CTree, UnknownWord, assemble_fterm, format_tree, parse_sentence, tokenize,
)
from rlfg.fterm import Multiset, format_fterm, normalize, parse_fterm, substitute_hole


def test_tokenize():
    assert tokenize("Sandy snores.") == ["Sandy", "snores"]
    assert tokenize("") == []
    assert tokenize("drengurinn kyssti stúlkuna") == ["drengurinn", "kyssti", "stúlkuna"]
    assert tokenize("Does Sandy snore ?") == ["Does", "Sandy", "snore"]


def test_english_tree(english):
    r = parse_sentence(english, ["Sandy", "snores"])
    (tree,) = r.ctrees
    assert str(tree) == "[S [NP Sandy] [VP snores]]"
    assert format_tree(tree) == "S\n  NP Sandy\n  VP snores"


def test_english_wrong_order(english):
    assert parse_sentence(english, ["snores", "Sandy"]).ctrees == []
    assert brute_trees(english, ["snores", "Sandy"]) == set()


def test_empty_input(english):
    assert parse_sentence(english, []).ctrees == []


def test_unknown_word(english):
    with pytest.raises(UnknownWord, match="Kim"):
        parse_sentence(english, ["Kim", "snores"])


def test_raising_uses_embedded_vp(icelandic):
    (tree,) = parse_sentence(icelandic, tokenize("hann virðist elska hana")).ctrees
    assert str(tree) == "[S [NP hann] [VP [V virðist] [VP [V elska] [NP hana]]]]"
    rule, present = tree.children[1].provenance
    assert present == (0, 2)


def test_intransitive_fterm(english):
    (t,) = parse_sentence(english, ["Sandy", "snores"]).fterms
    assert t == parse_fterm(r"SUBJ(NOM, Sandy : NOM -o e), \x. snores(x) : SUBJ e -o t",
                            english.vocab)


def test_quirky_raising_fterm(icelandic):
    (t,) = parse_sentence(icelandic, tokenize("hana virðist vanta peninga")).fterms
    expected = parse_fterm(
        r"SUBJ(opt(NOM), her : ACC -o e), \P. seems(P) : XCOMP t -o t, SUBJ = XCOMP SUBJ, "
        r"XCOMP(\y. \x. lack(x,y) : OBJ e -o SUBJ e -o t, OBJ ACC, SUBJ ACC, "
        r"OBJ(opt(ACC), money : ACC -o e))", icelandic.vocab)
    assert set(normalize(t)) == set(normalize(expected))


def test_identity_template(icelandic):
    tree = parse_sentence(icelandic, tokenize("drengurinn kyssti stúlkuna")).ctrees[0]
    v = tree.children[1].children[0]
    assert assemble_fterm(v, icelandic) == v.provenance.fterm


def _items(t):
    return list(t.items) if isinstance(t, Multiset) else [t]


def _check_compositional(tree, g):
    if tree.is_word() or not isinstance(tree.provenance, tuple):
        return
    rule, present = tree.provenance
    parts = []
    for child, idx in zip(tree.children, present):
        parts += _items(substitute_hole(rule.rhs[idx].template, assemble_fterm(child, g)))
        _check_compositional(child, g)
    whole = assemble_fterm(tree, g)
    assert Multiset(_items(whole)) == Multiset(parts)


def test_assembly_is_compositional(icelandic):
    for s in ["drengurinn kyssti stúlkuna", "hann virðist elska hana", "hana virðist vanta peninga"]:
        for tree in parse_sentence(icelandic, tokenize(s)).ctrees:
            _check_compositional(tree, icelandic)


def test_lexical_ambiguity_spawns_trees(english):
    from dataclasses import replace
    from copy import deepcopy
    g = deepcopy(english)
    (entry,) = g.lexicon["Sandy"]
    g.lexicon["Sandy"].append(replace(entry, line=99))
    assert len(parse_sentence(g, ["Sandy", "snores"]).ctrees) == 2


@given(st.integers(0, 10**9))
def test_matches_top_down_enumeration(seed):
    rng = seeded(seed)
    g, words = random_cfg(rng)
    tokens = [rng.choice(words) for _ in range(rng.randint(1, 5))]
    got = parse_sentence(g, tokens).ctrees
    assert {t.key() for t in got} == brute_trees(g, tokens)
    for t in got:
        assert t.words() == tokens
