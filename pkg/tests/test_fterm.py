import pytest
from hypothesis import given, strategies as st

from generators import VOCAB, random_plain_fterm, seeded
from rlfg._lexer import SyntaxError_
from rlfg.formula import parse_formula
from rlfg.fterm import (
    HOLE, Embed, Leaf, Multiset, Opt, PathEq, UnsupportedStructure,
    count_holes, distribute_factor_equal, format_boxed, format_fterm, normalize,
    parse_fterm, substitute_hole,
)
from rlfg.lam import parse_term


def f(text):
    return parse_formula(text, VOCAB)


def ft(text):
    return parse_fterm(text, VOCAB)


def _formulas(state):
    return sorted(str(r) for r in state.resources)


def test_parse_intransitive_fterm():
    t = ft(r"SUBJ(NOM, Sandy : NOM -o e), \x. snores(x) : SUBJ e -o t")
    assert t == Multiset([
        Embed("SUBJ", Multiset([Leaf(f("NOM")), Leaf(f("NOM -o e"), parse_term("Sandy"))])),
        Leaf(f("SUBJ e -o t"), parse_term(r"\x. snores(x)")),
    ])


def test_modal_on_plain_formula_folds():
    assert ft("SUBJ NOM") == Leaf(f("SUBJ NOM"))
    assert ft("XCOMP $") == Embed("XCOMP", HOLE)


def test_path_equation_and_optional():
    t = ft("opt(NOM), SUBJ = XCOMP SUBJ")
    assert t == Multiset([Opt(Leaf(f("NOM"))), PathEq(("SUBJ",), ("XCOMP", "SUBJ"))])
    assert str(PathEq(("SUBJ",), ("XCOMP", "SUBJ"))) == "SUBJ = XCOMP SUBJ"


def test_parse_errors():
    with pytest.raises(SyntaxError_):
        ft("SUBJ = e")
    with pytest.raises(SyntaxError_):
        ft("opt NOM")
    with pytest.raises(SyntaxError_):
        ft("a, , b")


def test_multiset_order_insensitive_but_counts():
    a, b = Leaf(f("NOM")), Leaf(f("ACC"))
    assert Multiset([a, b]) == Multiset([b, a])
    assert Multiset([a, a, b]) != Multiset([a, b])
    assert hash(Multiset([a, b])) == hash(Multiset([b, a]))


def test_normalize_folds_embedding():
    (state,) = normalize(ft("SUBJ(NOM, Sandy : NOM -o e)"))
    assert _formulas(state) == ["SUBJ NOM", "Sandy : SUBJ (NOM -o e)"]


def test_normalize_expands_optionals_absent_first():
    states = normalize(ft("SUBJ(opt(NOM), he : NOM -o e), OBJ(opt(ACC))"))
    assert len(states) == 4
    assert _formulas(states[0]) == ["he : SUBJ (NOM -o e)"]
    assert len(states[-1].resources) == 3


def test_normalize_collects_equations():
    (state,) = normalize(ft(r"\P. seems(P) : XCOMP t -o t, SUBJ = XCOMP SUBJ"))
    assert [str(e.eq) for e in state.equations] == ["SUBJ = XCOMP SUBJ"]
    assert state.equations[0].uses == 1
    assert normalize(ft("SUBJ = XCOMP SUBJ"), eq_uses=None)[0].equations[0].uses is None


def test_embedded_path_equation_rejected():
    with pytest.raises(UnsupportedStructure):
        normalize(Embed("XCOMP", PathEq(("SUBJ",), ("OBJ",))))


def test_unfilled_hole_rejected():
    with pytest.raises(UnsupportedStructure):
        normalize(ft("SUBJ $"))


def test_substitute_hole():
    t = ft("SUBJ(opt(NOM), $)")
    assert count_holes(t) == 1
    filled = substitute_hole(t, ft("he : NOM -o e"))
    assert count_holes(filled) == 0
    assert len(normalize(filled)) == 2


def test_format_roundtrip_examples():
    for text in [r"SUBJ(opt(NOM), $), \x. snores(x) : SUBJ e -o t",
                 "XCOMP $", "OBJ(opt(ACC), girl : ACC -o e)", "SUBJ = XCOMP SUBJ"]:
        assert ft(format_fterm(ft(text))) == ft(text)


def test_boxed_rendering():
    text = format_boxed(ft("SUBJ(NOM, Sandy : NOM -o e)"))
    assert text.splitlines() == ["SUBJ [", "  NOM", "  Sandy : NOM -o e", "]"]


@given(st.integers(0, 10**9))
def test_distribution_and_factoring(seed):
    rng = seeded(seed)
    a1, a2 = random_plain_fterm(rng), random_plain_fterm(rng)
    attr = rng.choice(sorted(VOCAB.attrs))
    factored = Embed(attr, Multiset([a1, a2]))
    distributed = Multiset([Embed(attr, a1), Embed(attr, a2)])
    assert distribute_factor_equal(factored, distributed)
    assert set(normalize(factored)) == set(normalize(distributed))


def _branch_count(t):
    if isinstance(t, Opt):
        return 1 + _branch_count(t.body)
    if isinstance(t, Embed):
        return _branch_count(t.body)
    if isinstance(t, Multiset):
        n = 1
        for c in t.items:
            n *= _branch_count(c)
        return n
    return 1


def test_flat_optionals_double_the_states():
    for k in range(4):
        t = Multiset([Leaf(f("e"), parse_term("c"))] + [Opt(Leaf(f("NOM")))] * k)
        assert len(normalize(t)) == 2 ** k


@given(st.integers(0, 10**9))
def test_normal_state_count(seed):
    t = random_plain_fterm(seeded(seed))
    # an absent optional takes any optionals nested inside it along
    assert len(normalize(t)) == _branch_count(t)


@given(st.integers(0, 10**9))
def test_plain_fterm_roundtrip(seed):
    t = random_plain_fterm(seeded(seed))
    assert set(normalize(ft(format_fterm(t)))) == set(normalize(t))
