import pytest

from generators import VOCAB
from rlfg.formula import Arrow, Base, parse_formula
from rlfg.fterm import Leaf, Multiset, PathEq
from rlfg.grammar import (
    Grammar, GrammarError, LexEntry, format_grammar, load_grammar, parse_grammar, validate,
)
from rlfg.lam import parse_term

HEADER = """atoms contentful: e t
atoms impotent: NOM ACC
attrs: SUBJ OBJ XCOMP
start: S
"""


def test_english_fragment(english):
    assert len(english.entries()) == 2
    assert len(english.rules) == 1
    assert validate(english) == []
    (rule,) = english.rules
    assert [i.category for i in rule.rhs] == ["NP", "VP"]


def test_icelandic_fragment(icelandic):
    words = {e.word for e in icelandic.entries()}
    core_entries = {"drengurinn", "stúlkuna", "kyssti", "drengina", "mat", "vantar",
                     "virðist", "elska"}
    assert core_entries <= words
    assert {"hann", "hana", "peninga", "vanta"} <= words
    assert len(words) == 12
    assert len(icelandic.rules) == 2
    vp = icelandic.rules[1]
    assert [i.optional for i in vp.rhs] == [False, True, True]
    assert len(vp.variants()) == 4


def test_quirky_entry_items(icelandic):
    (vantar,) = icelandic.lexicon["vantar"]
    assert isinstance(vantar.fterm, Multiset)
    assert Leaf(parse_formula("SUBJ ACC", icelandic.vocab)) in vantar.items()
    (seems,) = icelandic.lexicon["virðist"]
    assert PathEq(("SUBJ",), ("XCOMP", "SUBJ")) in seems.items()


def test_type_env_derived_from_formulas(icelandic):
    e, t = Base("e"), Base("t")
    assert icelandic.type_env["kissed"] == Arrow(e, Arrow(e, t))
    assert icelandic.type_env["seems"] == Arrow(t, t)
    assert icelandic.type_env["boy"] == e


def test_defaults():
    g = parse_grammar(HEADER + "rule S -> NP:$\nlex a NP : c : t\n")
    assert g.goal == parse_formula("t", g.vocab)
    assert g.settings.path_eq_reuse is False


def test_settings():
    g = parse_grammar(HEADER + "goal: e\nset path_eq_reuse = on\nset max_depth = 4\n"
                      "set max_nodes = 500\nrule S -> NP:$\nlex a NP : c : e\n")
    assert g.settings.path_eq_reuse and g.settings.max_depth == 4
    assert g.settings.max_nodes == 500
    assert g.goal == parse_formula("e", g.vocab)


def test_empty_file():
    with pytest.raises(GrammarError, match="no start symbol"):
        parse_grammar("")


@pytest.mark.parametrize("text, message", [
    ("atoms contentful: e t\natoms impotent: e\nstart: S\n", "duplicate"),
    (HEADER + "lex a NP : c : FOO -o e\n", "undeclared"),
    (HEADER + "lex a NP : c : NOM\n", "impotent"),
    (HEADER + "lex a NP : $\n", r"\$"),
    (HEADER + "rule S -> NP:SUBJ NOM\n", r"no \$"),
    (HEADER + "set colour = on\n", "unknown setting"),
    (HEADER + "frobnicate\n", "unrecognized"),
    (HEADER + "rule S -> [NP:$\n", "unclosed"),
])
def test_parse_errors(text, message):
    with pytest.raises(GrammarError, match=message):
        parse_grammar(text)


def test_error_location():
    with pytest.raises(GrammarError) as info:
        parse_grammar(HEADER + "\nlex a NP : c : NOM -o FOO\n")
    assert info.value.line == 6
    assert info.value.column is not None and info.value.column > 10
    assert ":6:" in str(info.value)


def test_validate_clean_entry():
    g = parse_grammar(HEADER + "rule S -> NP:SUBJ(NOM, $) VP:$\nlex Sandy NP : Sandy : NOM -o e\n"
                      "lex snores VP : \\x. snores(x) : SUBJ e -o t\n")
    assert validate(g) == []


def test_validate_arity_mismatch():
    g = parse_grammar(HEADER + "rule S -> VP:$\nlex snores VP : \\x. snores(x) : e\n")
    (finding,) = validate(g)
    assert finding.severity == "error"
    assert "λ-abstraction" in finding.message


def test_validate_labelled_impotent_leaf():
    g = Grammar(VOCAB, "S")
    g.lexicon["x"] = [LexEntry("x", "S", Leaf(parse_formula("NOM", VOCAB), parse_term("c")), 1)]
    assert [f.severity for f in validate(g)] == ["error"]


def test_validate_missing_label():
    g = parse_grammar(HEADER + "rule S -> NP:$\nlex a NP : e\n")
    assert any("no label" in f.message for f in validate(g))


def test_validate_inconsistent_constant():
    g = parse_grammar(HEADER + "rule S -> NP:$\nlex a NP : c : e\nlex b NP : c : t\n")
    assert any(f.severity == "error" for f in validate(g))


def test_validate_structure_findings():
    g = parse_grammar(HEADER + "rule S -> NP:$ VP:$\nrule Orphan -> NP:$\n"
                      "lex a NP : c : e\nlex b Adv : d : e\n")
    msgs = [(f.severity, f.message) for f in validate(g)]
    assert ("error", "rule S uses undefined category VP") in msgs
    assert any(s == "warning" and "Orphan" in m and "unreachable" in m for s, m in msgs)
    assert any(s == "warning" and "'b'" in m for s, m in msgs)


def test_load_rejects_error_findings(tmp_path):
    p = tmp_path / "bad.rlfg"
    p.write_text(HEADER + "rule S -> VP:$\nlex snores VP : \\x. snores(x) : e\n", encoding="utf-8")
    with pytest.raises(GrammarError):
        load_grammar(p)


@pytest.mark.parametrize("name", ["english", "english_agreement", "icelandic"])
def test_roundtrip(grammar_dir, name):
    g = load_grammar(grammar_dir / f"{name}.rlfg")
    again = parse_grammar(format_grammar(g))
    assert again.canonical() == g.canonical()
    assert format_grammar(again) == format_grammar(g)


def test_comments_and_blank_lines():
    g = parse_grammar("# header\n\n" + HEADER + "rule S -> NP:$   # trailing\nlex a NP : c : e\n")
    assert len(g.rules) == 1
