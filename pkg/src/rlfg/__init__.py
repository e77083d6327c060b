"""Resource-based LFG: f-terms, a linear-logic prover with lambda labels, and a parser."""

from .formula import Atom, Implic, Modal, Vocabulary, natural_type, parse_formula
from .fterm import normalize, parse_fterm
from .grammar import Grammar, load_grammar, parse_grammar, validate
from .cparser import assemble_fterm, parse_sentence, tokenize
from .lam import beta_normalize, parse_term
from .prover import derive, derive_fterm, readings

__all__ = [
    "Atom", "Implic", "Modal", "Vocabulary", "natural_type", "parse_formula",
    "normalize", "parse_fterm", "Grammar", "load_grammar", "parse_grammar", "validate",
    "assemble_fterm", "parse_sentence", "tokenize", "beta_normalize", "parse_term",
    "derive", "derive_fterm", "readings",
]
__version__ = "0.1.0"
