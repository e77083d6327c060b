import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

GRAMMARS = Path(__file__).resolve().parents[1] / "src" / "rlfg" / "grammars"
ACCEPTANCE_LINES = []

# exact-count sweeps live in test_acceptance.py; these keep the suite quick
settings.register_profile("default", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grammar_dir():
    return GRAMMARS


@pytest.fixture(scope="session")
def english():
    from rlfg.grammar import load_grammar
    return load_grammar(GRAMMARS / "english.rlfg")


@pytest.fixture(scope="session")
def icelandic():
    from rlfg.grammar import load_grammar
    return load_grammar(GRAMMARS / "icelandic.rlfg")


@pytest.fixture(scope="session")
def agreement():
    from rlfg.grammar import load_grammar
    return load_grammar(GRAMMARS / "english_agreement.rlfg")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
