import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from generators import random_resource_fterm, seeded
from rlfg import kernel
from rlfg.cparser import parse_sentence, tokenize
from rlfg.fterm import normalize
from rlfg.prover import SearchLimits, _Interner

native = pytest.mark.skipif(kernel.native_build_chart is None, reason="compiled kernel not built")


def _tables(state):
    limits = SearchLimits()
    interner = _Interner(state, limits, limits.max_nodes)
    ant, cons, lift, peq = interner.tables()
    leaves = [interner.ids[r.formula] for r in state.resources]
    single = sum(1 << j for j, e in enumerate(state.equations) if e.uses == 1)
    return leaves, ant, cons, lift, peq, single


def _both(state, max_items=10**6):
    args = _tables(state)
    return (kernel.python_build_chart(*args, max_items),
            kernel.native_build_chart(*args, max_items))


def test_backend_reported():
    assert kernel.BACKEND in ("cython", "python")


@native
def test_identical_charts_on_shipped_corpus(icelandic):
    for sentence in ["drengurinn kyssti stúlkuna", "drengina vantar mat",
                     "hann virðist elska hana", "hana virðist vanta peninga",
                     "hann virðist vanta peninga"]:
        for t in parse_sentence(icelandic, tokenize(sentence)).fterms:
            for s in normalize(t):
                py, cy = _both(s)
                assert py == cy


@native
@given(st.integers(0, 10**9))
def test_identical_charts_on_random_states(seed):
    for s in normalize(random_resource_fterm(seeded(seed))):
        py, cy = _both(s)
        assert py == cy


@native
def test_overflow_flag_agrees(icelandic):
    t = parse_sentence(icelandic, tokenize("hann virðist elska hana")).fterms[0]
    s = normalize(t)[-1]
    py, cy = _both(s, max_items=5)
    assert py[2] and cy[2]
    assert py[0] == cy[0]


def test_pure_python_fallback_selected_by_environment(grammar_dir):
    env = dict(os.environ, RLFG_PURE_PYTHON="1")
    code = ("from rlfg import kernel; from rlfg.cli import main; print(kernel.BACKEND); "
            f"main(['parse', r'{grammar_dir / 'english.rlfg'}', 'Sandy snores'])")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout
    assert out.splitlines()[0] == "python"
    assert "snores(Sandy)" in out
