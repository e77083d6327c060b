"""Compare the compiled chart kernel with the pure-Python fallback.

    python3 benchmarks/bench_kernel.py [--repeat N]

Workloads are the normalized states of the shipped Icelandic corpus plus a
synthetic coordination-style bag whose chart grows combinatorially.
"""

import argparse
import sys
import timeit
from pathlib import Path

from rlfg import kernel
from rlfg.cparser import parse_sentence, tokenize
from rlfg.formula import Vocabulary
from rlfg.fterm import normalize, parse_fterm
from rlfg.grammar import load_grammar
from rlfg.prover import SearchLimits, _Interner

GRAMMARS = Path(__file__).resolve().parents[1] / "src" / "rlfg" / "grammars"


def tables(state):
    limits = SearchLimits()
    interner = _Interner(state, limits, limits.max_nodes)
    ant, cons, lift, peq = interner.tables()
    leaves = [interner.ids[r.formula] for r in state.resources]
    single = sum(1 << j for j, e in enumerate(state.equations) if e.uses == 1)
    return leaves, ant, cons, lift, peq, single


def icelandic_states():
    g = load_grammar(GRAMMARS / "icelandic.rlfg")
    out = []
    for line in (GRAMMARS / "icelandic.corpus").read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            for t in parse_sentence(g, tokenize(line.split("|")[1].strip())).fterms:
                out.extend(normalize(t))
    return out


def bag_state(n):
    """n entities and n/2 two-place predicates conjoined into t: many partial items."""
    vocab = Vocabulary(contentful=frozenset({"e", "t"}), attrs=frozenset({"SUBJ"}))
    items = [f"a{i} : SUBJ e" for i in range(n)]
    items += [rf"\y. \x. r{i}(x,y) : SUBJ e -o SUBJ e -o t" for i in range(n // 2 - 1)]
    items += [rf"\p. \q. and{i}(p,q) : t -o t -o t" for i in range(n // 2 - 2)]
    (state,) = normalize(parse_fterm(", ".join(items), vocab))
    return state


def run(label, workload, repeat):
    args = [tables(s) for s in workload]

    def py():
        for a in args:
            kernel.python_build_chart(*a, 10**7)

    def cy():
        for a in args:
            kernel.native_build_chart(*a, 10**7)

    items = sum(len(kernel.python_build_chart(*a, 10**7)[0]) for a in args)
    t_py = min(timeit.repeat(py, number=1, repeat=repeat))
    t_cy = min(timeit.repeat(cy, number=1, repeat=repeat))
    print(f"{label:<24} {items:>9} {t_py * 1e3:>10.2f} {t_cy * 1e3:>10.2f} {t_py / t_cy:>8.1f}x", flush=True)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if kernel.native_build_chart is None:
        print("compiled kernel not available; build with `pip install -e .`", file=sys.stderr)
        return 1
    print(f"{'workload':<24} {'items':>9} {'python ms':>10} {'cython ms':>10} {'speedup':>9}")
    run("icelandic corpus", icelandic_states(), args.repeat)
    for n in (6, 8, 10):
        run(f"bag of {n} entities", [bag_state(n)], args.repeat)
    return 0


if __name__ == "__main__":
    sys.exit(main())
