"""Command-line front end: ``rlfg parse`` and ``rlfg corpus``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ._lexer import SyntaxError_
from .cparser import UnknownWord, format_tree, parse_sentence, tokenize
from .formula import format_formula
from .fterm import UnsupportedStructure, format_boxed, format_fterm
from .grammar import GrammarError, load_grammar
from .lam import beta_normalize, canonical_key, format_term, parse_term
from .prover import (
    SearchBudgetExceeded,
    SearchLimits,
    derive_fterm,
    diagnose,
    format_proof,
    readings,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

CASE_SCHEMA = {
    "type": "object",
    "required": ["sentence", "verdict", "cstructures", "readings", "derivations",
                 "diagnostics", "elapsed_ms"],
    "properties": {
        "sentence": {"type": "string"},
        "verdict": {"enum": ["grammatical", "no-derivation", "no-cstructure"]},
        "cstructures": {"type": "integer", "minimum": 0},
        "readings": {"type": "array", "items": {"type": "string"}},
        "derivations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["steps", "conclusion"],
                "properties": {
                    "steps": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["rule", "inputs", "output"],
                            "properties": {
                                "rule": {"enum": ["apply", "lift", "patheq"]},
                                "inputs": {"type": "array", "items": {"type": "integer"}},
                                "output": {
                                    "type": "object",
                                    "required": ["formula", "label"],
                                    "properties": {
                                        "formula": {"type": "string"},
                                        "label": {"type": ["string", "null"]},
                                    },
                                },
                            },
                        },
                    },
                    "conclusion": {"type": "string"},
                },
            },
        },
        "diagnostics": {"type": "array", "items": {"type": "string"}},
        "elapsed_ms": {"type": "number"},
    },
}


class CorpusError(ValueError):
    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass
class Options:
    raw_lambda: bool = False
    show_proof: bool = False
    show_fterm: bool = False
    timing: bool = False
    limits: SearchLimits = field(default_factory=SearchLimits)
    path_eq_reuse: bool = False


@dataclass
class Report:
    sentence: str
    verdict: str
    cstructures: list = field(default_factory=list)
    fterms: list = field(default_factory=list)
    readings: list = field(default_factory=list)
    derivations: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    elapsed_ms: float = 0.0
    budget_exceeded: bool = False


def _label_text(label, opts):
    return None if label is None else format_term(label, sugar=not opts.raw_lambda)


def _resource_text(r, opts):
    f = format_formula(r.formula)
    return f if r.label is None else f"{_label_text(r.label, opts)} : {f}"


def analyze(g, sentence, opts):
    """tokenize, parse, assemble, normalize, derive; never raises on input."""
    started = time.perf_counter()
    report = Report(sentence, "no-cstructure")
    try:
        result = parse_sentence(g, tokenize(sentence))
    except UnknownWord as exc:
        report.diagnostics = [str(exc)]
        return _finish(report, started, opts)
    report.cstructures = result.ctrees
    report.fterms = result.fterms
    if not result.ctrees:
        report.diagnostics = ["no c-structure spans the sentence"]
        return _finish(report, started, opts)

    derivations = []
    diag = []
    try:
        for n, fterm in enumerate(result.fterms):
            branches = derive_fterm(fterm, g.goal, g.vocab, opts.limits, opts.path_eq_reuse)
            found = [d for b in branches for d in b.derivations]
            derivations.extend(found)
            if not found:
                lines = diagnose([b.state for b in branches], g.goal, g.vocab, opts.limits,
                                 [b.chart for b in branches])
                prefix = f"tree {n + 1}: " if len(result.fterms) > 1 else ""
                diag.extend(prefix + line for line in lines)
    except SearchBudgetExceeded as exc:
        report.verdict = "no-derivation"
        report.budget_exceeded = True
        report.diagnostics = [f"search budget exceeded: {exc}"] + list(exc.diagnostics or [])
        return _finish(report, started, opts)
    except UnsupportedStructure as exc:
        report.verdict = "no-derivation"
        report.diagnostics = [f"unsupported f-term: {exc}"]
        return _finish(report, started, opts)

    report.derivations = derivations
    report.readings = [beta_normalize(m) if m is not None else None for m in readings(derivations)]
    if derivations:
        report.verdict = "grammatical"
    else:
        report.verdict = "no-derivation"
        report.diagnostics = diag
    return _finish(report, started, opts)


def _finish(report, started, opts):
    report.elapsed_ms = (time.perf_counter() - started) * 1000.0
    return report


def report_json(report, opts):
    return {
        "sentence": report.sentence,
        "verdict": report.verdict,
        "cstructures": len(report.cstructures),
        "readings": [_label_text(m, opts) or "" for m in report.readings],
        "derivations": [
            {
                "steps": [
                    {
                        "rule": s.rule,
                        "inputs": list(s.inputs),
                        "output": {
                            "formula": format_formula(s.result.formula),
                            "label": _label_text(s.result.label, opts),
                        },
                    }
                    for s in d.steps
                ],
                "conclusion": _resource_text(d.conclusion, opts),
            }
            for d in report.derivations
        ],
        "diagnostics": list(report.diagnostics),
        # wall-clock time breaks byte-identical output, so it is opt-in
        "elapsed_ms": round(report.elapsed_ms, 3) if opts.timing else 0,
    }


def report_text(report, opts):
    lines = [f"sentence: {report.sentence}", f"verdict: {report.verdict}",
             f"c-structures: {len(report.cstructures)}"]
    for n, (tree, fterm) in enumerate(zip(report.cstructures, report.fterms), 1):
        lines.append(f"  {n}. {tree}")
        if opts.show_fterm:
            lines.append("     f-term: " + format_fterm(fterm))
            lines.extend("       " + x for x in format_boxed(fterm).splitlines())
    if report.readings:
        lines.append("readings:")
        lines.extend("  " + (_label_text(m, opts) or "-") for m in report.readings)
    lines.append(f"derivations: {len(report.derivations)}")
    if opts.show_proof:
        for n, d in enumerate(report.derivations, 1):
            lines.append(f"  derivation {n}:")
            lines.extend("    " + x for x in
                         format_proof(d.proof, d.initial, opts.raw_lambda).splitlines())
    if report.diagnostics:
        lines.append("diagnostics:")
        lines.extend("  " + d for d in report.diagnostics)
    if opts.timing:
        lines.append(f"elapsed: {report.elapsed_ms:.1f} ms")
    return "\n".join(lines)


# -- corpus -----------------------------------------------------------------


@dataclass
class CorpusCase:
    kind: str  # ok | bad | noparse
    name: str
    sentence: str
    expected: list
    line: int

    @property
    def expected_verdict(self):
        return {"ok": "grammatical", "bad": "no-derivation", "noparse": "no-cstructure"}[self.kind]


def split_lambdas(text):
    """Split at commas outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_corpus(text):
    cases = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        head = fields[0].split()
        if len(head) != 2 or head[0] not in ("ok", "bad", "noparse"):
            raise CorpusError("expected '<ok|bad|noparse> <name> | <sentence>'", lineno)
        kind, name = head
        if kind == "ok":
            if len(fields) != 3 or not fields[2]:
                raise CorpusError("'ok' cases need '| <sentence> | <readings>'", lineno)
            try:
                expected = [beta_normalize(parse_term(t)) for t in split_lambdas(fields[2])]
            except SyntaxError_ as exc:
                raise CorpusError(f"bad expected reading: {exc}", lineno) from None
        else:
            if len(fields) != 2:
                raise CorpusError(f"'{kind}' cases take exactly one '| <sentence>'", lineno)
            expected = []
        if not fields[1]:
            raise CorpusError("empty sentence", lineno)
        cases.append(CorpusCase(kind, name, fields[1], expected, lineno))
    return cases


def check_case(case, report):
    if report.verdict != case.expected_verdict:
        return False
    if case.kind == "ok":
        want = {canonical_key(m) for m in case.expected}
        got = {canonical_key(m) for m in report.readings}
        return want == got
    return True


def run_corpus(g, cases, opts, jobs=1):
    """Reports in input order; cases are independent so they run in a pool."""
    if jobs > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda c: analyze(g, c.sentence, opts), cases))
    return [analyze(g, c.sentence, opts) for c in cases]


# -- entry point ------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="rlfg", description="Resource-based LFG parser and prover.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--show-proof", action="store_true", help="print derivation trees")
    common.add_argument("--show-fterm", action="store_true", help="print assembled f-terms")
    common.add_argument("--raw-lambda", action="store_true", help="curried lambda output")
    common.add_argument("--max-nodes", type=int, metavar="N", help="search budget")
    common.add_argument("--max-depth", type=int, metavar="N", help="modal prefix depth bound")
    common.add_argument("--path-eq-reuse", action="store_true",
                        help="let path equations be used any number of times")
    common.add_argument("--timing", action="store_true", help="report elapsed time")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("parse", parents=[common], help="analyse one sentence")
    sp.add_argument("grammar")
    sp.add_argument("sentence")
    sc = sub.add_parser("corpus", parents=[common], help="check a corpus of expectations")
    sc.add_argument("grammar")
    sc.add_argument("corpus")
    sc.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads")
    return p


def _options(args, g):
    s = g.settings
    max_nodes = args.max_nodes if args.max_nodes is not None else s.max_nodes
    max_depth = args.max_depth if args.max_depth is not None else s.max_depth
    if max_nodes < 1 or max_depth < 1:
        raise ValueError("--max-nodes and --max-depth must be positive")
    return Options(
        raw_lambda=args.raw_lambda,
        show_proof=args.show_proof,
        show_fterm=args.show_fterm,
        timing=args.timing,
        limits=SearchLimits(max_nodes, max_depth),
        path_eq_reuse=args.path_eq_reuse or s.path_eq_reuse,
    )


def _dump(obj):
    return json.dumps(obj, ensure_ascii=False, indent=2)


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        g = load_grammar(args.grammar)
        opts = _options(args, g)
    except (OSError, GrammarError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE

    if args.command == "parse":
        report = analyze(g, args.sentence, opts)
        print(_dump(report_json(report, opts)) if args.json else report_text(report, opts),
              file=out)
        return EXIT_BUDGET if report.budget_exceeded else EXIT_OK

    try:
        cases = parse_corpus(Path(args.corpus).read_text(encoding="utf-8"))
    except (OSError, CorpusError) as exc:
        print(f"error: {args.corpus}: {exc}", file=err)
        return EXIT_USAGE
    reports = run_corpus(g, cases, opts, max(1, args.jobs))
    passed = [check_case(c, r) for c, r in zip(cases, reports)]
    if args.json:
        entries = []
        for c, r, ok in zip(cases, reports, passed):
            entry = report_json(r, opts)
            entry.update(name=c.name, expected=c.expected_verdict, passed=ok)
            entries.append(entry)
        print(_dump({"cases": entries, "total": len(cases), "passed": sum(passed),
                     "failed": len(cases) - sum(passed)}), file=out)
    else:
        width = max([len(c.name) for c in cases] + [4])
        for c, r, ok in zip(cases, reports, passed):
            shown = ", ".join(_label_text(m, opts) or "-" for m in r.readings)
            if not shown and r.diagnostics:
                shown = "; ".join(r.diagnostics)
            print(f"{'PASS' if ok else 'FAIL'}  {c.name:<{width}}  {r.verdict:<13}  {shown}",
                  file=out)
            if not ok:
                print(f"      expected {c.expected_verdict}"
                      + (": " + ", ".join(format_term(m, not opts.raw_lambda) for m in c.expected)
                         if c.expected else ""), file=out)
            if args.show_proof or args.show_fterm:
                print("\n".join("      " + x for x in report_text(r, opts).splitlines()), file=out)
        print(f"{len(cases)} cases: {sum(passed)} passed, {len(cases) - sum(passed)} failed",
              file=out)
    if any(r.budget_exceeded for r in reports):
        return EXIT_BUDGET
    return EXIT_OK if all(passed) else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
