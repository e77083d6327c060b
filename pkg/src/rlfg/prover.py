"""Proof search over flat resource states.

The search runs in two passes.  A type-level chart (see :mod:`rlfg.kernel`)
closes the initial resources under implication application, modal lifting
and path-equation restructuring, keeping every way each item was built.
Proof trees are then read back from the items that reach the goal and
labelled bottom-up.  Because items record *which* resources and equations
they used rather than the order of steps, derivations that differ only in
the interleaving of independent steps coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import kernel
from ._chart_py import APPLY, LEAF, LIFT, PATHEQ
from .formula import Implic, Modal, format_formula, modal_prefix, natural_type, split_prefix
from .fterm import NormalState, Resource, normalize
from .lam import canonical_key, format_term, label_apply

DEFAULT_MAX_NODES = 10**6
DEFAULT_MAX_DEPTH = 8


class NotApplicable(ValueError):
    """A rule does not apply to the given resources; search moves on."""


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = DEFAULT_MAX_NODES
    max_depth: int = DEFAULT_MAX_DEPTH


# -- single-step rules ------------------------------------------------------


def lift_formula(phi):
    """Distribute the modal directly above the top implication over it.

    ``f (a -o b)`` becomes ``f a -o f b``.  When the implication sits under
    several modals (``XCOMP OBJ (ACC -o e)``) the innermost one moves first;
    repeated lifts push the whole prefix through.  Returns None when the
    formula is not a modal chain over an implication.
    """
    attrs, core = split_prefix(phi)
    if not attrs or not isinstance(core, Implic):
        return None
    f = attrs[-1]
    lifted = Implic(Modal(f, core.antecedent), Modal(f, core.consequent))
    return modal_prefix(lifted, attrs[:-1])


def lifted_attr(phi):
    attrs, _ = split_prefix(phi)
    return attrs[-1]


def restructure_formula(phi, eq):
    """Rewrite the leading ``eq.lhs`` prefix of ``phi`` to ``eq.rhs``."""
    attrs, core = split_prefix(phi)
    n = len(eq.lhs)
    if attrs[:n] != eq.lhs:
        return None
    return modal_prefix(core, eq.rhs + attrs[n:])


def lift(r, vocab=None):
    new = lift_formula(r.formula)
    if new is None:
        raise NotApplicable(f"{format_formula(r.formula)} is not a modal over an implication")
    if vocab is not None:
        assert natural_type(new, vocab) == natural_type(r.formula, vocab)
    return Resource(new, r.label, r.id)


def _next_id(state):
    return max((r.id for r in state.resources), default=-1) + 1


def _find(state, rid):
    for r in state.resources:
        if r.id == rid:
            return r
    raise NotApplicable(f"no resource with id {rid}")


def apply_implication(state, fun, arg, vocab):
    f = _find(state, fun)
    a = _find(state, arg)
    if fun == arg or not isinstance(f.formula, Implic) or f.formula.antecedent != a.formula:
        raise NotApplicable(f"{format_formula(f.formula)} cannot consume {format_formula(a.formula)}")
    label = label_apply(f.label, f.formula, a.label, vocab)
    rest = tuple(r for r in state.resources if r.id not in (fun, arg))
    out = Resource(f.formula.consequent, label, _next_id(state))
    return NormalState(rest + (out,), state.equations)


def apply_path_eq(state, eq, rid):
    e = state.equations[eq]
    if e.uses is not None and e.uses < 1:
        raise NotApplicable(f"equation {e.eq} already used")
    r = _find(state, rid)
    new = restructure_formula(r.formula, e.eq)
    if new is None:
        raise NotApplicable(f"{format_formula(r.formula)} has no {' '.join(e.eq.lhs)} prefix")
    eqs = list(state.equations)
    if e.uses is not None:
        eqs[eq] = type(e)(e.eq, e.uses - 1)
    rest = tuple(x for x in state.resources if x.id != rid)
    return NormalState(rest + (Resource(new, r.label, _next_id(state)),), tuple(eqs))


# -- proof trees ------------------------------------------------------------


@dataclass(frozen=True)
class Proof:
    """Natural-deduction tree node; ``rule`` is leaf/apply/lift/patheq."""

    rule: str
    formula: object
    label: object
    premises: tuple = ()
    resource: Optional[int] = None  # leaf: initial resource id
    attr: Optional[str] = None  # lift: attribute moved
    equation: Optional[int] = None  # patheq: equation index

    def nodes(self):
        for p in self.premises:
            yield from p.nodes()
        yield self

    def signature(self):
        return (self.rule, self.resource, self.attr, self.equation,
                tuple(p.signature() for p in self.premises))


@dataclass(frozen=True)
class Step:
    rule: str  # "apply" | "lift" | "patheq"
    inputs: tuple
    result: Resource
    attr: Optional[str] = None
    equation: Optional[int] = None


@dataclass(frozen=True)
class Derivation:
    initial: NormalState
    steps: tuple
    conclusion: Resource
    proof: Proof = field(compare=False)

    def count(self, rule):
        return sum(1 for s in self.steps if s.rule == rule)

    def replay(self, vocab):
        """Re-run the steps from the initial state; returns the final state."""
        state = self.initial
        for s in self.steps:
            if s.rule == "apply":
                state = apply_implication(state, s.inputs[0], s.inputs[1], vocab)
            elif s.rule == "lift":
                r = _find(state, s.inputs[0])
                lifted = lift(r, vocab)
                rest = tuple(x for x in state.resources if x.id != r.id)
                state = NormalState(rest + (Resource(lifted.formula, r.label, _next_id(state)),),
                                    state.equations)
            else:
                state = apply_path_eq(state, s.equation, s.inputs[0])
            got = state.resources[-1]
            if (got.formula, got.id) != (s.result.formula, s.result.id) or \
                    canonical_key(got.label) != canonical_key(s.result.label):
                raise AssertionError(f"replay diverged at {s}")
        return state


def linearize(proof, state):
    """Post-order step list for ``proof`` over ``state``'s resource ids."""
    steps = []
    next_id = _next_id(state)

    def walk(p):
        nonlocal next_id
        if p.rule == "leaf":
            return p.resource
        ins = tuple(walk(q) for q in p.premises)
        rid = next_id
        next_id += 1
        steps.append(Step(p.rule, ins, Resource(p.formula, p.label, rid), p.attr, p.equation))
        return rid

    root = walk(proof)
    if not steps:
        conclusion = _find(state, root)
    else:
        conclusion = steps[-1].result
    return tuple(steps), conclusion


# -- search -----------------------------------------------------------------


class _Interner:
    """Numbers every formula reachable from the initial resources."""

    def __init__(self, state, limits, budget):
        self.ids = {}
        self.formulas = []
        self.equations = [e.eq for e in state.equations]
        self.limits = limits
        self.budget = budget
        self.depth_limited = False
        self.ant, self.cons, self.lift, self.peq = [], [], [], []
        self.filled = []
        pending = [self.intern(r.formula) for r in state.resources]
        while pending:
            self._fill(pending.pop(), pending)

    def intern(self, phi):
        k = self.ids.get(phi)
        if k is None:
            if len(self.formulas) >= self.budget:
                raise SearchBudgetExceeded(
                    f"more than {self.budget} distinct formulas during search")
            k = len(self.formulas)
            self.ids[phi] = k
            self.formulas.append(phi)
            self.ant.append(-1)
            self.cons.append(-1)
            self.lift.append(-1)
            self.peq.append([])
            self.filled.append(False)
        return k

    def _fill(self, k, pending):
        if self.filled[k]:
            return
        self.filled[k] = True
        phi = self.formulas[k]

        def reach(psi):
            j = self.intern(psi)
            if not self.filled[j]:
                pending.append(j)
            return j

        if isinstance(phi, Implic):
            self.ant[k] = self.intern(phi.antecedent)
            self.cons[k] = reach(phi.consequent)
        lifted = lift_formula(phi)
        if lifted is not None:
            self.lift[k] = reach(lifted)
        for j, eq in enumerate(self.equations):
            new = restructure_formula(phi, eq)
            if new is None or new == phi:
                continue
            if len(split_prefix(new)[0]) > self.limits.max_depth:
                self.depth_limited = True
                continue
            self.peq[k].append((j, reach(new)))

    def tables(self):
        return self.ant, self.cons, self.lift, self.peq


@dataclass
class Chart:
    state: NormalState
    goal: object
    formulas: list
    items: list
    edges: list
    goal_id: Optional[int]
    depth_limited: bool

    def full_mask(self):
        return (1 << len(self.state.resources)) - 1

    def goal_items(self):
        full = self.full_mask()
        return [k for k, (f, m, _) in enumerate(self.items) if f == self.goal_id and m == full]


def build_chart(state, goal, limits=SearchLimits(), order="fifo"):
    interner = _Interner(state, limits, limits.max_nodes)
    goal_id = interner.ids.get(goal)
    ant, cons, lift_t, peq = interner.tables()
    single_use = 0
    for j, e in enumerate(state.equations):
        if e.uses is not None:
            if e.uses > 1:
                raise ValueError("equation budgets above 1 are not supported")
            if e.uses == 1:
                single_use |= 1 << j
    # exhausted equations (uses == 0) are masked out of the rewrite table
    dead = [j for j, e in enumerate(state.equations) if e.uses == 0]
    if dead:
        peq = [[(j, f) for j, f in row if j not in dead] for row in peq]
    leaves = [interner.ids[r.formula] for r in state.resources]
    items, edges, overflow = kernel.build_chart(
        leaves, ant, cons, lift_t, peq, single_use, limits.max_nodes, order)
    if overflow:
        raise SearchBudgetExceeded(
            f"search exceeded {limits.max_nodes} nodes",
            [f"state had {len(state.resources)} resources"])
    return Chart(state, goal, interner.formulas, items, edges, goal_id, interner.depth_limited)


def _proofs(chart, vocab, budget):
    memo = {}
    resources = chart.state.resources
    count = 0

    def proofs(k):
        nonlocal count
        if k in memo:
            return memo[k]
        memo[k] = []  # cycle guard; the chart is acyclic for single-use equations
        out = []
        phi = chart.formulas[chart.items[k][0]]
        for rule, a, b in chart.edges[k]:
            if rule == LEAF:
                r = resources[a]
                out.append(Proof("leaf", phi, r.label, resource=r.id))
            elif rule == APPLY:
                for pf in proofs(a):
                    for pa in proofs(b):
                        label = label_apply(pf.label, pf.formula, pa.label, vocab)
                        out.append(Proof("apply", phi, label, (pf, pa)))
            elif rule == LIFT:
                for p in proofs(a):
                    out.append(Proof("lift", phi, p.label, (p,), attr=lifted_attr(p.formula)))
            else:
                for p in proofs(a):
                    out.append(Proof("patheq", phi, p.label, (p,), equation=b))
            count += len(out)
            if count > budget:
                raise SearchBudgetExceeded(f"more than {budget} proof nodes")
        memo[k] = out
        return out

    return proofs


def _derivations(chart, vocab, limits):
    proofs = _proofs(chart, vocab, limits.max_nodes)
    out = []
    for k in chart.goal_items():
        for p in proofs(k):
            steps, conclusion = linearize(p, chart.state)
            out.append(Derivation(chart.state, steps, conclusion, p))
    out.sort(key=_step_key)
    return out


def derive(state, goal, vocab, limits=SearchLimits(), order="fifo"):
    """Every derivation of exactly one ``goal`` resource from ``state``.

    Derivations are distinct proof trees; reorderings of independent steps
    are the same tree and are reported once.
    """
    return _derivations(build_chart(state, goal, limits, order), vocab, limits)


def _step_key(d):
    return tuple((s.rule, s.inputs, s.attr or "", -1 if s.equation is None else s.equation)
                 for s in d.steps)


def readings(derivations):
    """Distinct conclusion labels, alpha-deduplicated, in canonical order."""
    seen = {}
    for d in derivations:
        seen.setdefault(canonical_key(d.conclusion.label), d.conclusion.label)
    return [seen[k] for k in sorted(seen)]


@dataclass
class BranchResult:
    state: NormalState
    derivations: list
    chart: Chart


def derive_states(states, goal, vocab, limits=SearchLimits()):
    """Derive over every distinct optional-resolution branch."""
    out = []
    seen = set()
    for s in states:
        if s in seen:
            continue
        seen.add(s)
        chart = build_chart(s, goal, limits)
        out.append(BranchResult(s, _derivations(chart, vocab, limits), chart))
    return out


def derive_fterm(t, goal, vocab, limits=SearchLimits(), path_eq_reuse=False):
    return derive_states(normalize(t, None if path_eq_reuse else 1), goal, vocab, limits)


# -- diagnostics ------------------------------------------------------------


def _popcount(x):
    return bin(x).count("1")


def _describe(resources):
    return ", ".join(str(r) for r in sorted(resources, key=lambda r: r.content_key()))


def diagnose(states, goal, vocab=None, limits=SearchLimits(), charts=None):
    """Advisory report on why no branch reduces to a single ``goal`` resource.

    Returns the leftover resources of the best partial results, as lines like
    ``unconsumed: SUBJ ACC``.  Empty when some branch succeeds.
    """
    if isinstance(states, NormalState):
        states = [states]
    if charts is None:
        charts = [build_chart(s, goal, limits) for s in states]
    if any(c.goal_items() for c in charts):
        return []
    notes = []
    if any(c.depth_limited for c in charts):
        notes.append(f"prefix depth bound {limits.max_depth} reached; some restructurings skipped")
    complete = []  # (leftover count, leftover resources)
    partial = []  # (leftover count, leftover, unsatisfied antecedent)
    for c in charts:
        res = c.state.resources
        for f, m, _ in c.items:
            left = tuple(r for i, r in enumerate(res) if not (m >> i) & 1)
            if f == c.goal_id:
                complete.append((len(left), left))
            else:
                phi = c.formulas[f]
                need = phi.antecedent if isinstance(phi, Implic) else None
                partial.append((len(left), left, need, phi))
    lines = set()
    if complete:
        best = min(n for n, _ in complete)
        for n, left in complete:
            if n == best:
                lines.add(f"unconsumed: {_describe(left)}")
    elif partial:
        best = min(n for n, *_ in partial)
        for n, left, need, phi in partial:
            if n != best:
                continue
            if need is not None:
                lines.add(f"unsatisfied: {format_formula(need)} (needed by {format_formula(phi)})")
            if left:
                lines.add(f"unconsumed: {_describe(left)}")
            else:
                lines.add(f"result is {format_formula(phi)}, not {format_formula(goal)}")
    return sorted(lines) + notes


# -- rendering --------------------------------------------------------------


def format_proof(proof, state=None, raw=False, indent=0):
    """Indented natural-deduction tree, conclusion first."""
    pad = "  " * indent
    f = format_formula(proof.formula)
    head = f if proof.label is None else f"{format_term(proof.label, sugar=not raw)} : {f}"
    if proof.rule == "leaf":
        tag = ""
    elif proof.rule == "lift":
        tag = f"   [lift {proof.attr}]"
    elif proof.rule == "patheq":
        eq = state.equations[proof.equation].eq if state is not None else f"#{proof.equation}"
        tag = f"   [patheq {eq}]"
    else:
        tag = "   [apply]"
    lines = [pad + head + tag]
    for p in proof.premises:
        lines.append(format_proof(p, state, raw, indent + 1))
    if proof.rule == "patheq" and state is not None:
        lines.append("  " * (indent + 1) + str(state.equations[proof.equation].eq))
    return "\n".join(lines)
