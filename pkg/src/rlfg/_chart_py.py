"""Pure-Python type-level proof chart (fallback for the compiled kernel).

Items are ``(formula id, resource mask, equation mask)`` triples; every
way of producing an item is kept as a hyperedge so proof trees can be
read back out afterwards.  Formulas are pre-interned integers: the
caller supplies, per formula id, its antecedent/consequent ids (or -1),
the id it lifts to (or -1) and the ``(equation, result id)`` pairs its
path-equation rewrites produce.
"""

from collections import deque

LEAF, APPLY, LIFT, PATHEQ = 0, 1, 2, 3


def build_chart(leaves, ant, cons, lift, peq, single_use, max_items, order="fifo"):
    """Close ``leaves`` under apply/lift/path-equation steps.

    Returns ``(items, edges, overflow)``; ``edges[k]`` lists
    ``(rule, a, b)`` hyperedges producing item ``k``.
    """
    items = []
    edges = []
    index = {}
    by_formula = {}
    by_ant = {}
    agenda = deque()
    overflow = False

    def add(f, m, q, edge):
        nonlocal overflow
        key = (f, m, q)
        k = index.get(key)
        if k is None:
            if len(items) >= max_items:
                overflow = True
                return
            k = len(items)
            index[key] = k
            items.append(key)
            edges.append([])
            agenda.append(k)
        edges[k].append(edge)

    for i, f in enumerate(leaves):
        add(f, 1 << i, 0, (LEAF, i, -1))

    pop = agenda.popleft if order == "fifo" else agenda.pop
    while agenda and not overflow:
        k = pop()
        f, m, q = items[k]
        if lift[f] >= 0:
            add(lift[f], m, q, (LIFT, k, -1))
        for j, f2 in peq[f]:
            bit = 1 << j
            if single_use & bit:
                if q & bit:
                    continue
                q2 = q | bit
            else:
                q2 = q
            if f2 == f and q2 == q:
                continue
            add(f2, m, q2, (PATHEQ, k, j))
        a = ant[f]
        if a >= 0:
            for g in by_formula.get(a, ()):
                _, mg, qg = items[g]
                if not (m & mg) and not (q & qg):
                    add(cons[f], m | mg, q | qg, (APPLY, k, g))
            by_ant.setdefault(a, []).append(k)
        for g in by_ant.get(f, ()):
            fg, mg, qg = items[g]
            if not (m & mg) and not (q & qg):
                add(cons[fg], m | mg, q | qg, (APPLY, g, k))
        by_formula.setdefault(f, []).append(k)
    return items, edges, overflow
