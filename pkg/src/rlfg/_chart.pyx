# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled type-level proof chart; same contract as ``_chart_py.build_chart``.

Items are packed into one 64-bit key (formula id << 48 | equation mask << 32
| resource mask), so callers must keep formulas < 2**16, equations <= 16
and resources <= 32.
"""

from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

cdef enum:
    LEAF = 0
    APPLY = 1
    LIFT = 2
    PATHEQ = 3

MAX_FORMULAS = 1 << 16
MAX_EQUATIONS = 16
MAX_RESOURCES = 32


cdef struct Chart:
    vector[int] f
    vector[uint64_t] m
    vector[uint64_t] q
    vector[int] e_item
    vector[int] e_rule
    vector[int] e_a
    vector[int] e_b
    unordered_map[uint64_t, int] index
    long long max_items
    bint overflow


cdef inline void add(Chart* c, int f, uint64_t m, uint64_t q, int rule, int a, int b):
    cdef uint64_t key = ((<uint64_t> f) << 48) | (q << 32) | m
    cdef int k
    if c.index.count(key) == 0:
        if <long long> c.f.size() >= c.max_items:
            c.overflow = True
            return
        k = c.f.size()
        c.index[key] = k
        c.f.push_back(f)
        c.m.push_back(m)
        c.q.push_back(q)
    else:
        k = c.index[key]
    c.e_item.push_back(k)
    c.e_rule.push_back(rule)
    c.e_a.push_back(a)
    c.e_b.push_back(b)


def build_chart(leaves, ant, cons, lift, peq, long long single_use, long long max_items,
                order="fifo"):
    if order != "fifo":
        raise ValueError("compiled kernel only supports fifo order")
    cdef int nf = len(ant)
    cdef vector[int] c_ant = ant
    cdef vector[int] c_cons = cons
    cdef vector[int] c_lift = lift
    cdef vector[vector[int]] peq_j = vector[vector[int]](nf)
    cdef vector[vector[int]] peq_f = vector[vector[int]](nf)
    cdef vector[vector[int]] by_formula = vector[vector[int]](nf)
    cdef vector[vector[int]] by_ant = vector[vector[int]](nf)
    cdef Chart c
    cdef int i, j, f, f2, a, g, fg
    cdef size_t k, n, t
    cdef uint64_t m, q, q2, bit, mg, qg
    cdef uint64_t su = <uint64_t> single_use

    for i in range(nf):
        for j, f2 in peq[i]:
            peq_j[i].push_back(j)
            peq_f[i].push_back(f2)
    c.max_items = max_items
    c.overflow = False
    for i, f in enumerate(leaves):
        add(&c, f, (<uint64_t> 1) << i, 0, LEAF, i, -1)

    k = 0
    while k < c.f.size() and not c.overflow:
        f = c.f[k]
        m = c.m[k]
        q = c.q[k]
        if c_lift[f] >= 0:
            add(&c, c_lift[f], m, q, LIFT, k, -1)
        for t in range(peq_j[f].size()):
            j = peq_j[f][t]
            f2 = peq_f[f][t]
            bit = (<uint64_t> 1) << j
            if su & bit:
                if q & bit:
                    continue
                q2 = q | bit
            else:
                q2 = q
            if f2 == f and q2 == q:
                continue
            add(&c, f2, m, q2, PATHEQ, k, j)
        a = c_ant[f]
        if a >= 0:
            n = by_formula[a].size()
            for t in range(n):
                g = by_formula[a][t]
                mg = c.m[g]
                qg = c.q[g]
                if (m & mg) == 0 and (q & qg) == 0:
                    add(&c, c_cons[f], m | mg, q | qg, APPLY, k, g)
            by_ant[a].push_back(k)
        n = by_ant[f].size()
        for t in range(n):
            g = by_ant[f][t]
            fg = c.f[g]
            mg = c.m[g]
            qg = c.q[g]
            if (m & mg) == 0 and (q & qg) == 0:
                add(&c, c_cons[fg], m | mg, q | qg, APPLY, g, k)
        by_formula[f].push_back(k)
        k += 1

    items = [(c.f[t], c.m[t], c.q[t]) for t in range(c.f.size())]
    edges = [[] for _ in range(c.f.size())]
    for t in range(c.e_item.size()):
        edges[c.e_item[t]].append((c.e_rule[t], c.e_a[t], c.e_b[t]))
    return items, edges, bool(c.overflow)
