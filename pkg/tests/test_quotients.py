from __future__ import annotations

import random
from collections import Counter
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.labelled import base_index
from artifact.quotients import (
    EXCEPTIONAL,
    MULTICIRCULANT,
    artefact_failure,
    compute_Qstar,
    cover_is_vertex_transitive,
    diagram_failure,
    enumerate_Q0,
    filter_diagram,
    named_quotients,
    probe_candidate,
    probe_index_base,
    quotient_name,
    select_Q,
)
from artifact.symmetry import automorphism_group, canonical_form
from artifact.verify import random_ccv
from artifact.voltage import cover, make_ccv


@pytest.fixture(scope="module")
def q0():
    return enumerate_Q0()


@pytest.fixture(scope="module")
def qstar():
    return compute_Qstar()


def brute_q0_count(n: int) -> int:
    """Connected labelled multigraphs with label sum <= 3 per vertex, counted
    by minimising an edge multiset over all vertex permutations."""
    items = [("s", v, a) for v in range(n) for a in (1, 2, 3)]
    items += [("l", v, a, b) for v in range(n) for a in (1, 2) for b in (a, 2) if a + b <= 3]
    items += [("k", u, v, a, b) for u in range(n) for v in range(u + 1, n) for a in (1, 2, 3) for b in (1, 2, 3)]

    def load(it):
        if it[0] == "s":
            return {it[1]: it[2]}
        if it[0] == "l":
            return {it[1]: it[2] + it[3]}
        return {it[1]: it[3], it[2]: it[4]}

    def image(it, p):
        if it[0] != "k":
            return (it[0], p[it[1]]) + it[2:]
        u, v = p[it[1]], p[it[2]]
        return ("k", u, v, it[3], it[4]) if u < v else ("k", v, u, it[4], it[3])

    def connected(chosen):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for it in chosen:
            if it[0] == "k":
                parent[find(it[1])] = find(it[2])
        return len({find(v) for v in range(n)}) == 1

    perms = list(permutations(range(n)))
    seen: set = set()
    used = [0] * n
    chosen: list = []

    def rec(k):
        if connected(chosen):
            seen.add(min(tuple(sorted(image(it, p) for it in chosen)) for p in perms))
        for j in range(k, len(items)):
            w = load(items[j])
            if any(used[v] + a > 3 for v, a in w.items()):
                continue
            for v, a in w.items():
                used[v] += a
            chosen.append(items[j])
            rec(j)
            chosen.pop()
            for v, a in w.items():
                used[v] -= a

    rec(0)
    return len(seen)


def test_q0_counts_per_vertex_number(q0):
    counts = Counter(c.lg.graph.n_vertices for c in q0)
    assert dict(counts) == {1: 10, 2: 44, 3: 179, 4: 936, 5: 5104}
    assert len(q0) == 6273
    assert len({c.id for c in q0}) == len(q0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_q0_counts_match_brute_force(q0, n):
    assert sum(c.lg.graph.n_vertices == n for c in q0) == brute_q0_count(n)


def test_stage_sizes(q0, qstar):
    assert len(filter_diagram(q0)) == 108
    assert len(qstar) == 79  # see the ledger: 20 expected
    assert len(qstar.rejected) == 6273 - 79
    assert all(c.passed == ("q0", "diagram", "artefacts") for c in qstar)


def test_named_quotients_survive_every_filter(qstar):
    for name, lg in named_quotients().items():
        assert diagram_failure(lg) is None, name
        assert artefact_failure(lg) is None, name
    names = {quotient_name(c.lg) for c in qstar} - {None}
    assert names == set(named_quotients())


def test_named_quotients_are_pairwise_distinct():
    assert len({quotient_name(lg) for lg in named_quotients().values()}) == 20


def test_select_q_gives_the_nine_quotients(qstar):
    q, reports = select_Q(qstar)
    assert len(q) == 9
    assert {quotient_name(c.lg) for c in q} == set(MULTICIRCULANT) | {"D12"}
    assert all(reports[c.id].has_vt_cover for c in q)


FLOOR0 = {
    "D1": [12], "D2": [], "D3": [], "D4": [8, 16], "D5": [], "D6": [18],
    "D7": [12], "D8": [6], "D9": [], "D10": [18], "D11": [],
    "D12": [6, 18, 30, 42, 54, 66],
}


@pytest.mark.parametrize("name", sorted(FLOOR0))
def test_floor0_probe_orders(name):
    rep = probe_candidate(EXCEPTIONAL[name], 12, 0, name=name)
    assert sorted({r.order for r in rep.found}) == FLOOR0[name]


def test_index_bases():
    assert probe_index_base(EXCEPTIONAL["D3"]) == (12, 12, 4, 6)
    assert probe_index_base(EXCEPTIONAL["D9"]) == (12, 6, 12, 4)
    assert base_index(EXCEPTIONAL["D9"]) == (6, 3, 6, 2)
    assert probe_index_base(EXCEPTIONAL["D10"]) == (6, 6, 3, 2, 1)
    assert base_index(EXCEPTIONAL["D12"]) == (2, 2, 1, 1)


@given(st.sampled_from(sorted(named_quotients())), st.integers(1, 4), st.integers(0, 2**16))
@settings(max_examples=50, deadline=None)
def test_vertex_transitivity_agrees_with_group_orbits(name, m, seed):
    c = random_ccv(named_quotients()[name], m, random.Random(seed))
    if c is None:
        return
    g = cover(c).graph
    expected = len(automorphism_group(g).vertex_orbits()) == 1
    assert cover_is_vertex_transitive(c) == expected


@given(st.integers(4, 12), st.integers(0, 2**16))
@settings(max_examples=30, deadline=None)
def test_unit_scaling_gives_isomorphic_covers(m, seed):
    from math import gcd

    lg = named_quotients()["K2-triple"]
    rng = random.Random(seed)
    c = random_ccv(lg, m, rng)
    if c is None:
        return
    units = [a for a in range(1, c.rho_order) if gcd(a, c.rho_order) == 1]
    a = rng.choice(units)
    scaled = make_ccv(lg, c.iota, [a * z for z in c.zeta])
    assert canonical_form(cover(scaled).graph) == canonical_form(cover(c).graph)


def test_d10_has_the_pappus_graph_as_a_cover():
    # m = 1 gives an order-18 vertex-transitive cover; none above order 20
    import networkx as nx

    rep = probe_candidate(EXCEPTIONAL["D10"], 1, 0)
    (rec,) = rep.found
    g = cover(make_ccv(EXCEPTIONAL["D10"], (6, 6, 3, 2, 1), rec.zeta)).graph
    h = nx.Graph([(u, v) for u in g.vertices for v in g.neighbours[u]])
    assert nx.is_isomorphic(h, nx.pappus_graph())
    assert not probe_candidate(EXCEPTIONAL["D10"], 12, 20, True).has_vt_cover
