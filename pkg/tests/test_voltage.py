from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.families import delta12
from artifact.graph import cycles_up_to, is_cubic, is_simple, multigraph
from artifact.labelled import LabelledGraph
from artifact.quotients import named_quotients
from artifact.symmetry import adjacency_of, canonical_form, is_automorphism, perm_order
from artifact.verify import cycle_projection_failure, random_ccv, random_walk, walk_lift_failure
from artifact.voltage import (
    ccv_failure,
    ccv_tree,
    cover,
    cover_adjacency_oracle,
    cover_edge_set,
    dumps,
    dumps_fibres,
    endset,
    is_ccv,
    is_simplified,
    lifts,
    loads,
    make_ccv,
    simplify_voltage,
    validate_ccv,
)

NAMES = sorted(named_quotients())


@st.composite
def ccv_data(draw, max_m=5):
    name = draw(st.sampled_from(NAMES))
    m = draw(st.integers(1, max_m))
    rng = random.Random(draw(st.integers(0, 2**16)))
    for _ in range(30):
        c = random_ccv(named_quotients()[name], m, rng)
        if c is not None:
            return c
    return make_ccv(named_quotients()["K2-triple"], (3, 3), (0, 0, 1, 2, 2, 1))


def k1(iota=6, loop=1):
    lg = LabelledGraph(multigraph(1, loops=[0], semiedges=[0]), (1, 1, 1))
    return make_ccv(lg, (iota,), (loop, -loop, iota // 2))


def test_make_ccv_reduces_residues():
    c = k1(6, 7)
    assert c.zeta == (1, 5, 3)
    assert validate_ccv(c) is None


def test_make_ccv_rejects_bad_data():
    lg = named_quotients()["K1"]
    with pytest.raises(ValueError):
        make_ccv(lg, (6,), (1, 1))
    with pytest.raises(ValueError):
        make_ccv(lg, (0,), (1, 5, 3))
    with pytest.raises(ValueError):
        make_ccv(lg, (6,), (1, 1, 3))  # inverse-voltage equation


def test_k1_cover_is_moebius_ladder():
    cg = cover(k1(8, 1))
    g = cg.graph
    assert g.n_vertices == 8 and is_simple(g) and is_cubic(g)
    assert sorted(cover_edge_set(cg)) == sorted(
        {tuple(sorted((i, (i + s) % 8))) for i in range(8) for s in (1, 4)}
    )


def test_ccv_failure_codes():
    tree = ccv_tree(k1().base)
    assert ccv_failure(k1(6, 1), tree) is None
    assert ccv_failure(k1(6, 3), tree) == 2  # loop parallel to the semiedge voltage
    bad_semi = make_ccv(k1().base, (6,), (1, 5, 0))
    assert ccv_failure(bad_semi, tree) == 3


def test_ccv_failure_joint_gcd():
    # two looped vertices joined by an edge, every voltage and index even
    g = multigraph(2, links=[(0, 1)], loops=[0, 1])
    lg = LabelledGraph(g, (1,) * g.n_darts)
    zeta = [0 if g.beg[x] != g.end(x) else (2 if x < g.inv[x] else -2) for x in g.darts]
    c = make_ccv(lg, (6, 6), zeta)
    assert ccv_failure(c, ccv_tree(lg)) == 4


def test_ccv_tree_error_on_unbalanced_cycle():
    g = multigraph(2, links=[(0, 1), (0, 1)])
    lg = LabelledGraph(g, (1, 2, 1, 2))
    with pytest.raises(ValueError):
        ccv_tree(lg)


@given(ccv_data())
@settings(max_examples=60, deadline=None)
def test_cover_is_cubic_with_fibres(c):
    cg = cover(c)
    g = cg.graph
    assert g.n_vertices == c.order == sum(c.iota)
    assert is_cubic(g)
    for v in c.graph.vertices:
        assert [cg.proj_v[u] for u in cg.fibre(v)] == [v] * c.iota[v]
    for x in g.darts:
        assert cg.proj_v[g.beg[x]] == c.graph.beg[cg.proj_d[x]]
        assert cg.proj_d[g.inv[x]] == c.graph.inv[cg.proj_d[x]]


@given(ccv_data())
@settings(max_examples=60, deadline=None)
def test_adjacency_oracle_matches_cover(c):
    assert cover_edge_set(cover(c)) == cover_adjacency_oracle(c)


@given(ccv_data())
@settings(max_examples=40, deadline=None)
def test_rho_is_an_automorphism_of_order_lcm(c):
    cg = cover(c)
    if is_simple(cg.graph):
        assert is_automorphism(adjacency_of(cg.graph), cg.rho_v)
        assert c.rho_order % perm_order(cg.rho_v) == 0


@given(ccv_data(), st.integers(1, 8), st.integers(0, 2**16))
@settings(max_examples=80, deadline=None)
def test_lift_ends_equal_endset(c, length, seed):
    walk = random_walk(c.base, length, random.Random(seed))
    assert walk_lift_failure(c, walk) is None
    ls = lifts(c, walk, 0)
    assert len(ls) == len(set(ls))


@given(ccv_data(max_m=3))
@settings(max_examples=30, deadline=None)
def test_short_cycles_project_to_reduced_closed_walks(c):
    assert cycle_projection_failure(c, 7) is None


def test_endset_of_closed_cover_cycle_contains_zero():
    c = delta12(5, 1, 2)
    cg = cover(c)
    for cyc in cycles_up_to(cg.graph, 6):
        walk = [cg.proj_d[x] for x in cyc]
        assert 0 in endset(c, walk)


def test_simplify_accepts_non_normalised_voltage():
    c = delta12(5, 1, 2)
    g = c.graph
    t = [3 * v for v in g.vertices]  # relabel each fibre by a shift
    z = [c.zeta[x] + t[g.end(x)] - t[g.beg[x]] for x in g.darts]
    shifted = make_ccv(c.base, c.iota, z)
    assert not is_simplified(shifted)
    out = simplify_voltage(shifted)
    assert is_simplified(out)
    assert canonical_form(cover(out).graph) == canonical_form(cover(c).graph)


@given(ccv_data(max_m=4))
@settings(max_examples=30, deadline=None)
def test_simplify_is_idempotent_on_simplified(c):
    assert is_ccv(c)
    out = simplify_voltage(c)
    assert is_simplified(out)
    assert simplify_voltage(out).zeta == out.zeta


def test_text_roundtrip():
    c = delta12(7, 1, 2)
    assert loads(dumps(c)) == c
    lines = dumps_fibres(cover(c)).splitlines()
    assert len(lines) == c.order + cover(c).graph.n_darts
    with pytest.raises(ValueError):
        loads(dumps(c).replace("iota 0", "iota 9 "))


def test_delta12_cover_rho_order():
    for m in (5, 7, 9):
        cg = cover(delta12(m, 1, 2))
        assert cg.graph.n_vertices == 6 * m
        assert perm_order(cg.rho_v) == 2 * m
