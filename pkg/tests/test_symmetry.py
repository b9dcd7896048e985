from __future__ import annotations

import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.families import FamilySpec, build, generalized_petersen, haar, prism, tutte_8_cage
from artifact.graph import from_edges, is_connected
from artifact.symmetry import (
    CapExceeded,
    adjacency_of,
    automorphism_group,
    c_signature,
    canonical_form,
    compose,
    cycle_lengths,
    eta,
    find_isomorphism,
    inverse,
    is_arc_transitive,
    is_automorphism,
    is_cycle_regular,
    is_isomorphic,
    is_semiregular,
    is_vertex_transitive,
    kappa,
    meo,
    perm_order,
)

K4 = from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def to_nx(g) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from((u, v) for u in g.vertices for v in g.neighbours[u])
    return h


def relabel(g, perm):
    edges = {tuple(sorted((perm[u], perm[v]))) for u in g.vertices for v in g.neighbours[u]}
    return from_edges(g.n_vertices, sorted(edges))


def nx_automorphisms(g) -> list[tuple[int, ...]]:
    h = to_nx(g)
    gm = nx.algorithms.isomorphism.GraphMatcher(h, h)
    return [tuple(m[v] for v in g.vertices) for m in gm.isomorphisms_iter()]


@st.composite
def cubic_graphs(draw, max_n=12):
    n = draw(st.sampled_from([n for n in range(4, max_n + 1, 2)]))
    seed = draw(st.integers(0, 2**16))
    h = nx.random_regular_graph(3, n, seed=seed)
    return from_edges(n, sorted(tuple(sorted(e)) for e in h.edges()))


@pytest.mark.parametrize(
    "g, order",
    [
        (K4, 24),
        (prism(4), 48),
        (generalized_petersen(5, 2), 120),
        (haar(7, 1, 3), 336),
        (generalized_petersen(10, 2), 120),
        (tutte_8_cage(), 1440),
    ],
    ids=["K4", "cube", "Petersen", "Heawood", "dodecahedron", "8-cage"],
)
def test_known_group_orders(g, order):
    grp = automorphism_group(g)
    assert grp.order == order
    assert is_vertex_transitive(g, grp)
    assert is_arc_transitive(g, grp)


def test_permutation_helpers():
    p = (1, 2, 0, 4, 3)
    assert sorted(cycle_lengths(p)) == [2, 3]
    assert perm_order(p) == 6
    assert compose(p, inverse(p)) == tuple(range(5))


@given(cubic_graphs())
@settings(max_examples=40, deadline=None)
def test_group_matches_brute_force(g):
    autos = nx_automorphisms(g)
    grp = automorphism_group(g)
    assert grp.order == len(autos)
    assert set(grp.elements()) == set(autos)
    assert all(is_automorphism(adjacency_of(g), p) for p in grp.generators)
    assert meo(g, group=grp) == max(perm_order(p) for p in autos)
    semi = [set(cycle_lengths(p)) for p in autos]
    best = max((next(iter(s)) for s in semi if len(s) == 1 and s != {1}), default=0)
    assert kappa(g, group=grp) == (g.n_vertices // best if best else g.n_vertices)


@given(cubic_graphs(max_n=16), st.integers(0, 2**16))
@settings(max_examples=40, deadline=None)
def test_canonical_form_is_relabelling_invariant(g, seed):
    perm = list(g.vertices)
    random.Random(seed).shuffle(perm)
    h = relabel(g, perm)
    assert canonical_form(h) == canonical_form(g)
    iso = find_isomorphism(g, h)
    assert iso is not None
    assert all(iso[v] in h.neighbours[iso[u]] for u in g.vertices for v in g.neighbours[u])


@given(cubic_graphs(), cubic_graphs())
@settings(max_examples=60, deadline=None)
def test_canonical_form_agrees_with_networkx(g, h):
    expected = nx.is_isomorphic(to_nx(g), to_nx(h))
    assert (canonical_form(g) == canonical_form(h)) == expected
    assert is_isomorphic(g, h) == expected


def test_canonical_form_on_large_haar_group():
    g = build(FamilySpec("Haar", (60, 30, 1)))
    grp = automorphism_group(g, cap=0)
    assert grp.order > 10**6
    perm = list(g.vertices)
    random.Random(1).shuffle(perm)
    assert canonical_form(relabel(g, perm)) == canonical_form(g)


def test_eta_and_kappa_small():
    assert eta(K4) == 1  # S4 contains a 4-cycle
    assert kappa(K4) == 1
    assert eta(prism(4)) == Fraction(4, 3)
    assert eta(generalized_petersen(5, 2)) == Fraction(5, 3)
    assert kappa(generalized_petersen(5, 2)) == 2
    assert eta(prism(5)) == 1


def test_semiregular():
    g = prism(5)
    rot = tuple((v + 1) % 5 + 5 * (v // 5) for v in g.vertices)
    assert is_semiregular(g, rot)
    with pytest.raises(ValueError):
        is_semiregular(g, (1, 0) + tuple(range(2, 10)))


def test_cap_exceeded():
    grp = automorphism_group(tutte_8_cage(), cap=100)
    assert grp.order == 1440 and not grp.enumerable
    with pytest.raises(CapExceeded):
        grp.elements()
    with pytest.raises(CapExceeded):
        meo(tutte_8_cage(), cap=100)


def test_cycle_signatures():
    pet = generalized_petersen(5, 2)
    assert c_signature(pet, 0, 5) == (4, 4, 4)
    assert is_cycle_regular(pet, 5)
    assert c_signature(prism(4), 0, 4) == (2, 2, 2)
    assert c_signature(prism(5), 0, 4) == (1, 1, 2)


def test_disconnected_pair_not_isomorphic():
    g = from_edges(8, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] + [(4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7)])
    assert not is_connected(g)
    assert canonical_form(g) != canonical_form(prism(4))
