from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.classify import (
    CASES,
    NOT_COVERED,
    NOT_VT,
    TOO_SMALL,
    ReportRow,
    aggregate,
    classify,
    family_witness,
    haar_affine_map,
    haar_normal_form,
    haar_theorem_params,
    is_certified_circulant,
    report_eta_kappa,
    report_row,
    symmetry_of,
    theorem_instances,
)
from artifact.families import FamilySpec, _truncate, build, haar, prism
from artifact.graph import from_edges
from artifact.symmetry import CapExceeded, adjacency_of, canonical_form, is_automorphism, perm_order

CASE_EXAMPLES = [
    ("1a", FamilySpec("Prism", (13,))),
    ("1b", FamilySpec("Moeb", (24,))),
    ("2a", FamilySpec("Prism", (12,))),
    ("2b", FamilySpec("GP", (13, 5))),
    ("2c", FamilySpec("Haar", (12, 3, 1))),
    ("3a", FamilySpec("X", (9,))),
    ("3b", FamilySpec("Y", (9,))),
    ("3c", FamilySpec("Tutte8Cage")),
    ("4", FamilySpec("SDW", (9, 3))),
]


def shuffled(g, seed):
    perm = list(g.vertices)
    random.Random(seed).shuffle(perm)
    edges = {tuple(sorted((perm[u], perm[v]))) for u in g.vertices for v in g.neighbours[u]}
    return from_edges(g.n_vertices, sorted(edges))


@pytest.mark.parametrize("case, spec", CASE_EXAMPLES, ids=lambda x: str(x))
def test_case_examples(case, spec):
    g = shuffled(build(spec), 7)
    res = classify(g, str(spec))
    assert res.case == case
    assert canonical_form(build(res.family)) == canonical_form(build(spec))
    assert is_automorphism(adjacency_of(g), res.witness)
    assert 3 * res.witness_order >= g.n_vertices
    assert res.eta is not None and res.eta <= 3


def test_small_and_not_vt_and_not_covered():
    pet = classify(build(FamilySpec("GP", (5, 2))))
    assert pet.verdict == TOO_SMALL and pet.eta == Fraction(5, 3)
    assert classify(build(FamilySpec("GP", (11, 3)))).verdict == NOT_VT
    tc = classify(_truncate(prism(4)), "truncated cube")
    assert tc.verdict == NOT_COVERED and tc.eta == 4


def test_rejects_non_cubic_or_disconnected():
    with pytest.raises(ValueError):
        classify(from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    with pytest.raises(ValueError):
        classify(from_edges(8, k4 + [(u + 4, v + 4) for u, v in k4]))


def test_classify_is_deterministic():
    g = build(FamilySpec("X", (9,)))
    assert classify(g, "a").summary() == classify(g, "a").summary()


def test_odd_haar_overlap_with_moebius():
    # H(m; 1, (m+1)/2) is an affine image of {0, 1, 2}
    m = 11
    assert haar_normal_form(m, 1, (m + 1) // 2) == (m, 1, 2)
    res = classify(haar(m, 1, (m + 1) // 2))
    assert res.case == "1b"
    raw = theorem_instances(2 * m, dedupe_haar=False)
    assert ("2c", FamilySpec("Haar", (m, 1, (m + 1) // 2))) in raw


@given(st.integers(3, 40), st.data())
@settings(max_examples=80, deadline=None)
def test_haar_affine_map_is_an_isomorphism(m, data):
    from math import gcd

    r = data.draw(st.integers(1, m - 1))
    s = data.draw(st.integers(1, m - 1).filter(lambda s: s != r))
    a = data.draw(st.sampled_from([a for a in range(1, m) if gcd(a, m) == 1]))
    b = data.draw(st.integers(0, m - 1))
    conn = sorted((a * t + b) % m for t in (0, r, s))
    # the image set, shifted so it contains 0
    shift = conn[0]
    r2, s2 = ((t - shift) % m for t in conn[1:])
    src, dst = haar(m, r, s), haar(m, r2, s2)
    phi = haar_affine_map(m, a, b - shift)
    edges_src = {frozenset((phi[u], phi[v])) for u in src.vertices for v in src.neighbours[u]}
    edges_dst = {frozenset((u, v)) for u in dst.vertices for v in dst.neighbours[u]}
    assert edges_src == edges_dst
    assert haar_normal_form(m, r, s) == haar_normal_form(m, r2, s2)


def test_haar_theorem_params_exclusions():
    assert (1, 2) not in haar_theorem_params(9)
    assert (1, 8) not in haar_theorem_params(9)
    assert (1, 2) in haar_theorem_params(10)
    assert all(9 % r == 0 for r, _ in haar_theorem_params(9))


@pytest.mark.parametrize("n", [22, 24, 30, 54])
def test_theorem_instances_have_order_n(n):
    inst = theorem_instances(n)
    assert inst and all(build(s).n_vertices == n for _, s in inst)
    order = [CASES.index(c) for c, _ in inst]
    assert order == sorted(order)


@pytest.mark.parametrize("case, spec", CASE_EXAMPLES, ids=lambda x: str(x))
def test_family_witness(case, spec):
    g = build(spec)
    w = family_witness(spec)
    assert is_automorphism(adjacency_of(g), w)
    assert 3 * perm_order(w) >= g.n_vertices


def test_circulant_certificate():
    assert is_certified_circulant(build(FamilySpec("Moeb", (22,))))
    assert is_certified_circulant(prism(11))
    assert not is_certified_circulant(prism(12))
    assert not is_certified_circulant(build(FamilySpec("GP", (13, 5))))


def test_bracketed_symmetry_on_huge_group():
    spec = FamilySpec("Haar", (30, 15, 1))
    g = build(spec)
    plain = symmetry_of(g, cap=1000)  # generators only
    sym = symmetry_of(g, cap=1000, witnesses=[family_witness(spec)])
    assert not sym.exact
    assert sym.eta_upper == 2 and sym.eta_above_one
    assert sym.kappa_lower == 2
    assert plain.eta_upper >= sym.eta_upper


def test_cap_exceeded_without_match():
    # no family matches and the group cannot be enumerated, so eta is unbounded
    with pytest.raises(CapExceeded):
        classify(_truncate(prism(4)), cap=10)


def row(label, eta, kappa, upper=None, above=True):
    k = (kappa, kappa) if isinstance(kappa, int) else kappa
    return ReportRow(label, 24, eta, upper if upper is not None else eta, above,
                     k[0] if k[0] == k[1] else None, k, 4, (1, 1, 1))


def test_aggregate_rules():
    assert aggregate([]) == {}
    rows = [row("a", Fraction(1), 1), row("b", Fraction(2), 2), row("c", Fraction(3), 6)]
    agg = aggregate(rows)
    assert agg == {1: 1, 2: 2, 3: 6}
    assert agg[1] <= agg[2] <= agg[3]
    bracketed = rows + [row("d", None, (2, 2), upper=Fraction(2))]
    assert aggregate(bracketed) == {1: 1, 2: 2, 3: 6}
    with pytest.raises(ValueError):
        aggregate(rows + [row("e", None, (2, 2), upper=Fraction(4))])
    with pytest.raises(ValueError):
        aggregate(rows + [row("f", None, (2, 9), upper=Fraction(2))])


def test_report_rows_and_text():
    specs = [FamilySpec("Prism", (11,)), FamilySpec("Prism", (12,)), FamilySpec("X", (9,))]
    rep = report_eta_kappa(specs)
    assert [r.kappa for r in rep.rows] == [1, 2, 3]
    assert rep.aggregate == {1: 1, 2: 2, 3: 3}
    text = rep.text()
    assert text.splitlines()[0].startswith("graph\torder")
    assert "# max kappa with eta <= 3: 3" in text
    assert report_row(FamilySpec("SDW", (9, 3))).kappa == 6
