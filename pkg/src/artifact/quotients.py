"""Candidate labelled quotients: enumeration, filters and cover probes."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Sequence

from .graph import (
    DartGraph,
    EdgeKind,
    distances_from,
    edge_kind,
    is_connected,
    multigraph,
    spanning_tree,
    tree_paths,
)
from .labelled import (
    LabelledGraph,
    base_index,
    ccv_extendability_failure,
    contains_artefact,
    edge_type,
    lambda_star,
    load_artefacts,
    ArtefactPattern,
)
from .symmetry import adjacency_of, find_automorphism_mapping, is_automorphism, labelled_canonical_form
from .voltage import CcvGraph, ccv_failure, ccv_tree, cover, make_ccv

MAX_QUOTIENT_VERTICES = 5
DEFAULT_MAX_M = 12
ORDER_FLOOR = 20


@dataclass(frozen=True)
class Candidate:
    id: str
    lg: LabelledGraph
    passed: tuple[str, ...] = ()

    def with_stage(self, stage: str) -> Candidate:
        return Candidate(self.id, self.lg, self.passed + (stage,))


@dataclass
class CandidateSet:
    members: list[Candidate] = field(default_factory=list)
    rejected: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.members)

    def graphs(self) -> list[LabelledGraph]:
        return [c.lg for c in self.members]


# ---------------------------------------------------------------- building


def labelled(
    n: int,
    links: Sequence[tuple[int, int, int, int]] = (),
    loops: Sequence[int] = (),
    semiedges: Sequence[int] = (),
) -> LabelledGraph:
    """Labelled multigraph from links (u, v, lambda(u->v), lambda(v->u));
    loops and semiedges get label 1."""
    g = multigraph(n, [(u, v) for u, v, _, _ in links], loops, semiedges)
    lam: list[int] = []
    for _, _, a, b in links:
        lam += [a, b]
    lam += [1] * (2 * len(loops) + len(semiedges))
    return LabelledGraph(g, tuple(lam))


def _multicirculant_quotients() -> dict[str, LabelledGraph]:
    return {
        "K1": labelled(1, loops=[0], semiedges=[0]),
        "K2-triple": labelled(2, [(0, 1, 1, 1)] * 3),
        "K2-double": labelled(2, [(0, 1, 1, 1)] * 2, semiedges=[0, 1]),
        "K2-loops": labelled(2, [(0, 1, 1, 1)], loops=[0, 1]),
        "K3-path": labelled(3, [(0, 1, 1, 1), (1, 2, 1, 1)], loops=[0, 2], semiedges=[1]),
        "K3-double-loop": labelled(3, [(0, 1, 1, 1)] * 2 + [(1, 2, 1, 1)], loops=[2], semiedges=[0]),
        "K3-triangle": labelled(3, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1)], semiedges=[0, 1, 2]),
        "K3-double-triangle": labelled(
            3, [(0, 1, 1, 1)] * 2 + [(0, 2, 1, 1), (1, 2, 1, 1)], semiedges=[2]
        ),
    }


def _exceptional_quotients() -> dict[str, LabelledGraph]:
    a, b, c, d, e = range(5)
    return {
        "D1": labelled(4, [(a, b, 1, 1), (a, c, 1, 2), (a, d, 1, 2), (c, d, 1, 1)], loops=[b]),
        "D2": labelled(4, [(a, b, 1, 1), (a, b, 1, 1), (a, d, 1, 2), (b, c, 1, 2)], semiedges=[d, c]),
        "D3": labelled(4, [(a, b, 1, 1), (a, b, 1, 1), (a, d, 1, 2), (b, c, 1, 3)], semiedges=[d]),
        "D4": labelled(4, [(a, b, 1, 1), (a, b, 1, 1), (a, d, 1, 3), (b, c, 1, 3)]),
        "D5": labelled(5, [(a, b, 1, 1), (a, c, 1, 2), (c, e, 1, 3), (a, d, 1, 3)], loops=[b]),
        "D6": labelled(4, [(a, d, 1, 2), (a, b, 1, 1), (d, c, 1, 1)], loops=[b, c], semiedges=[a]),
        "D7": labelled(4, [(a, c, 1, 1), (a, b, 1, 2), (a, d, 1, 2)], loops=[c], semiedges=[b, d]),
        "D8": labelled(4, [(a, b, 1, 1), (a, d, 1, 2), (b, c, 1, 2), (c, d, 1, 1)], semiedges=[a, b]),
        "D9": labelled(4, [(a, b, 1, 2), (a, d, 1, 3), (a, c, 1, 1)], loops=[c], semiedges=[b]),
        "D10": labelled(5, [(a, b, 1, 1), (a, b, 1, 1), (a, d, 1, 3), (b, c, 1, 2), (c, e, 1, 3)]),
        "D11": labelled(4, [(a, c, 1, 2), (a, b, 1, 1), (b, d, 1, 2)], semiedges=[a, b, c, d]),
        "D12": labelled(4, [(a, b, 1, 1), (a, b, 1, 1), (c, a, 2, 1), (d, b, 2, 1), (c, d, 1, 1)]),
    }


MULTICIRCULANT = _multicirculant_quotients()
EXCEPTIONAL = _exceptional_quotients()


def named_quotients() -> dict[str, LabelledGraph]:
    """The 8 all-[1,1] quotients on at most 3 vertices and D1-D12."""
    return {**MULTICIRCULANT, **EXCEPTIONAL}


def quotient_name(lg: LabelledGraph) -> str | None:
    key = labelled_canonical_form(lg)
    for name, q in named_quotients().items():
        if labelled_canonical_form(q) == key:
            return name
    return None


# ---------------------------------------------------------------- Q0


def _multigraph_shapes(n: int) -> Iterator[tuple[list, list, list]]:
    """All (links, loops, semiedges) on n vertices with at most 3 darts per
    vertex, as non-decreasing item sequences (not yet deduplicated)."""
    items: list[tuple] = []
    for v in range(n):
        items.append(("s", v))
        items.append(("l", v))
    for i in range(n):
        for j in range(i + 1, n):
            items.append(("k", i, j))
    load = [0] * n
    chosen: list[tuple] = []

    def cost(it: tuple) -> list[tuple[int, int]]:
        if it[0] == "s":
            return [(it[1], 1)]
        if it[0] == "l":
            return [(it[1], 2)]
        return [(it[1], 1), (it[2], 1)]

    def rec(start: int) -> Iterator[tuple[list, list, list]]:
        yield (
            [(it[1], it[2]) for it in chosen if it[0] == "k"],
            [it[1] for it in chosen if it[0] == "l"],
            [it[1] for it in chosen if it[0] == "s"],
        )
        for k in range(start, len(items)):
            c = cost(items[k])
            if any(load[v] + w > 3 for v, w in c):
                continue
            for v, w in c:
                load[v] += w
            chosen.append(items[k])
            yield from rec(k)
            chosen.pop()
            for v, w in c:
                load[v] -= w

    yield from rec(0)


def _labellings(g: DartGraph) -> Iterator[tuple[int, ...]]:
    """Label vectors in {1,2,3} with deg_lambda <= 3 everywhere, in
    lexicographic order."""
    lam = [0] * g.n_darts
    load = [0] * g.n_vertices

    def rec(x: int) -> Iterator[tuple[int, ...]]:
        if x == g.n_darts:
            yield tuple(lam)
            return
        v = g.beg[x]
        for a in (1, 2, 3):
            if load[v] + a > 3:
                break
            lam[x] = a
            load[v] += a
            yield from rec(x + 1)
            load[v] -= a

    yield from rec(0)


def enumerate_Q0(max_vertices: int = MAX_QUOTIENT_VERTICES) -> CandidateSet:
    """Connected subcubic labelled multigraphs on at most ``max_vertices``
    vertices, up to label-preserving isomorphism."""
    out: list[tuple[tuple, tuple, LabelledGraph]] = []
    for n in range(1, max_vertices + 1):
        shapes: dict[tuple, DartGraph] = {}
        for links, loops, semis in _multigraph_shapes(n):
            g = multigraph(n, links, loops, semis)
            if not is_connected(g):
                continue
            key = labelled_canonical_form(LabelledGraph(g, (1,) * g.n_darts))
            shapes.setdefault(key, g)
        for skey, g in sorted(shapes.items(), key=lambda kv: repr(kv[0])):
            seen: set[tuple] = set()
            for lam in _labellings(g):
                lg = LabelledGraph(g, lam)
                key = labelled_canonical_form(lg)
                if key in seen:
                    continue
                seen.add(key)
                out.append((skey, lam, lg))
    members = []
    counts: Counter[int] = Counter()
    for _, _, lg in out:
        n = lg.graph.n_vertices
        members.append(Candidate(f"q{n}-{counts[n]:04d}", lg, ("q0",)))
        counts[n] += 1
    return CandidateSet(members)


# ---------------------------------------------------------------- diagram filter


def _is_11_edge(lg: LabelledGraph, x: int) -> bool:
    return edge_type(lg, x) == (1, 1)


def diagram_failure(lg: LabelledGraph) -> str | None:
    """Reason the labelled graph fails the vertex-transitive diagram
    conditions, or None if some root vertex satisfies all of them."""
    g = lg.graph
    if g.n_vertices > MAX_QUOTIENT_VERTICES:
        return "more than 5 vertices"
    fail = ccv_extendability_failure(lg)
    if fail is not None:
        return f"ccv-extendability condition {fail}"
    pot = lg.potentials
    assert pot is not None
    tree = spanning_tree(g)
    reasons = []
    for root in g.vertices:
        if not any(_is_11_edge(lg, x) for x in g.out_darts[root]):
            reasons.append("no [1,1]-edge at root")
            continue
        paths = tree_paths(g, tree, root)
        values = {}
        for v in g.vertices:
            if v == root:
                continue
            val = lambda_star(lg, paths[v])
            # lambda* of a path is the potential ratio, whatever the tree
            assert val == pot[v] / pot[root], "lambda* depends on the tree"
            values[v] = val
        if any(val < Fraction(1, 6) for val in values.values()):
            reasons.append("lambda* below 1/6")
            continue
        if sum(values.values(), Fraction(0)) > 2:
            reasons.append("lambda* sum above 2")
            continue
        return None
    return "; ".join(sorted(set(reasons))) or "no root"


def filter_diagram(cs: CandidateSet) -> CandidateSet:
    out = CandidateSet(rejected=dict(cs.rejected))
    for c in cs:
        why = diagram_failure(c.lg)
        if why is None:
            out.members.append(c.with_stage("diagram"))
        else:
            out.rejected[c.id] = f"diagram: {why}"
    return out


# ---------------------------------------------------------------- artefacts


def artefact_failure(lg: LabelledGraph, patterns: Sequence[ArtefactPattern] | None = None) -> str | None:
    """Rejection reason from the artefact rules, or None.

    Rejects when a short-cycle pattern A1-A5 occurs together with a dart of
    label 3, or when A6 or A7 occurs.
    """
    pats = load_artefacts() if patterns is None else list(patterns)
    has3 = 3 in lg.lam
    for pat in pats:
        unconditional = pat.id in ("A6", "A7")
        if not unconditional and not has3:
            continue
        if contains_artefact(lg, pat):
            return pat.id if unconditional else f"{pat.id} with a label-3 dart"
    return None


def filter_artefacts(cs: CandidateSet, patterns: Sequence[ArtefactPattern] | None = None) -> CandidateSet:
    pats = load_artefacts() if patterns is None else list(patterns)
    out = CandidateSet(rejected=dict(cs.rejected))
    for c in cs:
        why = artefact_failure(c.lg, pats)
        if why is None:
            out.members.append(c.with_stage("artefacts"))
        else:
            out.rejected[c.id] = f"artefact: {why}"
    return out


# ---------------------------------------------------------------- probes


@dataclass(frozen=True)
class CoverRecord:
    m: int
    zeta: tuple[int, ...]
    order: int
    vertex_transitive: bool


@dataclass
class ProbeReport:
    candidate: str
    max_m: int
    order_floor: int
    index_base: tuple[int, ...]
    free_darts: tuple[int, ...]
    tried: int = 0
    found: list[CoverRecord] = field(default_factory=list)

    @property
    def has_vt_cover(self) -> bool:
        return any(r.vertex_transitive for r in self.found)

    def summary(self) -> str:
        orders = sorted({r.order for r in self.found})
        return f"tried={self.tried} vt_covers={len(self.found)} orders={orders}"


def probe_index_base(lg: LabelledGraph) -> tuple[int, ...]:
    """Minimal index vector, doubled when a semiedge sits at an odd index."""
    base = base_index(lg)
    g = lg.graph
    semi_odd = any(g.inv[x] == x and base[g.beg[x]] % 2 for x in g.darts)
    return tuple(2 * b for b in base) if semi_odd else base


def _voltage_ranges(lg: LabelledGraph, tree: frozenset[int], iota: Sequence[int]) -> tuple[list[int], list[range]]:
    """Free darts (one per cotree loop or link) and their residue ranges."""
    g = lg.graph
    free, ranges = [], []
    for e in g.edges():
        x = e[0]
        if x in tree or (len(e) == 2 and e[1] in tree):
            continue
        kind = edge_kind(g, x)
        u = g.beg[x]
        if kind is EdgeKind.SEMIEDGE:
            continue
        if kind is EdgeKind.LOOP:
            # zeta and -zeta describe the same loop
            ranges.append(range(1, (iota[u] + 1) // 2))
        else:
            ranges.append(range(gcd(iota[u], iota[g.end(x)])))
        free.append(x)
    return free, ranges


def _zeta_vector(lg: LabelledGraph, iota: Sequence[int], free: Sequence[int], values: Sequence[int]) -> list[int]:
    g = lg.graph
    zeta = [0] * g.n_darts
    for x in g.darts:
        if g.inv[x] == x:
            zeta[x] = iota[g.beg[x]] // 2
    for x, z in zip(free, values):
        zeta[x] = z
        zeta[g.inv[x]] = -z
    return zeta


def _canonical_under_units(
    lg: LabelledGraph, iota: Sequence[int], free: Sequence[int], values: tuple[int, ...], n: int
) -> bool:
    """True iff ``values`` is the least vector in its orbit under
    multiplication by units of Z_n (which yields isomorphic covers)."""
    g = lg.graph
    for a in range(2, n):
        if gcd(a, n) != 1:
            continue
        img = []
        for x, z in zip(free, values):
            mod = iota[g.beg[x]]
            w = a * z % mod
            if g.beg[x] == g.end(x):
                w = min(w, mod - w)
            img.append(w)
        if tuple(img) < values:
            return False
    return True


def distance_profile(g: DartGraph, v: int) -> tuple[int, ...]:
    d = distances_from(g, v)
    return tuple(sorted(Counter(d).items()))  # type: ignore[arg-type]


def cover_is_vertex_transitive(c: CcvGraph) -> bool:
    """Vertex-transitivity of the cover.  The covering transformation is
    transitive on each fibre, so it suffices to map one fibre
    representative onto every other; each mapping is verified."""
    cg = cover(c)
    g = cg.graph
    reps = [cg.offset_v[v] for v in c.graph.vertices]
    prof = distance_profile(g, reps[0])
    if any(distance_profile(g, r) != prof for r in reps[1:]):
        return False
    adj = adjacency_of(g)
    for r in reps[1:]:
        p = find_automorphism_mapping(adj, reps[0], r)
        if p is None:
            return False
        if not is_automorphism(adj, p) or p[reps[0]] != r:
            raise AssertionError("automorphism search returned an invalid map")
    return True


def probe_candidate(
    lg: LabelledGraph,
    max_m: int = DEFAULT_MAX_M,
    order_floor: int = ORDER_FLOOR,
    stop_at_first: bool = False,
    name: str = "",
    m_values: Iterable[int] | None = None,
) -> ProbeReport:
    """Sweep simplified ccv-extensions with iota = m * base, m <= max_m,
    and record the vertex-transitive covers of order > order_floor."""
    if ccv_extendability_failure(lg) is not None:
        raise ValueError("labelled graph is not ccv-extendable")
    base = probe_index_base(lg)
    tree = ccv_tree(lg)
    report = ProbeReport(name, max_m, order_floor, base, ())
    ms = range(1, max_m + 1) if m_values is None else m_values
    for m in ms:
        iota = tuple(m * b for b in base)
        if sum(iota) <= order_floor:
            continue
        free, ranges = _voltage_ranges(lg, tree, iota)
        report.free_darts = tuple(free)
        n = 1
        for x in lg.graph.darts:
            n = n * (lg.lam[x] * iota[lg.graph.beg[x]]) // gcd(n, lg.lam[x] * iota[lg.graph.beg[x]])
        for values in product(*ranges):
            if not _canonical_under_units(lg, iota, free, values, n):
                continue
            zeta = _zeta_vector(lg, iota, free, values)
            try:
                c = make_ccv(lg, iota, zeta)
            except ValueError:
                continue
            if ccv_failure(c, tree) is not None:
                continue
            report.tried += 1
            if cover_is_vertex_transitive(c):
                report.found.append(CoverRecord(m, c.zeta, c.order, True))
                if stop_at_first:
                    return report
    return report


def _probe_job(args: tuple) -> tuple[str, ProbeReport]:
    cid, lg, max_m, floor, stop = args
    return cid, probe_candidate(lg, max_m, floor, stop, cid)


def probe_all(
    cs: CandidateSet,
    max_m: int = DEFAULT_MAX_M,
    order_floor: int = ORDER_FLOOR,
    stop_at_first: bool = True,
    workers: int = 1,
) -> dict[str, ProbeReport]:
    jobs = [(c.id, c.lg, max_m, order_floor, stop_at_first) for c in cs]
    if workers <= 1:
        results = map(_probe_job, jobs)
        return dict(results)
    with ProcessPoolExecutor(workers) as pool:
        return dict(pool.map(_probe_job, jobs))


# ---------------------------------------------------------------- Q* and Q


def compute_Qstar(max_vertices: int = MAX_QUOTIENT_VERTICES) -> CandidateSet:
    return filter_artefacts(filter_diagram(enumerate_Q0(max_vertices)))


def select_Q(
    cs: CandidateSet, max_m: int = DEFAULT_MAX_M, order_floor: int = ORDER_FLOOR, workers: int = 1
) -> tuple[CandidateSet, dict[str, ProbeReport]]:
    reports = probe_all(cs, max_m, order_floor, True, workers)
    out = CandidateSet(rejected=dict(cs.rejected))
    for c in cs:
        rep = reports[c.id]
        if rep.has_vt_cover:
            out.members.append(c.with_stage("probe"))
        else:
            out.rejected[c.id] = f"probe: no vertex-transitive cover above {order_floor} (m <= {max_m})"
    return out, reports


def compute_Q(max_m: int = DEFAULT_MAX_M, order_floor: int = ORDER_FLOOR, workers: int = 1) -> CandidateSet:
    return select_Q(compute_Qstar(), max_m, order_floor, workers)[0]
