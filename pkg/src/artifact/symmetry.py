"""Automorphism groups, canonical forms and the symmetry parameters meo, eta, kappa.

Everything here works on simple graphs through their adjacency lists.  The
search engine is colour refinement (1-dimensional Weisfeiler-Leman with
canonical relabelling) plus individualisation and backtracking; every map it
returns is checked edge by edge before being trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import lcm
from typing import Iterator, Sequence

from .graph import (
    DartGraph,
    EdgeKind,
    count_c_cycles_through,
    edge_kind,
    is_simple,
)
from .labelled import LabelledGraph

Perm = tuple[int, ...]
Adj = Sequence[Sequence[int]]

DEFAULT_CAP = 10**6
MAX_VERTICES = 512


class CapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------- permutations


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_lengths(p: Perm) -> list[int]:
    seen = bytearray(len(p))
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        k, i = 0, s
        while not seen[i]:
            seen[i] = 1
            i = p[i]
            k += 1
        out.append(k)
    return out


def perm_order(p: Perm) -> int:
    return lcm(*cycle_lengths(p)) if p else 1


def is_automorphism(adj: Adj, p: Perm) -> bool:
    n = len(adj)
    if sorted(p) != list(range(n)):
        return False
    nbr = [set(a) for a in adj]
    return all(p[w] in nbr[p[v]] for v in range(n) for w in adj[v])


# ---------------------------------------------------------------- refinement


def refine(adj: Adj, col: Sequence[int]) -> tuple[list[int], int]:
    """Equitable refinement of a colouring.

    Colours are renumbered by the rank of their (colour, neighbour colours)
    signature, so the result depends only on the isomorphism type of the
    coloured graph.  Also returns a hash of the refinement trace, which must
    agree between two colourings for them to be related by an isomorphism.
    """
    n = len(adj)
    ranks = {c: i for i, c in enumerate(sorted(set(col)))}
    cur = [ranks[c] for c in col]
    ncls = len(ranks)
    trace = []
    while True:
        sigs = [(cur[v], tuple(sorted([cur[w] for w in adj[v]]))) for v in range(n)]
        ordered = sorted(sigs)
        trace.append(hash(tuple(ordered)))
        rank: dict = {}
        for s in ordered:
            if s not in rank:
                rank[s] = len(rank)
        cur = [rank[s] for s in sigs]
        if len(rank) == ncls:
            return cur, hash(tuple(trace))
        ncls = len(rank)


def individualise(col: Sequence[int], v: int) -> list[int]:
    out = [2 * c for c in col]
    out[v] += 1
    return out


def _target_cell(col: Sequence[int]) -> list[int]:
    """Vertices of the smallest non-singleton colour class (lowest colour on
    ties); empty when the colouring is discrete."""
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(col):
        cells.setdefault(c, []).append(v)
    best: list[int] = []
    for c in sorted(cells):
        cell = cells[c]
        if len(cell) > 1 and (not best or len(cell) < len(best)):
            best = cell
    return best


def _search(
    adj_a: Adj, adj_b: Adj, col_a: list[int], col_b: list[int], nbr_b: list[set[int]]
) -> Perm | None:
    """An isomorphism A -> B respecting the two colourings, or None."""
    col_a, ta = refine(adj_a, col_a)
    col_b, tb = refine(adj_b, col_b)
    if ta != tb:
        return None
    cell_a = _target_cell(col_a)
    if not cell_a:
        where = {c: v for v, c in enumerate(col_b)}
        p = tuple(where[c] for c in col_a)
        ok = all(p[w] in nbr_b[p[v]] for v in range(len(adj_a)) for w in adj_a[v])
        return p if ok else None
    a = cell_a[0]
    colour = col_a[a]
    for b in (v for v, c in enumerate(col_b) if c == colour):
        p = _search(adj_a, adj_b, individualise(col_a, a), individualise(col_b, b), nbr_b)
        if p is not None:
            return p
    return None


def find_automorphism_mapping(adj: Adj, a: int, b: int, col: Sequence[int] | None = None) -> Perm | None:
    """Some automorphism sending vertex a to vertex b (respecting ``col``)."""
    base = list(col) if col is not None else [0] * len(adj)
    nbr = [set(x) for x in adj]
    return _search(adj, adj, individualise(base, a), individualise(base, b), nbr)


def find_isomorphism(g1: DartGraph, g2: DartGraph) -> Perm | None:
    a1, a2 = adjacency_of(g1), adjacency_of(g2)
    if len(a1) != len(a2) or sorted(map(len, a1)) != sorted(map(len, a2)):
        return None
    return _search(a1, a2, [0] * len(a1), [0] * len(a2), [set(x) for x in a2])


def adjacency_of(g: DartGraph) -> list[list[int]]:
    if not is_simple(g):
        raise ValueError("symmetry routines require a simple graph")
    return [sorted(nb) for nb in g.neighbours]


# ---------------------------------------------------------------- groups


@dataclass
class PermGroup:
    """Automorphism group stored as a stabiliser chain.

    ``transversals[k]`` maps each point of the k-th basic orbit to an element
    fixing the first k base points and sending ``base[k]`` there.
    """

    n: int
    base: list[int]
    transversals: list[dict[int, Perm]]
    generators: list[Perm]
    cap: int = DEFAULT_CAP
    _elements: list[Perm] | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    @property
    def enumerable(self) -> bool:
        return self.order <= self.cap

    def elements(self) -> list[Perm]:
        if self._elements is None:
            if not self.enumerable:
                raise CapExceeded(f"group of order {self.order} exceeds cap {self.cap}")
            out = [identity(self.n)]
            for trans in reversed(self.transversals):
                out = [compose(t, e) for t in trans.values() for e in out]
            self._elements = out
        return self._elements

    def vertex_orbits(self) -> list[list[int]]:
        return orbits(self.n, self.generators)


def orbits(n: int, gens: Sequence[Perm]) -> list[list[int]]:
    seen = [-1] * n
    out: list[list[int]] = []
    for s in range(n):
        if seen[s] >= 0:
            continue
        seen[s] = len(out)
        orb, todo = [s], [s]
        while todo:
            v = todo.pop()
            for p in gens:
                w = p[v]
                if seen[w] < 0:
                    seen[w] = len(out)
                    orb.append(w)
                    todo.append(w)
        out.append(sorted(orb))
    return out


def automorphism_group(g: DartGraph, cap: int = DEFAULT_CAP, max_vertices: int = MAX_VERTICES) -> PermGroup:
    adj = adjacency_of(g)
    return automorphism_group_adj(adj, cap, max_vertices)


def automorphism_group_adj(
    adj: Adj, cap: int = DEFAULT_CAP, max_vertices: int = MAX_VERTICES, col: Sequence[int] | None = None
) -> PermGroup:
    n = len(adj)
    if n > max_vertices:
        raise CapExceeded(f"{n} vertices exceeds the bound {max_vertices}")
    nbr = [set(x) for x in adj]
    cur, _ = refine(adj, list(col) if col is not None else [0] * n)
    base: list[int] = []
    transversals: list[dict[int, Perm]] = []
    generators: list[Perm] = []
    ident = identity(n)
    while True:
        cell = _target_cell(cur)
        if not cell:
            break
        b = cell[0]
        trans: dict[int, Perm] = {b: ident}
        level_gens: list[Perm] = []
        for c in cell:
            if c in trans:
                continue
            p = _search(adj, adj, individualise(cur, b), individualise(cur, c), nbr)
            if p is None:
                continue
            level_gens.append(p)
            generators.append(p)
            _close_orbit(trans, level_gens)
        base.append(b)
        transversals.append(trans)
        cur, _ = refine(adj, individualise(cur, b))
    return PermGroup(n, base, transversals, generators, cap)


def _close_orbit(trans: dict[int, Perm], gens: list[Perm]) -> None:
    todo = list(trans)
    while todo:
        pt = todo.pop()
        for p in gens:
            y = p[pt]
            if y not in trans:
                trans[y] = compose(p, trans[pt])
                todo.append(y)


def meo(g: DartGraph, cap: int = DEFAULT_CAP, group: PermGroup | None = None) -> int:
    """Maximum order of an automorphism."""
    grp = group or automorphism_group(g, cap)
    return max(perm_order(p) for p in grp.elements())


def eta(g: DartGraph, cap: int = DEFAULT_CAP, group: PermGroup | None = None) -> Fraction:
    return Fraction(g.n_vertices, meo(g, cap, group))


def is_semiregular(g: DartGraph, p: Perm) -> bool:
    """Nontrivial automorphism whose vertex cycles all have the same length."""
    if not is_automorphism(adjacency_of(g), p):
        raise ValueError("not an automorphism")
    lengths = set(cycle_lengths(p))
    return len(lengths) == 1 and lengths != {1}


def _semiregular_order(p: Perm) -> int:
    lengths = set(cycle_lengths(p))
    if len(lengths) == 1:
        (k,) = lengths
        return k if k > 1 else 0
    return 0


def kappa(g: DartGraph, cap: int = DEFAULT_CAP, group: PermGroup | None = None) -> int:
    """Least number of orbits of a nontrivial semiregular automorphism, or |V|."""
    grp = group or automorphism_group(g, cap)
    best = max((_semiregular_order(p) for p in grp.elements()), default=0)
    return g.n_vertices // best if best else g.n_vertices


def is_vertex_transitive(g: DartGraph, group: PermGroup | None = None) -> bool:
    grp = group or automorphism_group(g)
    return len(grp.vertex_orbits()) == 1


def is_arc_transitive(g: DartGraph, group: PermGroup | None = None) -> bool:
    grp = group or automorphism_group(g)
    arcs = [(u, v) for u in g.vertices for v in g.neighbours[u]]
    if not arcs:
        return True
    start = arcs[0]
    seen = {start}
    todo = [start]
    while todo:
        u, v = todo.pop()
        for p in grp.generators:
            a = (p[u], p[v])
            if a not in seen:
                seen.add(a)
                todo.append(a)
    return len(seen) == len(arcs)


# ---------------------------------------------------------------- cycle signatures


def c_signature(g: DartGraph, v: int, c: int) -> tuple[int, int, int]:
    darts = g.out_darts[v]
    if len(darts) != 3:
        raise ValueError(f"vertex {v} is not of valence 3")
    a, b, d = sorted(count_c_cycles_through(g, x, c) for x in darts)
    return (a, b, d)


def is_cycle_regular(g: DartGraph, c: int) -> bool:
    return len({c_signature(g, v, c) for v in g.vertices}) == 1


# ---------------------------------------------------------------- canonical forms


def canonical_form(g: DartGraph, cap: int = 200_000) -> bytes:
    """Certificate equal for two simple graphs iff they are isomorphic.

    The minimum sorted edge list over all leaves of the individualisation
    refinement tree.  Children of a node are pruned to one per orbit of the
    subgroup generated by the known automorphisms fixing the current path
    pointwise; any such subgroup gives a sound pruning.  ``cap`` bounds the
    number of visited tree nodes.
    """
    adj = adjacency_of(g)
    n = len(adj)
    group = automorphism_group_adj(adj, cap=0)
    strong = _strong_generators(group)
    best: list[tuple[tuple[int, int], ...]] = []
    visited = [0]

    def visit(col: list[int], gens: list[Perm]) -> None:
        visited[0] += 1
        if visited[0] > cap:
            raise CapExceeded(f"canonical form search exceeded {cap} nodes")
        col, _ = refine(adj, col)
        cell = _target_cell(col)
        if not cell:
            cert = tuple(sorted(
                (min(col[v], col[w]), max(col[v], col[w])) for v in range(n) for w in adj[v] if v < w
            ))
            if not best or cert < best[0]:
                best[:] = [cert]
            return
        orbit_of = _orbit_labels(n, gens)
        done: set[int] = set()
        for w in cell:
            if orbit_of[w] in done:
                continue
            done.add(orbit_of[w])
            visit(individualise(col, w), [p for p in gens if p[w] == w])

    visit([0] * n, strong)
    body = ";".join(f"{a},{b}" for a, b in best[0]) if best else ""
    return f"{n}|{body}".encode()


def _strong_generators(group: PermGroup) -> list[Perm]:
    """Generators plus transversal elements: for every k they include a
    generating set of the pointwise stabiliser of the first k base points."""
    seen: set[Perm] = set()
    out: list[Perm] = []
    for p in list(group.generators) + [t for trans in group.transversals for t in trans.values()]:
        if p not in seen and any(i != v for i, v in enumerate(p)):
            seen.add(p)
            out.append(p)
    return out


def _orbit_labels(n: int, gens: Sequence[Perm]) -> list[int]:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in gens:
        for v in range(n):
            a, b = find(v), find(p[v])
            if a != b:
                parent[a] = b
    return [find(v) for v in range(n)]


def is_isomorphic(g1: DartGraph, g2: DartGraph) -> bool:
    if g1.n_vertices != g2.n_vertices or g1.n_darts != g2.n_darts:
        return False
    return canonical_form(g1) == canonical_form(g2)


def labelled_canonical_form(lg: LabelledGraph) -> tuple:
    """Canonical form of a small labelled multigraph under label-preserving
    isomorphism (brute force over vertex orders)."""
    g = lg.graph
    n = g.n_vertices
    items = []
    for e in g.edges():
        x = e[0]
        kind = edge_kind(g, x)
        if kind is EdgeKind.SEMIEDGE:
            items.append(("s", g.beg[x], None, lg.lam[x], 0))
        elif kind is EdgeKind.LOOP:
            a, b = sorted((lg.lam[x], lg.lam[e[1]]))
            items.append(("l", g.beg[x], None, a, b))
        else:
            items.append(("k", g.beg[x], g.end(x), lg.lam[x], lg.lam[e[1]]))

    def invariant(v: int) -> tuple:
        return tuple(sorted((lg.lam[x], lg.lam[g.inv[x]], edge_kind(g, x).value) for x in g.out_darts[v]))

    inv = [invariant(v) for v in range(n)]
    order = sorted(range(n), key=lambda v: inv[v])
    groups: list[list[int]] = []
    for v in order:
        if groups and inv[groups[-1][0]] == inv[v]:
            groups[-1].append(v)
        else:
            groups.append([v])

    def perms_by_group(k: int) -> Iterator[list[int]]:
        if k == len(groups):
            yield []
            return
        for head in permutations(groups[k]):
            for tail in perms_by_group(k + 1):
                yield list(head) + tail

    best = None
    for seq in perms_by_group(0):
        pos = {v: i for i, v in enumerate(seq)}
        enc = []
        for tag, u, v, a, b in items:
            if tag == "k":
                pu, pv = pos[u], pos[v]
                enc.append((tag, pu, pv, a, b) if pu < pv else (tag, pv, pu, b, a))
            else:
                enc.append((tag, pos[u], -1, a, b))
        key = tuple(sorted(enc))
        if best is None or key < best:
            best = key
    return (n, tuple(inv[v] for v in order), best)
