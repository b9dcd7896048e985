"""Dart-based multigraphs.

A graph is a tuple (V, D, beg, inv) where ``inv`` is an involution on darts.
Vertices and darts are dense integers ``0..n-1``.  Fixed points of ``inv`` are
semiedges; a non-fixed dart whose two ends coincide is a loop; everything else
is a link.  Simple graphs are the special case with only links and no parallel
pairs.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Walk = tuple[int, ...]

MAX_CYCLE_LENGTH = 12
MAX_CYCLE_VERTICES = 5000


class EdgeKind(enum.Enum):
    SEMIEDGE = "semiedge"
    LOOP = "loop"
    LINK = "link"


@dataclass(frozen=True)
class DartGraph:
    """Immutable dart graph.  ``beg[x]`` is the initial vertex of dart ``x``
    and ``inv[x]`` its inverse dart."""

    n_vertices: int
    beg: tuple[int, ...]
    inv: tuple[int, ...]

    @property
    def n_darts(self) -> int:
        return len(self.beg)

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def darts(self) -> range:
        return range(len(self.beg))

    def end(self, x: int) -> int:
        return self.beg[self.inv[x]]

    @cached_property
    def out_darts(self) -> tuple[tuple[int, ...], ...]:
        """Darts beginning at each vertex, in increasing dart order."""
        buckets: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for x, v in enumerate(self.beg):
            buckets[v].append(x)
        return tuple(tuple(b) for b in buckets)

    def valence(self, v: int) -> int:
        return len(self.out_darts[v])

    @cached_property
    def neighbours(self) -> tuple[tuple[int, ...], ...]:
        """Endpoints of the darts at each vertex (with multiplicity)."""
        return tuple(tuple(self.end(x) for x in ds) for ds in self.out_darts)

    def edges(self) -> list[tuple[int, ...]]:
        """Dart orbits of ``inv``: 1-tuples for semiedges, ordered pairs otherwise."""
        out = []
        for x in self.darts:
            y = self.inv[x]
            if y == x:
                out.append((x,))
            elif x < y:
                out.append((x, y))
        return out


# ---------------------------------------------------------------- construction


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> DartGraph:
    """Simple graph from an edge list; edge k becomes darts 2k (u->v) and 2k+1."""
    beg: list[int] = []
    inv: list[int] = []
    seen = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop {u}-{v} in simple edge list")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge {key} out of range for {n} vertices")
        seen.add(key)
        k = len(beg)
        beg += [u, v]
        inv += [k + 1, k]
    return DartGraph(n, tuple(beg), tuple(inv))


def from_adjacency(adj: Sequence[Iterable[int]]) -> DartGraph:
    """Simple graph from a symmetric irreflexive adjacency list."""
    n = len(adj)
    sets = [set(a) for a in adj]
    for u in range(n):
        for v in sets[u]:
            if u == v or u not in sets[v]:
                raise ValueError("adjacency must be symmetric and irreflexive")
    return from_edges(n, [(u, v) for u in range(n) for v in sorted(sets[u]) if u < v])


def multigraph(
    n: int,
    links: Iterable[tuple[int, int]] = (),
    loops: Iterable[int] = (),
    semiedges: Iterable[int] = (),
) -> DartGraph:
    """Multigraph builder.  Darts are numbered links first (pairs), then loops
    (pairs), then semiedges (singletons), in the order given."""
    beg: list[int] = []
    inv: list[int] = []
    for u, v in links:
        if u == v:
            raise ValueError("use `loops` for loops")
        k = len(beg)
        beg += [u, v]
        inv += [k + 1, k]
    for u in loops:
        k = len(beg)
        beg += [u, u]
        inv += [k + 1, k]
    for u in semiedges:
        k = len(beg)
        beg.append(u)
        inv.append(k)
    g = DartGraph(n, tuple(beg), tuple(inv))
    report = validate(g)
    if report is not None:
        raise ValueError(report)
    return g


def validate(g: DartGraph) -> str | None:
    """Return a description of the first violated invariant, or None."""
    if g.n_vertices < 1:
        return "vertex set empty"
    if len(g.inv) != len(g.beg):
        return "beg and inv have different domains"
    nd = len(g.beg)
    for x, v in enumerate(g.beg):
        if not 0 <= v < g.n_vertices:
            return f"dart {x} begins at unknown vertex {v}"
    for x, y in enumerate(g.inv):
        if not 0 <= y < nd:
            return f"dart {x} has unknown inverse {y}"
    for x, y in enumerate(g.inv):
        if g.inv[y] != x:
            return f"inv not involution at dart {x}"
    return None


def adjacency(g: DartGraph) -> list[list[int]]:
    return [sorted(nb) for nb in g.neighbours]


def edge_list(g: DartGraph) -> list[tuple[int, int]]:
    """Sorted (u, v) pairs with u <= v, one per non-semiedge edge."""
    out = []
    for e in g.edges():
        if len(e) == 2:
            u, v = g.beg[e[0]], g.beg[e[1]]
            out.append((min(u, v), max(u, v)))
    return sorted(out)


# ---------------------------------------------------------------- predicates


def edge_kind(g: DartGraph, x: int) -> EdgeKind:
    if not 0 <= x < g.n_darts:
        raise ValueError(f"unknown dart {x}")
    y = g.inv[x]
    if y == x:
        return EdgeKind.SEMIEDGE
    if g.beg[y] == g.beg[x]:
        return EdgeKind.LOOP
    return EdgeKind.LINK


def parallel_pairs(g: DartGraph) -> list[tuple[int, int]]:
    """Pairs x < y of distinct darts with the same beginning and the same end."""
    out = []
    for v in g.vertices:
        ds = g.out_darts[v]
        for i, x in enumerate(ds):
            for y in ds[i + 1:]:
                if g.end(x) == g.end(y):
                    out.append((x, y))
    return out


def is_simple(g: DartGraph) -> bool:
    for x in g.darts:
        if edge_kind(g, x) is not EdgeKind.LINK:
            return False
    for nb in g.neighbours:
        if len(set(nb)) != len(nb):
            return False
    return True


def is_connected(g: DartGraph) -> bool:
    return len(component(g, 0)) == g.n_vertices


def component(g: DartGraph, v: int) -> set[int]:
    seen = {v}
    todo = [v]
    while todo:
        u = todo.pop()
        for w in g.neighbours[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def is_cubic(g: DartGraph) -> bool:
    return all(len(ds) == 3 for ds in g.out_darts)


def distances_from(g: DartGraph, s: int) -> list[int]:
    """BFS distances (``-1`` for unreachable vertices)."""
    dist = [-1] * g.n_vertices
    dist[s] = 0
    q = deque([s])
    nbrs = g.neighbours
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in nbrs[u]:
            if dist[w] < 0:
                dist[w] = du
                q.append(w)
    return dist


# ---------------------------------------------------------------- walks


def is_walk(g: DartGraph, w: Sequence[int]) -> bool:
    if len(w) == 0 or any(not 0 <= x < g.n_darts for x in w):
        return False
    return all(g.beg[w[i + 1]] == g.end(w[i]) for i in range(len(w) - 1))


def is_closed(g: DartGraph, w: Sequence[int]) -> bool:
    return g.end(w[-1]) == g.beg[w[0]]


def is_reduced(g: DartGraph, w: Sequence[int]) -> bool:
    return all(w[i + 1] != g.inv[w[i]] for i in range(len(w) - 1))


def is_path(g: DartGraph, w: Sequence[int]) -> bool:
    starts = [g.beg[x] for x in w]
    return is_walk(g, w) and is_reduced(g, w) and len(set(starts)) == len(starts)


def is_cycle(g: DartGraph, w: Sequence[int]) -> bool:
    return is_path(g, w) and is_closed(g, w)


def walk_vertices(g: DartGraph, w: Sequence[int]) -> list[int]:
    return [g.beg[x] for x in w] + [g.end(w[-1])]


def inverse_walk(g: DartGraph, w: Sequence[int]) -> Walk:
    return tuple(g.inv[x] for x in reversed(w))


# ---------------------------------------------------------------- girth and cycles


def shortest_cycle(g: DartGraph) -> Walk | None:
    """A cycle of minimum length (as darts), or None for forests.

    Loops are 1-cycles and parallel pairs are 2-cycles; semiedges never lie on
    cycles.
    """
    for x in g.darts:
        if edge_kind(g, x) is EdgeKind.LOOP:
            return (x,)
    for x, y in parallel_pairs(g):
        if g.inv[x] != y and edge_kind(g, x) is EdgeKind.LINK:
            return (x, g.inv[y])
    best: Walk | None = None
    for s in g.vertices:
        cyc = _bfs_cycle(g, s, None if best is None else len(best))
        if cyc is not None and (best is None or len(cyc) < len(best)):
            best = cyc
            if len(best) == 3:
                break
    return best


def _bfs_cycle(g: DartGraph, s: int, bound: int | None) -> Walk | None:
    """Shortest cycle through ``s`` found by a BFS rooted at ``s`` (simple
    multigraph part only), strictly shorter than ``bound``."""
    n = g.n_vertices
    dist = [-1] * n
    parent = [-1] * n  # dart used to enter the vertex
    dist[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        if bound is not None and 2 * dist[u] + 1 >= bound:
            break
        for x in g.out_darts[u]:
            if g.inv[x] == x or x == (g.inv[parent[u]] if parent[u] >= 0 else -1):
                continue
            w = g.end(x)
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                parent[w] = x
                q.append(w)
            elif dist[w] >= dist[u]:
                path_u = _path_to(g, parent, u)
                path_w = _path_to(g, parent, w)
                # first darts must differ so that the two branches meet only at s
                if path_u and path_w and path_u[0] == path_w[0]:
                    continue
                cyc = tuple(path_u) + (x,) + inverse_walk(g, path_w)
                if is_cycle(g, cyc) and (bound is None or len(cyc) < bound):
                    return cyc
    return None


def _path_to(g: DartGraph, parent: list[int], v: int) -> list[int]:
    out = []
    while parent[v] >= 0:
        x = parent[v]
        out.append(x)
        v = g.beg[x]
    return out[::-1]


def girth(g: DartGraph) -> float:
    """Length of a shortest cycle; ``math.inf`` for forests."""
    cyc = shortest_cycle(g)
    return math.inf if cyc is None else len(cyc)


def count_c_cycles_through(g: DartGraph, x: int, c: int) -> int:
    """Number of c-cycles of a simple graph containing the edge of dart ``x``."""
    if c > MAX_CYCLE_LENGTH or g.n_vertices > MAX_CYCLE_VERTICES:
        raise ValueError(
            f"cycle counting limited to c <= {MAX_CYCLE_LENGTH} and "
            f"|V| <= {MAX_CYCLE_VERTICES}"
        )
    if c < 3:
        return 0
    u, v = g.beg[x], g.end(x)
    dist_u = _bounded_distances(g, u, c - 1)
    nbrs = g.neighbours
    on_path = {u, v}
    count = 0

    def extend(w: int, remaining: int) -> None:
        nonlocal count
        if remaining == 1:
            if u in nbrs[w] and w != v:
                count += 1
            elif u in nbrs[w] and c == 2:
                count += 1
            return
        for z in nbrs[w]:
            if z in on_path:
                continue
            dz = dist_u.get(z)
            if dz is None or dz > remaining - 1:
                continue
            on_path.add(z)
            extend(z, remaining - 1)
            on_path.discard(z)

    extend(v, c - 1)
    return count


def _bounded_distances(g: DartGraph, s: int, bound: int) -> dict[int, int]:
    dist = {s: 0}
    q = deque([s])
    while q:
        a = q.popleft()
        if dist[a] >= bound:
            continue
        for b in g.neighbours[a]:
            if b not in dist:
                dist[b] = dist[a] + 1
                q.append(b)
    return dist


def cycles_up_to(g: DartGraph, max_len: int) -> Iterator[Walk]:
    """Every cycle of a simple graph of length <= ``max_len``, each once.

    A cycle is reported starting at its smallest vertex, in the orientation
    whose second vertex is smaller than its last one.
    """
    if max_len > MAX_CYCLE_LENGTH or g.n_vertices > MAX_CYCLE_VERTICES:
        raise ValueError("cycle enumeration bound exceeded")
    out_darts = g.out_darts
    for s in g.vertices:
        stack: list[int] = []
        visited = {s}

        def grow(w: int) -> Iterator[Walk]:
            for x in out_darts[w]:
                z = g.end(x)
                if z == s and len(stack) >= 2:
                    first = g.end(stack[0])
                    if first < w:
                        yield tuple(stack) + (x,)
                    continue
                if z <= s or z in visited or len(stack) + 1 >= max_len:
                    continue
                visited.add(z)
                stack.append(x)
                yield from grow(z)
                stack.pop()
                visited.discard(z)

        yield from grow(s)


# ---------------------------------------------------------------- spanning trees


def spanning_tree(g: DartGraph, priority: Sequence[int] | None = None) -> frozenset[int]:
    """Darts (both directions) of a spanning tree, grown greedily.

    Candidate edges are taken in order of ``(priority[x], x)`` over one dart
    per edge (lower priority first) and kept when they join two components.
    """
    parent = list(g.vertices)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    reps = [x for x in g.darts if x < g.inv[x] and g.beg[x] != g.end(x)]
    key = (lambda x: (priority[x], x)) if priority is not None else (lambda x: x)
    tree: set[int] = set()
    for x in sorted(reps, key=key):
        a, b = find(g.beg[x]), find(g.end(x))
        if a != b:
            parent[a] = b
            tree.update((x, g.inv[x]))
    return frozenset(tree)


def tree_paths(g: DartGraph, tree: frozenset[int], root: int) -> dict[int, Walk]:
    """The unique tree walk from ``root`` to every vertex."""
    paths: dict[int, Walk] = {root: ()}
    todo = [root]
    while todo:
        u = todo.pop()
        for x in g.out_darts[u]:
            if x in tree:
                w = g.end(x)
                if w not in paths:
                    paths[w] = paths[u] + (x,)
                    todo.append(w)
    return paths


# ---------------------------------------------------------------- text format


def dumps(g: DartGraph) -> str:
    lines = [f"dartgraph {g.n_vertices} {g.n_darts}"]
    lines += [f"dart {x} {g.beg[x]} {g.inv[x]}" for x in g.darts]
    return "\n".join(lines) + "\n"


def parse_dart_block(lines: list[list[str]]) -> tuple[DartGraph, list[list[str]]]:
    """Consume the ``dartgraph`` header and dart lines; return the rest."""
    it = [t for t in lines if t and not t[0].startswith("#")]
    if not it or it[0][0] != "dartgraph":
        raise ValueError("missing 'dartgraph' header")
    nv, nd = int(it[0][1]), int(it[0][2])
    beg = [-1] * nd
    inv = [-1] * nd
    rest = []
    seen = 0
    for tok in it[1:]:
        if tok[0] == "dart":
            x = int(tok[1])
            beg[x], inv[x] = int(tok[2]), int(tok[3])
            seen += 1
        else:
            rest.append(tok)
    if seen != nd:
        raise ValueError(f"expected {nd} dart lines, got {seen}")
    g = DartGraph(nv, tuple(beg), tuple(inv))
    report = validate(g)
    if report is not None:
        raise ValueError(report)
    return g, rest


def loads(text: str) -> DartGraph:
    g, rest = parse_dart_block([line.split() for line in text.splitlines()])
    if rest:
        raise ValueError(f"unexpected line {' '.join(rest[0])!r}")
    return g


def dumps_edge_list(g: DartGraph) -> str:
    if not is_simple(g):
        raise ValueError("edge-list export requires a simple graph")
    return "".join(f"{u} {v}\n" for u, v in edge_list(g))
