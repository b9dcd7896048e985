"""Cyclic generalised voltage graphs (Delta, lambda, iota, zeta) and their covers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

from .graph import (
    DartGraph,
    EdgeKind,
    edge_kind,
    edge_list,
    is_walk,
    parallel_pairs,
    spanning_tree,
    tree_paths,
)
from .labelled import LabelledGraph, deg_lambda, edge_type, parse_block
from .labelled import dumps as dumps_lg


@dataclass(frozen=True)
class CcvGraph:
    """Voltage datum.  ``zeta`` is kept exactly as given; use :func:`make_ccv`
    to obtain canonical residues in ``[0, lambda(x) * iota(beg x))``."""

    base: LabelledGraph
    iota: tuple[int, ...]
    zeta: tuple[int, ...]

    @property
    def graph(self) -> DartGraph:
        return self.base.graph

    @property
    def lam(self) -> tuple[int, ...]:
        return self.base.lam

    def modulus(self, x: int) -> int:
        """lambda(x) * iota(beg x), the size of the fibre of x."""
        return self.base.lam[x] * self.iota[self.graph.beg[x]]

    @cached_property
    def order(self) -> int:
        """Number of vertices of the cover."""
        return sum(self.iota)

    @cached_property
    def rho_order(self) -> int:
        return lcm(*(self.modulus(x) for x in self.graph.darts)) if self.graph.n_darts else 1


def make_ccv(base: LabelledGraph, iota: Sequence[int], zeta: Sequence[int]) -> CcvGraph:
    """Build a voltage datum with canonical residues; raises if invalid."""
    g = base.graph
    iota = tuple(iota)
    if len(iota) != g.n_vertices or len(zeta) != g.n_darts:
        raise ValueError("iota/zeta have the wrong length")
    if any(i < 1 for i in iota):
        raise ValueError("iota values must be positive")
    red = tuple(z % (base.lam[x] * iota[g.beg[x]]) for x, z in enumerate(zeta))
    c = CcvGraph(base, iota, red)
    report = validate_ccv(c)
    if report is not None:
        raise ValueError(report)
    return c


def validate_ccv(c: CcvGraph) -> str | None:
    """Check the ratio and inverse-voltage equations on every dart."""
    g = c.graph
    if len(c.iota) != g.n_vertices or len(c.zeta) != g.n_darts:
        return "iota/zeta have the wrong length"
    if any(i < 1 for i in c.iota):
        return "iota values must be positive"
    for x in g.darts:
        y = g.inv[x]
        if c.modulus(x) != c.modulus(y):
            return f"ratio equation fails at dart {x}"
    for x in g.darts:
        y = g.inv[x]
        if (c.zeta[y] + c.zeta[x]) % c.modulus(x) != 0:
            return f"inverse-voltage equation fails at dart {x}"
    return None


# ---------------------------------------------------------------- spanning trees


def ccv_tree(lg: LabelledGraph) -> frozenset[int]:
    """Spanning tree containing every edge of type [i, j] with i != j.

    Such edges are taken first, so the tree exists iff they form a forest; an
    explicit error is raised otherwise.
    """
    g = lg.graph
    priority = [0 if _unbalanced(lg, x) else 1 for x in g.darts]
    tree = spanning_tree(g, priority)
    missing = [x for x in g.darts if _unbalanced(lg, x) and x not in tree]
    if missing:
        raise ValueError(
            f"no spanning tree contains every unbalanced edge (dart {missing[0]})"
        )
    return tree


def _unbalanced(lg: LabelledGraph, x: int) -> bool:
    t = edge_type(lg, x)
    return t is not None and t[0] != t[1]


def is_tree_normalised(c: CcvGraph, tree: Iterable[int]) -> bool:
    return all(c.zeta[x] % c.modulus(x) == 0 for x in tree)


def ccv_failure(c: CcvGraph, tree: Iterable[int]) -> int | None:
    """First failed condition of the cubic-cover characterisation, or None.

    1 coprime labels on each edge, 2 parallel darts differ in voltage modulo
    the gcd of their end indices, 3 semiedge voltages are nonzero modulo the
    index, 4 voltages and indices are jointly coprime, 5 deg_lambda is 3.
    """
    tree = frozenset(tree)
    if not is_tree_normalised(c, tree):
        raise ValueError("voltage is not normalised on the given tree")
    g, lam, iota, zeta = c.graph, c.lam, c.iota, c.zeta
    for x in g.darts:
        if gcd(lam[x], lam[g.inv[x]]) != 1:
            return 1
    for x, y in parallel_pairs(g):
        d = gcd(iota[g.beg[x]], iota[g.end(x)])
        if (zeta[x] - zeta[y]) % d == 0:
            return 2
    for x in g.darts:
        if g.inv[x] == x and zeta[x] % iota[g.beg[x]] == 0:
            return 3
    if gcd(*zeta, *iota) != 1:
        return 4
    for v in g.vertices:
        if deg_lambda(c.base, v) != 3:
            return 5
    return None


def is_ccv(c: CcvGraph, tree: Iterable[int] | None = None) -> bool:
    return ccv_failure(c, ccv_tree(c.base) if tree is None else tree) is None


def is_simplified(c: CcvGraph, tree: Iterable[int] | None = None) -> bool:
    g, iota, zeta = c.graph, c.iota, c.zeta
    tree = frozenset(ccv_tree(c.base) if tree is None else tree)
    if any(zeta[x] != 0 for x in tree):
        return False
    if any(_unbalanced(c.base, x) and x not in tree for x in g.darts):
        return False
    for x in g.darts:
        u = g.beg[x]
        if not 0 <= zeta[x] < gcd(iota[u], iota[g.end(x)]):
            return False
        kind = edge_kind(g, x)
        if kind is EdgeKind.SEMIEDGE and 2 * zeta[x] != iota[u]:
            return False
        if kind is EdgeKind.LOOP and (zeta[x] == 0 or 2 * zeta[x] == iota[u]):
            return False
    return True


# ---------------------------------------------------------------- covers


@dataclass(frozen=True)
class CoverGraph:
    """Cover of a voltage datum.  Cover vertex ``offset_v[v] + i`` is v_i and
    cover dart ``offset_d[x] + i`` is x_i."""

    graph: DartGraph
    ccv: CcvGraph
    offset_v: tuple[int, ...]
    offset_d: tuple[int, ...]
    proj_v: tuple[int, ...]
    proj_d: tuple[int, ...]
    index_v: tuple[int, ...]
    index_d: tuple[int, ...]
    rho_v: tuple[int, ...]
    rho_d: tuple[int, ...]

    def vertex(self, v: int, i: int) -> int:
        return self.offset_v[v] + i % self.ccv.iota[v]

    def dart(self, x: int, i: int) -> int:
        return self.offset_d[x] + i % self.ccv.modulus(x)

    def fibre(self, v: int) -> range:
        return range(self.offset_v[v], self.offset_v[v] + self.ccv.iota[v])

    @property
    def rho_order(self) -> int:
        return self.ccv.rho_order


def _offsets(sizes: Sequence[int]) -> tuple[int, ...]:
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return tuple(out)


def cover(c: CcvGraph) -> CoverGraph:
    report = validate_ccv(c)
    if report is not None:
        raise ValueError(report)
    g, iota, zeta = c.graph, c.iota, c.zeta
    mods = [c.modulus(x) for x in g.darts]
    off_v = _offsets(iota)
    off_d = _offsets(mods)
    beg: list[int] = []
    inv: list[int] = []
    proj_d: list[int] = []
    index_d: list[int] = []
    rho_d: list[int] = []
    for x in g.darts:
        u, y, L = g.beg[x], g.inv[x], mods[x]
        iu, zx, oy = iota[u], zeta[x], off_d[y]
        base_u = off_v[u]
        for i in range(L):
            beg.append(base_u + i % iu)
            inv.append(oy + (i + zx) % L)
            proj_d.append(x)
            index_d.append(i)
            rho_d.append(off_d[x] + (i + 1) % L)
    proj_v = [v for v in g.vertices for _ in range(iota[v])]
    index_v = [i for v in g.vertices for i in range(iota[v])]
    rho_v = [off_v[v] + (i + 1) % iota[v] for v in g.vertices for i in range(iota[v])]
    graph = DartGraph(c.order, tuple(beg), tuple(inv))
    return CoverGraph(
        graph, c, off_v, off_d, tuple(proj_v), tuple(proj_d), tuple(index_v),
        tuple(index_d), tuple(rho_v), tuple(rho_d),
    )


def cover_adjacency_oracle(c: CcvGraph, tree: Iterable[int] | None = None) -> list[tuple[int, int]]:
    """Edges of the cover produced from the four adjacency rules for
    simplified voltages only (independent of :func:`cover`)."""
    tree = frozenset(ccv_tree(c.base) if tree is None else tree)
    if not is_simplified(c, tree):
        raise ValueError("voltage is not simplified")
    g, lam, iota, zeta = c.graph, c.lam, c.iota, c.zeta
    off = _offsets(iota)

    def vid(v: int, i: int) -> int:
        return off[v] + i % iota[v]

    edges: set[tuple[int, int]] = set()

    def add(a: int, b: int) -> None:
        edges.add((min(a, b), max(a, b)))

    for x in g.darts:
        u, v = g.beg[x], g.end(x)
        kind = edge_kind(g, x)
        if kind is EdgeKind.SEMIEDGE:
            for i in range(iota[u]):
                add(vid(u, i), vid(u, i + iota[u] // 2))
        elif kind is EdgeKind.LOOP:
            for i in range(iota[u]):
                add(vid(u, i), vid(u, i + zeta[x]))
                add(vid(u, i), vid(u, i - zeta[x]))
        else:
            a, b = lam[x], lam[g.inv[x]]
            if a == b == 1:
                for i in range(iota[u]):
                    add(vid(u, i), vid(v, i + zeta[x]))
            elif a == 1:
                # u is the lambda = 1 side: iota(u) = b * iota(v)
                for i in range(iota[v]):
                    for k in range(b):
                        add(vid(u, i + k * iota[v]), vid(v, i))
            elif b == 1:
                continue  # handled from the inverse dart
            else:
                raise ValueError(f"no adjacency rule for a [{a},{b}]-edge")
    return sorted(edges)


def cover_edge_set(cg: CoverGraph) -> list[tuple[int, int]]:
    return sorted(set(edge_list(cg.graph)))


# ---------------------------------------------------------------- simplification


def tree_normalise(c: CcvGraph) -> tuple[CcvGraph, frozenset[int]]:
    """Relabel fibres so that every dart of the ccv tree has voltage 0.

    Returns the shifted datum and the tree; the ccv conditions are not checked.
    """
    report = validate_ccv(c)
    if report is not None:
        raise ValueError(report)
    g = c.graph
    tree = ccv_tree(c.base)
    shift = [0] * g.n_vertices
    for v, path in tree_paths(g, tree, 0).items():
        shift[v] = -sum(c.zeta[x] for x in path)
    new = [
        (c.zeta[x] + shift[g.end(x)] - shift[g.beg[x]]) % c.modulus(x) for x in g.darts
    ]
    return CcvGraph(c.base, c.iota, tuple(new)), tree


def simplify_voltage(c: CcvGraph, verify: bool = True) -> CcvGraph:
    """Equivalent datum with a simplified voltage.

    Each fibre v is relabelled by an integer shift t(v) chosen along the tree
    so that tree voltages vanish; the new voltage is
    zeta'(x) = zeta(x) + t(end x) - t(beg x).  Residues are then normalised.
    With ``verify`` the two covers are compared by canonical form.
    """
    out, tree = tree_normalise(c)
    if ccv_failure(out, tree) is not None:
        raise ValueError("input is not a ccv-graph")
    if not is_simplified(out, tree):
        raise RuntimeError("simplification did not produce a simplified voltage")
    if verify:
        from .symmetry import canonical_form

        if canonical_form(cover(c).graph) != canonical_form(cover(out).graph):
            raise RuntimeError("simplified cover is not isomorphic to the original")
    return out


# ---------------------------------------------------------------- walks and endsets


@dataclass(frozen=True)
class Endset:
    """The set {offset + k * stride (mod modulus)}."""

    offset: int
    stride: int
    modulus: int

    def elements(self) -> frozenset[int]:
        step = gcd(self.stride, self.modulus) or self.modulus
        return frozenset((self.offset + k * step) % self.modulus for k in range(self.modulus // step))

    def __contains__(self, j: object) -> bool:
        if not isinstance(j, int):
            return False
        step = gcd(self.stride, self.modulus) or self.modulus
        return (j - self.offset) % step == 0


def endset(c: CcvGraph, w: Sequence[int]) -> Endset:
    g = c.graph
    if not is_walk(g, w):
        raise ValueError("not a walk")
    m = c.iota[g.end(w[-1])]
    d = 0
    for x in w:
        d = gcd(d, c.iota[g.beg[x]])
    return Endset(sum(c.zeta[x] for x in w) % m, d, m)


def lifts(c: CcvGraph, w: Sequence[int], start: int = 0) -> list[tuple[int, ...]]:
    """Every lift of ``w`` beginning at the cover vertex with index ``start``
    in the fibre of beg(w).  Lifts are tuples of cover dart ids (numbered as
    in :func:`cover`)."""
    g = c.graph
    if not is_walk(g, w):
        raise ValueError("not a walk")
    off_d = _offsets([c.modulus(x) for x in g.darts])
    out: list[tuple[int, ...]] = []

    def rec(k: int, j: int, acc: list[int]) -> None:
        if k == len(w):
            out.append(tuple(acc))
            return
        x = w[k]
        iu, L = c.iota[g.beg[x]], c.modulus(x)
        for t in range(j, L, iu):
            acc.append(off_d[x] + t)
            rec(k + 1, (t + c.zeta[x]) % L % c.iota[g.end(x)], acc)
            acc.pop()

    rec(0, start % c.iota[g.beg[w[0]]], [])
    return out


def lift_end_indices(cg: CoverGraph, walks: Iterable[tuple[int, ...]]) -> set[int]:
    return {cg.index_v[cg.graph.end(wk[-1])] for wk in walks}


def is_lambda_reduced(lg: LabelledGraph, w: Sequence[int]) -> bool:
    g = lg.graph
    for a, b in zip(w, w[1:]):
        if b == g.inv[a] and lg.lam[g.inv[a]] == 1:
            return False
    if g.end(w[-1]) == g.beg[w[0]] and w[-1] == g.inv[w[0]] and lg.lam[w[0]] == 1:
        return False
    return True


# ---------------------------------------------------------------- text format


def dumps(c: CcvGraph) -> str:
    lines = [dumps_lg(c.base).rstrip("\n")]
    lines += [f"iota {v} {c.iota[v]}" for v in c.graph.vertices]
    lines += [f"zeta {x} {c.zeta[x]}" for x in c.graph.darts]
    return "\n".join(lines) + "\n"


def loads(text: str) -> CcvGraph:
    lg, rest = parse_block([line.split() for line in text.splitlines()])
    iota = [0] * lg.graph.n_vertices
    zeta: list[int | None] = [None] * lg.graph.n_darts
    for tok in rest:
        if tok[0] not in ("iota", "zeta") or len(tok) != 3:
            raise ValueError(f"unexpected line {' '.join(tok)!r}")
        target = iota if tok[0] == "iota" else zeta
        i = int(tok[1])
        if not 0 <= i < len(target):
            raise ValueError(f"{tok[0]} index {i} out of range")
        target[i] = int(tok[2])
    if any(z is None for z in zeta) or any(i == 0 for i in iota):
        raise ValueError("missing iota or zeta line")
    return make_ccv(lg, iota, zeta)  # type: ignore[arg-type]


def dumps_fibres(cg: CoverGraph) -> str:
    """Sidecar mapping cover elements to (base element, index)."""
    lines = [f"vertex {v} {cg.proj_v[v]} {cg.index_v[v]}" for v in cg.graph.vertices]
    lines += [f"dart {x} {cg.proj_d[x]} {cg.index_d[x]}" for x in cg.graph.darts]
    return "\n".join(lines) + "\n"
