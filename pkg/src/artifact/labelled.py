"""Labelled graphs (Delta, lambda) and the lambda* walk calculus."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from math import gcd, lcm
from typing import Iterator, Sequence

from .graph import (
    DartGraph,
    EdgeKind,
    edge_kind,
    is_connected,
    is_walk,
    parallel_pairs,
    parse_dart_block,
    dumps as dumps_dg,
)

ALLOWED_EDGE_TYPES = frozenset({(1, 1), (1, 2), (1, 3), (2, 3)})


@dataclass(frozen=True)
class LabelledGraph:
    graph: DartGraph
    lam: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.lam) != self.graph.n_darts:
            raise ValueError("lambda must be defined on every dart")
        if any(v < 1 for v in self.lam):
            raise ValueError("lambda values must be positive")

    @cached_property
    def potentials(self) -> tuple[Fraction, ...] | None:
        """lambda* of a walk from vertex 0 to each vertex, or None when the
        value depends on the walk (non-extendable) or the graph is disconnected."""
        return _potentials(self)


def lambda_star(lg: LabelledGraph, w: Sequence[int]) -> Fraction:
    """Product of lambda(x) / lambda(x^-1) along the walk."""
    g = lg.graph
    if not is_walk(g, w):
        raise ValueError("not a walk")
    out = Fraction(1)
    for x in w:
        out *= Fraction(lg.lam[x], lg.lam[g.inv[x]])
    return out


def deg_lambda(lg: LabelledGraph, v: int) -> int:
    if not 0 <= v < lg.graph.n_vertices:
        raise ValueError(f"unknown vertex {v}")
    return sum(lg.lam[x] for x in lg.graph.out_darts[v])


def edge_type(lg: LabelledGraph, x: int) -> tuple[int, int] | None:
    """Sorted pair (lambda(x), lambda(x^-1)); None for semiedges."""
    y = lg.graph.inv[x]
    if y == x:
        return None
    a, b = lg.lam[x], lg.lam[y]
    return (a, b) if a <= b else (b, a)


def _potentials(lg: LabelledGraph) -> tuple[Fraction, ...] | None:
    g = lg.graph
    pot: list[Fraction | None] = [None] * g.n_vertices
    pot[0] = Fraction(1)
    todo = [0]
    while todo:
        u = todo.pop()
        for x in g.out_darts[u]:
            w = g.end(x)
            val = pot[u] * Fraction(lg.lam[x], lg.lam[g.inv[x]])
            if pot[w] is None:
                pot[w] = val
                todo.append(w)
            elif pot[w] != val:
                return None
    if any(p is None for p in pot):
        return None
    return tuple(pot)  # type: ignore[arg-type]


def is_extendable(lg: LabelledGraph) -> bool:
    """True iff lambda* is 1 on every closed walk.

    Equivalent to the existence of vertex potentials p with
    p(end x) = p(beg x) * lambda(x) / lambda(x^-1) for every dart, which is
    what is checked (one pass over all darts after a search tree fixes p).
    """
    if not is_connected(lg.graph):
        raise ValueError("labelled graph must be connected")
    return lg.potentials is not None


def ccv_extendability_failure(lg: LabelledGraph) -> int | None:
    """Number of the first failing ccv-extendability condition, else None.

    1 extendable, 2 equal labels only when both are 1, 3 parallel darts have
    label 1, 4 semiedge darts have label 1, 5 every vertex has deg_lambda 3.
    """
    g = lg.graph
    if not is_extendable(lg):
        return 1
    for x in g.darts:
        y = g.inv[x]
        if y != x and lg.lam[x] == lg.lam[y] and lg.lam[x] != 1:
            return 2
    for x, y in parallel_pairs(g):
        if lg.lam[x] != 1 or lg.lam[y] != 1:
            return 3
    for x in g.darts:
        if g.inv[x] == x and lg.lam[x] != 1:
            return 4
    for v in g.vertices:
        if deg_lambda(lg, v) != 3:
            return 5
    return None


def is_ccv_extendable(lg: LabelledGraph) -> bool:
    return ccv_extendability_failure(lg) is None


def base_index(lg: LabelledGraph) -> tuple[int, ...]:
    """Smallest positive integer index vector proportional to the potentials."""
    pot = lg.potentials
    if pot is None:
        raise ValueError("labelled graph is not extendable")
    den = lcm(*(p.denominator for p in pot))
    ints = [int(p * den) for p in pot]
    d = gcd(*ints)
    return tuple(i // d for i in ints)


# ---------------------------------------------------------------- artefacts


@dataclass(frozen=True)
class ArtefactPattern:
    id: str
    pattern: LabelledGraph
    reconstructed: bool = True
    wildcards: frozenset[int] = field(default_factory=frozenset)


Embedding = tuple[tuple[int, ...], tuple[int, ...]]


def embeddings(pat: ArtefactPattern, lg: LabelledGraph) -> Iterator[Embedding]:
    """Injective maps of the pattern into ``lg`` preserving beg, inv and
    lambda (except on wildcard darts).  Yields (vertex map, dart map)."""
    p, h = pat.pattern.graph, lg.graph
    plam, hlam = pat.pattern.lam, lg.lam
    vmap: list[int] = [-1] * p.n_vertices
    dmap: list[int] = [-1] * p.n_darts
    used_d: set[int] = set()
    order = _dart_order(p)

    def dart_ok(px: int, hx: int) -> bool:
        if hx in used_d:
            return False
        if px not in pat.wildcards and plam[px] != hlam[hx]:
            return False
        if (p.inv[px] == px) != (h.inv[hx] == hx):
            return False
        return True

    def assign_vertex(pv: int, hv: int) -> bool:
        if vmap[pv] == -1:
            if hv in vmap:
                return False
            vmap[pv] = hv
            return True
        return vmap[pv] == hv

    def rec(k: int) -> Iterator[Embedding]:
        if k == len(order):
            if all(v >= 0 for v in vmap):
                yield tuple(vmap), tuple(dmap)
            else:
                # isolated pattern vertices: any unused host vertex
                pv = vmap.index(-1)
                for hv in h.vertices:
                    if hv not in vmap:
                        vmap[pv] = hv
                        yield from rec(k)
                        vmap[pv] = -1
            return
        px = order[k]
        if dmap[px] >= 0:
            yield from rec(k + 1)
            return
        pv = p.beg[px]
        candidates = h.out_darts[vmap[pv]] if vmap[pv] >= 0 else h.darts
        for hx in candidates:
            if not dart_ok(px, hx):
                continue
            py, hy = p.inv[px], h.inv[hx]
            if py != px and not dart_ok(py, hy):
                continue
            saved = list(vmap)
            if not assign_vertex(pv, h.beg[hx]):
                continue
            if not assign_vertex(p.beg[py], h.beg[hy]):
                vmap[:] = saved
                continue
            dmap[px], dmap[py] = hx, hy
            used_d.update((hx, hy))
            yield from rec(k + 1)
            used_d.difference_update((hx, hy))
            dmap[px] = dmap[py] = -1
            vmap[:] = saved

    yield from rec(0)


def _dart_order(p: DartGraph) -> list[int]:
    """Pattern darts in a connected-first order, to keep backtracking local."""
    order: list[int] = []
    seen_v: set[int] = set()
    for start in p.vertices:
        if start in seen_v:
            continue
        seen_v.add(start)
        todo = [start]
        while todo:
            v = todo.pop(0)
            for x in p.out_darts[v]:
                order.append(x)
                w = p.end(x)
                if w not in seen_v:
                    seen_v.add(w)
                    todo.append(w)
    return order


def load_artefacts() -> list[ArtefactPattern]:
    text = resources.files("artifact").joinpath("data/artefacts.lg").read_text()
    return loads_patterns(text)


def find_artefacts(
    lg: LabelledGraph, patterns: Sequence[ArtefactPattern] | None = None
) -> list[tuple[str, Embedding]]:
    pats = load_artefacts() if patterns is None else patterns
    return [(pat.id, emb) for pat in pats for emb in embeddings(pat, lg)]


def contains_artefact(lg: LabelledGraph, pat: ArtefactPattern) -> bool:
    return next(embeddings(pat, lg), None) is not None


# ---------------------------------------------------------------- text format


def dumps(lg: LabelledGraph, wildcards: frozenset[int] = frozenset()) -> str:
    lines = [dumps_dg(lg.graph).rstrip("\n")]
    for x in lg.graph.darts:
        lines.append(f"lambda {x} {'*' if x in wildcards else lg.lam[x]}")
    return "\n".join(lines) + "\n"


def _parse_lambda(g: DartGraph, rest: list[list[str]]) -> tuple[list[int], set[int], list[list[str]]]:
    lam = [0] * g.n_darts
    wild: set[int] = set()
    other = []
    for tok in rest:
        if tok[0] == "lambda":
            x = int(tok[1])
            if tok[2] == "*":
                wild.add(x)
                lam[x] = 1
            else:
                lam[x] = int(tok[2])
        else:
            other.append(tok)
    if any(v == 0 for v in lam):
        raise ValueError("missing lambda line")
    return lam, wild, other


def parse_block(lines: list[list[str]]) -> tuple[LabelledGraph, list[list[str]]]:
    g, rest = parse_dart_block(lines)
    lam, wild, other = _parse_lambda(g, rest)
    if wild:
        raise ValueError("wildcards only allowed in pattern files")
    return LabelledGraph(g, tuple(lam)), other


def loads(text: str) -> LabelledGraph:
    lg, rest = parse_block([line.split() for line in text.splitlines()])
    if rest:
        raise ValueError(f"unexpected line {' '.join(rest[0])!r}")
    return lg


def loads_patterns(text: str) -> list[ArtefactPattern]:
    blocks: list[tuple[list[str], list[list[str]]]] = []
    for line in text.splitlines():
        tok = line.split()
        if not tok or tok[0].startswith("#"):
            continue
        if tok[0] == "pattern":
            blocks.append((tok, []))
        elif not blocks:
            raise ValueError("pattern file must start with a 'pattern' header")
        else:
            blocks[-1][1].append(tok)
    out = []
    for header, body in blocks:
        if len(header) != 4 or header[2] != "reconstructed":
            raise ValueError(f"bad pattern header {' '.join(header)!r}")
        g, rest = parse_dart_block(body)
        lam, wild, other = _parse_lambda(g, rest)
        if other:
            raise ValueError(f"unexpected line {' '.join(other[0])!r}")
        out.append(
            ArtefactPattern(
                header[1],
                LabelledGraph(g, tuple(lam)),
                header[3].lower() == "true",
                frozenset(wild),
            )
        )
    return out


def dumps_patterns(patterns: Sequence[ArtefactPattern]) -> str:
    parts = []
    for pat in patterns:
        parts.append(f"pattern {pat.id} reconstructed {str(pat.reconstructed).lower()}\n")
        parts.append(dumps(pat.pattern, pat.wildcards))
    return "".join(parts)


def edge_kinds(lg: LabelledGraph) -> list[EdgeKind]:
    return [edge_kind(lg.graph, x) for x in lg.graph.darts]
