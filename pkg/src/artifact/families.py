"""Named cubic graph families and the Delta12 voltage datum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable

from .graph import DartGraph, from_edges, multigraph
from .labelled import LabelledGraph
from .voltage import CcvGraph, cover, make_ccv

FAMILIES = (
    "Prism", "Moeb", "GP", "Haar", "X", "Y", "SDW",
    "Tutte8Cage", "TruncatedTetrahedron", "Delta12Cover",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.family
        return f"{self.family}({','.join(map(str, self.params))})"


def _edges_mod(n: int, pairs) -> list[tuple[int, int]]:
    out = set()
    for a, b in pairs:
        if a == b:
            raise ValueError("parameters produce a loop")
        out.add((min(a, b), max(a, b)))
    return sorted(out)


def prism(m: int) -> DartGraph:
    if m < 3:
        raise ValueError("Prism(m) needs m >= 3")
    return generalized_petersen(m, 1)


def moebius_ladder(n: int) -> DartGraph:
    if n < 4 or n % 2:
        raise ValueError("Moeb(n) needs even n >= 4")
    pairs = [(x, (x + 1) % n) for x in range(n)] + [(x, (x + n // 2) % n) for x in range(n // 2)]
    return from_edges(n, _edges_mod(n, pairs))


def generalized_petersen(m: int, r: int) -> DartGraph:
    """GP(m, r): outer cycle u_i = i, spokes to v_i = m + i, inner v_i ~ v_{i+r}."""
    if m < 3:
        raise ValueError("GP(m, r) needs m >= 3")
    r %= m
    if 2 * r > m:
        r = m - r
    if r == 0 or 2 * r == m:
        raise ValueError("GP(m, r) needs 1 <= r < m/2")
    pairs = [(i, (i + 1) % m) for i in range(m)]
    pairs += [(i, m + i) for i in range(m)]
    pairs += [(m + i, m + (i + r) % m) for i in range(m)]
    return from_edges(2 * m, _edges_mod(2 * m, pairs))


def haar(n: int, i: int, j: int) -> DartGraph:
    """H(n, i, j) on Z_n x Z_2: (x, 0) ~ (x + s, 1) for s in {0, i, j}."""
    i, j = i % n, j % n
    if n < 3 or i == 0 or j == 0 or i == j:
        raise ValueError("H(n, i, j) needs distinct nonzero i, j")
    pairs = [(x, n + (x + s) % n) for x in range(n) for s in (0, i, j)]
    return from_edges(2 * n, _edges_mod(2 * n, pairs))


def x_shift(k: int) -> int:
    return (k + 3) // 2 if k % 4 == 1 else (k + 3) // 2 + k


def x_graph(k: int) -> DartGraph:
    """X(k): u_i = i, v_i = 2k + i, w_i = 4k + i for i in Z_2k."""
    if k <= 1 or k % 2 == 0:
        raise ValueError("X(k) needs odd k > 1")
    n, r = 2 * k, x_shift(k)
    u = lambda i: i % n
    v = lambda i: n + i % n
    w = lambda i: 2 * n + i % n
    pairs = []
    for i in range(n):
        pairs += [(u(i), u(i + k)), (u(i), v(i)), (u(i), w(i)), (v(i), w(i + 1)), (v(i), w(i + r))]
    return from_edges(3 * n, _edges_mod(3 * n, pairs))


def y_graph(k: int) -> DartGraph:
    if k <= 1 or k % 2 == 0:
        raise ValueError("Y(k) needs odd k > 1")
    n = 2 * k
    u = lambda i: i % n
    v = lambda i: n + i % n
    w = lambda i: 2 * n + i % n
    pairs = []
    for i in range(n):
        pairs += [(u(i), u(i + 1)), (u(i), v(i)), (v(i), w(i)), (v(i), w(i + 2)), (w(i), w(i + k))]
    return from_edges(3 * n, _edges_mod(3 * n, pairs))


def sdw_vertex(m: int, t: int, x: int, i: int, j: int) -> int:
    return ((x % m) * t + i % t) * 2 + j


def sdw(m: int, t: int) -> DartGraph:
    """SDW(m, t) on Z_m x Z_t x Z_2."""
    if m < 3 or t < 3:
        raise ValueError("SDW(m, t) needs m, t >= 3")
    pairs = []
    for x in range(m):
        for i in range(t):
            a = sdw_vertex(m, t, x, i, 0)
            pairs += [(a, sdw_vertex(m, t, x, i + 1, 1)), (a, sdw_vertex(m, t, x, i - 1, 1))]
            pairs.append((sdw_vertex(m, t, x, i, 1), sdw_vertex(m, t, x + 1, i, 0)))
    return from_edges(2 * m * t, _edges_mod(2 * m * t, pairs))


TUTTE_8_CAGE_EDGES = (
    (0, 1), (0, 17), (0, 29), (1, 2), (1, 22), (2, 3), (2, 9), (3, 4), (3, 26),
    (4, 5), (4, 13), (5, 6), (5, 18), (6, 7), (6, 23), (7, 8), (7, 28), (8, 9),
    (8, 15), (9, 10), (10, 11), (10, 19), (11, 12), (11, 24), (12, 13), (12, 29),
    (13, 14), (14, 15), (14, 21), (15, 16), (16, 17), (16, 25), (17, 18), (18, 19),
    (19, 20), (20, 21), (20, 27), (21, 22), (22, 23), (23, 24), (24, 25), (25, 26),
    (26, 27), (27, 28), (28, 29),
)


def tutte_8_cage() -> DartGraph:
    return from_edges(30, TUTTE_8_CAGE_EDGES)


def _truncate(g: DartGraph) -> DartGraph:
    """Replace each vertex by a cycle on its darts; the new vertex set is
    the dart set of ``g``."""
    pairs = []
    for v in g.vertices:
        ds = g.out_darts[v]
        k = len(ds)
        if k == 3:
            pairs += [(ds[0], ds[1]), (ds[1], ds[2]), (ds[0], ds[2])]
        else:
            pairs += [(ds[a], ds[(a + 1) % k]) for a in range(k)]
    pairs += [(x, g.inv[x]) for x in g.darts if x < g.inv[x]]
    return from_edges(g.n_darts, _edges_mod(g.n_darts, pairs))


def truncated_tetrahedron() -> DartGraph:
    k4 = from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    return _truncate(k4)


# ---------------------------------------------------------------- Delta12

DELTA12_VERTICES = ("u", "v", "a", "b")


def delta12(m: int, r: int, s: int) -> CcvGraph:
    """Voltage datum on u, v, a, b with iota = (2m, 2m, m, m).

    Two [1,1]-edges u-v with voltages 0 and r, [1,2]-edges a-u and b-v with
    the a, b ends carrying lambda 2 (voltage 0), and a [1,1]-edge a-b with
    voltage s.
    """
    if m <= 3:
        raise ValueError("Delta12 needs m > 3")
    if r == s:
        raise ValueError("r and s must be distinct")
    u, v, a, b = range(4)
    g = multigraph(4, links=[(u, v), (u, v), (a, u), (b, v), (a, b)])
    lam = (1, 1, 1, 1, 2, 1, 2, 1, 1, 1)
    zeta = (0, 0, r, -r, 0, 0, 0, 0, s, -s)
    return make_ccv(LabelledGraph(g, lam), (2 * m, 2 * m, m, m), zeta)


def gamma12(m: int, r: int, s: int) -> DartGraph:
    return cover(delta12(m, r, s)).graph


def gamma12_vertex(m: int, name: str, i: int) -> int:
    """Cover vertex id of u_i, v_i, a_i or b_i in gamma12(m, ., .)."""
    k = DELTA12_VERTICES.index(name)
    sizes = (2 * m, 2 * m, m, m)
    return sum(sizes[:k]) + i % sizes[k]


def phi_iso(m: int) -> dict[tuple[int, int, int], tuple[str, int]]:
    """Explicit bijection SDW(m, 3) -> Gamma12(m, 1, 2) for odd m > 3."""
    if m <= 3 or m % 2 == 0:
        raise ValueError("phi is defined for odd m > 3")
    out: dict[tuple[int, int, int], tuple[str, int]] = {}
    for i in range(m):
        even = i % 2 == 0
        out[(i, 0, 0)] = ("b", (i + 1) % m)
        out[(i, 0, 1)] = ("a", i % m)
        out[(i, 1, 0)] = ("u", (i + m if even else i) % (2 * m))
        out[(i, 1, 1)] = ("v", (i + 1 if even else i + m + 1) % (2 * m))
        out[(i, 2, 0)] = ("u", (i if even else i + m) % (2 * m))
        out[(i, 2, 1)] = ("v", (i + m + 1 if even else i + 1) % (2 * m))
    return out


def phi_permutation(m: int) -> tuple[int, ...]:
    """phi as a list indexed by SDW(m, 3) vertex id, valued in Gamma12 ids."""
    perm = [0] * (6 * m)
    for (x, i, j), (name, k) in phi_iso(m).items():
        perm[sdw_vertex(m, 3, x, i, j)] = gamma12_vertex(m, name, k)
    return tuple(perm)


# ---------------------------------------------------------------- Haar graphs


def haar_is_circulant(m: int, x: int, y: int) -> bool:
    """Whether the connected cyclic Haar graph H(m, x, y) is a circulant."""
    if m < 5:
        raise ValueError("the circulance test needs m >= 5")
    if gcd(m, x, y) != 1:
        raise ValueError("H(m, x, y) is disconnected")
    if m % 2 == 0:
        return False
    target = {x % m, y % m}
    for a in range(1, m):
        if gcd(a, m) != 1:
            continue
        if target == {a, 2 * a % m} or target == {a, -a % m}:
            return True
    return False


# ---------------------------------------------------------------- dispatch

_BUILDERS: dict[str, tuple[int, Callable[..., DartGraph]]] = {
    "Prism": (1, prism),
    "Moeb": (1, moebius_ladder),
    "GP": (2, generalized_petersen),
    "Haar": (3, haar),
    "X": (1, x_graph),
    "Y": (1, y_graph),
    "SDW": (2, sdw),
    "Tutte8Cage": (0, tutte_8_cage),
    "TruncatedTetrahedron": (0, truncated_tetrahedron),
    "Delta12Cover": (3, gamma12),
}

DOMAINS = {
    "Prism": "m >= 3 (order 2m)",
    "Moeb": "n >= 4 even (order n)",
    "GP": "m >= 3, 1 <= r < m/2 (order 2m)",
    "Haar": "n, i, j with i != j nonzero mod n (order 2n)",
    "X": "k > 1 odd (order 6k)",
    "Y": "k > 1 odd (order 6k)",
    "SDW": "m, t >= 3 (order 2mt)",
    "Tutte8Cage": "no parameters (order 30)",
    "TruncatedTetrahedron": "no parameters (order 12)",
    "Delta12Cover": "m > 3, r != s (order 6m)",
}


def build(spec: FamilySpec) -> DartGraph:
    if spec.family not in _BUILDERS:
        raise ValueError(f"unknown family {spec.family!r}")
    arity, fn = _BUILDERS[spec.family]
    if len(spec.params) != arity:
        raise ValueError(f"{spec.family} takes {arity} parameters")
    return fn(*spec.params)


def expected_order(spec: FamilySpec) -> int:
    f, p = spec.family, spec.params
    return {
        "Prism": lambda: 2 * p[0],
        "Moeb": lambda: p[0],
        "GP": lambda: 2 * p[0],
        "Haar": lambda: 2 * p[0],
        "X": lambda: 6 * p[0],
        "Y": lambda: 6 * p[0],
        "SDW": lambda: 2 * p[0] * p[1],
        "Tutte8Cage": lambda: 30,
        "TruncatedTetrahedron": lambda: 12,
        "Delta12Cover": lambda: 6 * p[0],
    }[f]()


def known_properties(spec: FamilySpec) -> dict[str, object]:
    """Stated values (order, kappa, eta, girth, ...) for a family member.

    Raises when nothing beyond the order is stated for this member.
    """
    f, p = spec.family, spec.params
    out: dict[str, object] = {"order": expected_order(spec)}
    if f == "Prism":
        m = p[0]
        out["kappa"] = 1 if m % 2 else 2
        out["eta"] = Fraction(4, 3) if m == 4 else Fraction(out["kappa"])
    elif f == "Moeb":
        out["kappa"] = 1
        out["eta"] = Fraction(1)
    elif f == "GP" and p == (5, 2):
        out["eta"] = Fraction(5, 3)
    elif f == "GP" and p == (8, 3):
        out["eta"] = Fraction(4, 3)
    elif f == "GP" and p == (10, 2):
        out["kappa"] = 2
        out["eta"] = Fraction(2)
    elif f == "Haar" and p == (7, 1, 3):
        out["eta"] = Fraction(7, 4)
        out["girth"] = 6
    elif f in ("X", "Y") and p[0] % 6 == 3:
        out["kappa"] = 3
        if p[0] > 3:
            out["eta"] = Fraction(3)
    elif f == "Y" and p[0] == 3:
        out["eta"] = Fraction(3, 2)
    elif f == "SDW" and p[1] == 3:
        m = p[0]
        if m == 3:
            out["kappa"], out["eta"] = 3, Fraction(3, 2)
        elif m % 3:
            out["kappa"], out["eta"] = 2, Fraction(2)
        elif m % 6 == 0:
            out["kappa"], out["eta"] = 6, Fraction(6)
        else:
            out["kappa"], out["eta"] = 6, Fraction(3)
        if m > 3:
            out["girth"] = 6
            out["aut_order"] = 12 * m
    elif f == "Tutte8Cage":
        out["kappa"] = 3
        out["eta"] = Fraction(3)
        out["girth"] = 8
    elif f == "TruncatedTetrahedron":
        out["kappa"] = 3
        out["eta"] = Fraction(3)
    elif f == "Delta12Cover" and p[1:] == (1, 2) and p[0] % 2:
        out["rho_order"] = 2 * p[0]
    if len(out) == 1:
        raise ValueError(f"no stated properties for {spec}")
    return out
