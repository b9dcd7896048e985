"""Classifier for cubic vertex-transitive graphs with an automorphism of
order at least n/3, and the eta/kappa report built on it.

The classifier works by construction: it builds every family instance of the
classification at the input's order and compares canonical forms.  Every
"case-*" verdict carries an explicit automorphism of the input, checked edge
by edge, whose order is at least n/3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .families import FamilySpec, build, delta12, phi_permutation
from .graph import DartGraph, girth, is_connected, is_cubic, is_simple
from .symmetry import (
    DEFAULT_CAP,
    CapExceeded,
    Perm,
    PermGroup,
    adjacency_of,
    automorphism_group,
    c_signature,
    canonical_form,
    compose,
    cycle_lengths,
    find_isomorphism,
    inverse,
    is_automorphism,
    perm_order,
)
from .voltage import cover

SMALL_ORDER = 20
CASES = ("1a", "1b", "2a", "2b", "2c", "3a", "3b", "3c", "3d", "4")
CASE_FAMILY = {
    "1a": "Prism", "1b": "Moeb", "2a": "Prism", "2b": "GP", "2c": "Haar",
    "3a": "X", "3b": "Y", "3c": "Tutte8Cage", "3d": "TruncatedTetrahedron", "4": "SDW",
}
NOT_COVERED = "not-covered"
NOT_VT = "not-cubic-VT"
TOO_SMALL = "too-small"


class CompletenessError(RuntimeError):
    """A graph with eta <= 3 and more than 20 vertices matched no family."""


# ---------------------------------------------------------------- theorem instances


def haar_normal_form(m: int, r: int, s: int) -> tuple[int, int, int]:
    """Least (m, r', s') with {0, r', s'} an affine image a*{0, r, s} + b,
    a a unit mod m.  Affinely equivalent connection sets give isomorphic
    Haar graphs: (x, 0) -> (a x, 0), (y, 1) -> (a y + b, 1)."""
    best: tuple[int, int] | None = None
    conn = (0, r % m, s % m)
    for a in range(1, m):
        if gcd(a, m) != 1:
            continue
        image = [a * t % m for t in conn]
        for b in image:
            shifted = sorted((t - b) % m for t in image)
            key = (shifted[1], shifted[2])
            if best is None or key < best:
                best = key
    assert best is not None
    return (m, best[0], best[1])


def haar_affine_map(m: int, a: int, b: int) -> Perm:
    """The vertex map H(m; S) -> H(m; aS + b) described in
    :func:`haar_normal_form`."""
    return tuple([a * x % m for x in range(m)] + [m + (a * y + b) % m for y in range(m)])


def haar_theorem_params(m: int) -> list[tuple[int, int]]:
    """All (r, s) allowed by the Haar item of the classification for this m."""
    out = []
    if m < 3:
        return out
    for r in range(1, m):
        if m % r:
            continue
        for s in range(1, m):
            if s == r or gcd(r, s) != 1:
                continue
            if m % 2 and {r, s} in ({1, m - 1}, {1, 2}):
                continue
            out.append((r, s))
    return out


def _gp_allowed(m: int, r: int) -> bool:
    return (m, r) == (10, 2) or (r * r) % m in (1, m - 1)


def theorem_instances(n: int, dedupe_haar: bool = True) -> list[tuple[str, FamilySpec]]:
    """Every (case, family instance) of the classification of order n.

    With ``dedupe_haar`` the Haar instances are reduced to one per affine
    class, keeping the lexicographically first allowed (r, s).
    """
    out: list[tuple[str, FamilySpec]] = []
    if n % 2:
        return out
    m = n // 2
    if m >= 3 and m % 2:
        out.append(("1a", FamilySpec("Prism", (m,))))
    if n >= 4:
        out.append(("1b", FamilySpec("Moeb", (n,))))
    if m >= 4 and m % 2 == 0:
        out.append(("2a", FamilySpec("Prism", (m,))))
    if m >= 5:
        for r in range(2, (m + 1) // 2):
            if 2 * r < m and _gp_allowed(m, r):
                out.append(("2b", FamilySpec("GP", (m, r))))
    seen: set[tuple[int, int, int]] = set()
    for r, s in haar_theorem_params(m):
        key = haar_normal_form(m, r, s)
        if dedupe_haar and key in seen:
            continue
        seen.add(key)
        out.append(("2c", FamilySpec("Haar", (m, r, s))))
    if n % 6 == 0:
        k = n // 6
        if k % 6 == 3:
            out.append(("3a", FamilySpec("X", (k,))))
            out.append(("3b", FamilySpec("Y", (k,))))
    if n == 30:
        out.append(("3c", FamilySpec("Tutte8Cage")))
    if n == 12:
        out.append(("3d", FamilySpec("TruncatedTetrahedron")))
    if n % 6 == 0:
        k = n // 6
        if k % 6 == 3 and k >= 9:
            out.append(("4", FamilySpec("SDW", (k, 3))))
    return out


def theorem_specs(max_order: int, min_order: int = SMALL_ORDER + 1, dedupe_haar: bool = True) -> list[tuple[str, FamilySpec]]:
    out = []
    for n in range(min_order, max_order + 1):
        out += theorem_instances(n, dedupe_haar)
    return out


@lru_cache(maxsize=None)
def _instance_forms(n: int) -> tuple[tuple[str, FamilySpec, bytes], ...]:
    return tuple((case, spec, canonical_form(build(spec))) for case, spec in theorem_instances(n))


# ---------------------------------------------------------------- witnesses


def _rotation(blocks: int, size: int) -> Perm:
    return tuple(b * size + (i + 1) % size for b in range(blocks) for i in range(size))


def family_witness(spec: FamilySpec) -> Perm:
    """An explicit automorphism of build(spec) of large order.

    Rotations for the cyclic families, the canonical covering transformation
    of the Delta12 cover transported along phi for SDW(m, 3) with m odd, and
    a maximum-order element of the (small) group for the two sporadic graphs.
    """
    f, p = spec.family, spec.params
    if f == "Prism" and p[0] % 2:
        m = p[0]
        return tuple([m + (i + 1) % m for i in range(m)] + [(i + 1) % m for i in range(m)])
    if f in ("Prism", "GP"):
        return _rotation(2, p[0])
    if f == "Moeb":
        return _rotation(1, p[0])
    if f == "Haar":
        return _rotation(2, p[0])
    if f in ("X", "Y"):
        return _rotation(3, 2 * p[0])
    if f == "SDW" and p[1] == 3 and p[0] % 2 and p[0] > 3:
        m = p[0]
        phi = phi_permutation(m)
        rho = cover(delta12(m, 1, 2)).rho_v
        back = inverse(phi)
        return tuple(back[rho[phi[v]]] for v in range(6 * m))
    if f == "SDW":
        m, t = p
        return tuple(((x + 1) % m * t + i) * 2 + j for x in range(m) for i in range(t) for j in range(2))
    group = automorphism_group(build(spec))
    return max(group.elements(), key=perm_order)


def transport(witness: Perm, iso: Perm) -> Perm:
    """iso o witness o iso^-1, for iso mapping the witness's graph onto another."""
    return compose(iso, compose(witness, inverse(iso)))


def is_certified_circulant(g: DartGraph) -> bool:
    """Whether the connected cubic graph g is a circulant.

    Connected cubic circulants are Cay(Z_n, {a, -a, n/2}); scaling by a unit
    shows these are Moeb(n) when gcd(a, n) = 1 and Prism(n/2) with n/2 odd
    otherwise, so a canonical-form comparison with those two decides it.
    """
    n = g.n_vertices
    if n % 2 or n < 4:
        return False
    form = canonical_form(g)
    if form == canonical_form(build(FamilySpec("Moeb", (n,)))):
        return True
    m = n // 2
    return m >= 3 and m % 2 == 1 and form == canonical_form(build(FamilySpec("Prism", (m,))))


# ---------------------------------------------------------------- symmetry parameters


@dataclass(frozen=True)
class Symmetry:
    """eta and kappa, exact or bracketed.

    ``eta`` is exact when not None; otherwise only ``eta_upper`` and
    ``eta_above_one`` are certified.  ``kappa`` likewise lies in
    [kappa_lower, kappa_upper] and is exact when those agree.
    """

    order: int
    group_order: int
    eta: Fraction | None
    eta_upper: Fraction
    eta_above_one: bool
    kappa_lower: int
    kappa_upper: int
    witness: Perm

    @property
    def exact(self) -> bool:
        return self.eta is not None and self.kappa is not None

    @property
    def kappa(self) -> int | None:
        return self.kappa_lower if self.kappa_lower == self.kappa_upper else None

    @property
    def witness_order(self) -> int:
        return perm_order(self.witness)


def exact_symmetry(n: int, group: PermGroup) -> Symmetry:
    """Single pass over the enumerated group: a maximum-order element and
    the longest semiregular cycle length."""
    best, best_order, semi = None, 0, 0
    for p in group.elements():
        lengths = cycle_lengths(p)
        o = perm_order(p)
        if o > best_order:
            best, best_order = p, o
        if len(set(lengths)) == 1 and lengths[0] > 1:
            semi = max(semi, lengths[0])
    assert best is not None
    kap = n // semi if semi else n
    eta = Fraction(n, best_order)
    return Symmetry(n, group.order, eta, eta, eta > 1, kap, kap, best)


def bounded_symmetry(g: DartGraph, group: PermGroup, witnesses: Iterable[Perm]) -> Symmetry:
    """Certified brackets from explicit automorphisms, for groups too large
    to enumerate."""
    adj = adjacency_of(g)
    n = g.n_vertices
    best: Perm | None = None
    semi = 0
    for w in list(witnesses) + list(group.generators):
        if not is_automorphism(adj, w):
            raise ValueError("witness is not an automorphism")
        if best is None or perm_order(w) > perm_order(best):
            best = w
        lengths = set(cycle_lengths(w))
        if len(lengths) == 1 and min(lengths) > 1:
            semi = max(semi, min(lengths))
    if best is None:
        raise CapExceeded("no witness for a group beyond the enumeration cap")
    circ = is_certified_circulant(g)
    k_hi = n // semi if semi else n
    if circ:
        return Symmetry(n, group.order, Fraction(1), Fraction(1), False, 1, 1, best)
    eta_hi = Fraction(n, perm_order(best))
    return Symmetry(n, group.order, None, eta_hi, True, min(2, k_hi), k_hi, best)


def symmetry_of(g: DartGraph, cap: int = DEFAULT_CAP, witnesses: Sequence[Perm] = (), group: PermGroup | None = None) -> Symmetry:
    grp = group or automorphism_group(g, cap)
    if grp.enumerable:
        return exact_symmetry(g.n_vertices, grp)
    return bounded_symmetry(g, grp, witnesses)


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class ClassificationResult:
    graph_id: str
    verdict: str
    order: int
    eta: Fraction | None
    eta_upper: Fraction | None
    family: FamilySpec | None = None
    witness: Perm | None = None
    matches: tuple[tuple[str, FamilySpec], ...] = ()

    @property
    def witness_order(self) -> int:
        return perm_order(self.witness) if self.witness else 0

    @property
    def case(self) -> str | None:
        return self.verdict[5:] if self.verdict.startswith("case-") else None

    def summary(self) -> str:
        eta = "?" if self.eta is None else str(self.eta)
        parts = [self.graph_id or "-", self.verdict, f"n={self.order}", f"eta={eta}"]
        if self.eta is None and self.eta_upper is not None:
            parts.append(f"eta<={self.eta_upper}")
        if self.family is not None:
            parts.append(f"family={self.family}")
        if self.witness is not None:
            parts.append(f"witness_order={self.witness_order}")
        if len(self.matches) > 1:
            parts.append("also=" + ",".join(f"{c}:{s}" for c, s in self.matches[1:]))
        return " ".join(parts)


def _matches(g: DartGraph, n: int) -> list[tuple[str, FamilySpec]]:
    form = canonical_form(g)
    return [(case, spec) for case, spec, f in _instance_forms(n) if f == form]


def classify(g: DartGraph, graph_id: str = "", cap: int = DEFAULT_CAP) -> ClassificationResult:
    """Verdict for a simple connected cubic graph.

    Raises ValueError on other inputs, CapExceeded when the group is too
    large to enumerate and the graph matches no family (eta cannot then be
    bounded), and CompletenessError when eta <= 3, n > 20 and no family
    matches.
    """
    if not is_simple(g) or not is_connected(g):
        raise ValueError("classify needs a simple connected graph")
    if not is_cubic(g):
        raise ValueError("classify needs a cubic graph")
    n = g.n_vertices
    group = automorphism_group(g, cap)
    if len(group.vertex_orbits()) != 1:
        return ClassificationResult(graph_id, NOT_VT, n, None, None)
    if n <= SMALL_ORDER:
        sym = exact_symmetry(n, group)
        return ClassificationResult(graph_id, TOO_SMALL, n, sym.eta, sym.eta, witness=sym.witness)
    exact = exact_symmetry(n, group) if group.enumerable else None
    if exact is not None and exact.eta is not None and exact.eta > 3:
        return ClassificationResult(graph_id, NOT_COVERED, n, exact.eta, exact.eta, witness=exact.witness)
    matches = _matches(g, n)
    if not matches:
        if exact is None:
            raise CapExceeded(f"group of order {group.order} exceeds cap {cap} and no family matches")
        raise CompletenessError(f"{graph_id or 'graph'}: eta <= 3 with n = {n} but no family instance matches")
    case, spec = matches[0]
    iso = find_isomorphism(build(spec), g)
    if iso is None:
        raise AssertionError("canonical forms agree but no isomorphism was found")
    witness = transport(family_witness(spec), iso)
    sym = exact or bounded_symmetry(g, group, [witness])
    if perm_order(sym.witness) > perm_order(witness):
        witness = sym.witness
    if not is_automorphism(adjacency_of(g), witness) or 3 * perm_order(witness) < n:
        raise AssertionError(f"witness for {spec} fails verification")
    return ClassificationResult(
        graph_id, f"case-{case}", n, sym.eta, sym.eta_upper, spec, witness, tuple(matches)
    )


# ---------------------------------------------------------------- eta / kappa report


@dataclass(frozen=True)
class ReportRow:
    label: str
    order: int
    eta: Fraction | None
    eta_upper: Fraction
    eta_above_one: bool
    kappa: int | None
    kappa_range: tuple[int, int]
    girth: int
    signature: tuple[int, int, int]

    def line(self) -> str:
        eta = str(self.eta) if self.eta is not None else f"(1,{self.eta_upper}]"
        kap = str(self.kappa) if self.kappa is not None else f"[{self.kappa_range[0]},{self.kappa_range[1]}]"
        sig = ",".join(map(str, self.signature))
        return f"{self.label}\t{self.order}\t{eta}\t{kap}\t{self.girth}\t({sig})"


@dataclass
class EtaKappaReport:
    rows: list[ReportRow] = field(default_factory=list)
    aggregate: dict[int, int] = field(default_factory=dict)

    def text(self) -> str:
        out = ["graph\torder\teta\tkappa\tgirth\tsignature"]
        out += [r.line() for r in self.rows]
        for r, k in sorted(self.aggregate.items()):
            out.append(f"# max kappa with eta <= {r}: {k}")
        return "\n".join(out) + "\n"


def report_row(spec: FamilySpec, cap: int = DEFAULT_CAP) -> ReportRow:
    g = build(spec)
    sym = symmetry_of(g, cap, witnesses=[family_witness(spec)])
    gi = int(girth(g))
    return ReportRow(
        str(spec), g.n_vertices, sym.eta, sym.eta_upper, sym.eta_above_one, sym.kappa,
        (sym.kappa_lower, sym.kappa_upper), gi, c_signature(g, 0, gi),
    )


def aggregate(rows: Sequence[ReportRow], radii: Sequence[int] = (1, 2, 3)) -> dict[int, int]:
    """max kappa over rows with eta <= r, for each r.

    Raises ValueError if a bracketed row leaves the answer undetermined.
    """
    out: dict[int, int] = {}
    if not rows:
        return out
    for r in radii:
        lo = hi = 0
        for row in rows:
            if row.eta is not None:
                inside = row.eta <= r
            elif row.eta_upper <= r:
                inside = True
            elif r <= 1 and row.eta_above_one:
                inside = False
            else:
                raise ValueError(f"{row.label}: eta bracket undecided at r = {r}")
            if inside:
                lo = max(lo, row.kappa_range[0])
                hi = max(hi, row.kappa_range[1])
        if lo != hi:
            raise ValueError(f"kappa brackets leave the maximum at r = {r} undecided")
        out[r] = lo
    return out


def report_eta_kappa(specs: Iterable[FamilySpec], cap: int = DEFAULT_CAP) -> EtaKappaReport:
    rows = [report_row(s, cap) for s in specs]
    return EtaKappaReport(rows, aggregate(rows))


def theorem_sweep(max_order: int = 120) -> list[FamilySpec]:
    """Family instances of the classification with 20 < n <= max_order."""
    return [spec for _, spec in theorem_specs(max_order)]
