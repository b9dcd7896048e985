"""The verify-all harness: seeded property sweeps and known-answer checks,
collected into a plain-text ledger of ``PASS|FAIL <check-id> <details>``
lines sorted by check id."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import families
from .classify import family_witness, haar_theorem_params, symmetry_of, theorem_instances
from .families import FamilySpec, known_properties
from .graph import cycles_up_to, girth, is_connected, is_cubic, is_simple
from .labelled import LabelledGraph
from .quotients import (
    _voltage_ranges,
    _zeta_vector,
    enumerate_Q0,
    filter_artefacts,
    filter_diagram,
    named_quotients,
    probe_candidate,
    probe_index_base,
    quotient_name,
    select_Q,
)
from .symmetry import adjacency_of, canonical_form, is_automorphism, perm_order
from .voltage import (
    CcvGraph,
    ccv_failure,
    ccv_tree,
    cover,
    cover_adjacency_oracle,
    cover_edge_set,
    endset,
    is_lambda_reduced,
    lift_end_indices,
    lifts,
    make_ccv,
)

QSTAR_EXPECTED = 20
Q_EXPECTED = 9
FORWARD_MIN_ORDER = 21
EXCEPTIONAL = tuple(f"D{i}" for i in range(1, 13))
MULTICIRCULANT = ("K1", "K2-triple", "K2-double", "K2-loops", "K3-path", "K3-double-loop", "K3-triangle", "K3-double-triangle")


@dataclass(frozen=True)
class Check:
    check_id: str
    ok: bool
    details: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.check_id} {self.details}".rstrip()


# ---------------------------------------------------------------- random data


def random_ccv(lg: LabelledGraph, m: int, rng: random.Random) -> CcvGraph | None:
    """A random simplified ccv-extension with iota = m * base, or None when
    the drawn voltages violate the ccv conditions."""
    base = probe_index_base(lg)
    tree = ccv_tree(lg)
    iota = [m * b for b in base]
    free, ranges = _voltage_ranges(lg, tree, iota)
    values = [rng.choice(r) if len(r) else 0 for r in ranges]
    try:
        c = make_ccv(lg, iota, _zeta_vector(lg, iota, free, values))
    except ValueError:
        return None
    return c if ccv_failure(c, tree) is None else None


def random_walk(lg: LabelledGraph, length: int, rng: random.Random) -> list[int]:
    g = lg.graph
    v = rng.randrange(g.n_vertices)
    walk = []
    for _ in range(length):
        x = rng.choice(g.out_darts[v])
        walk.append(x)
        v = g.end(x)
    return walk


def sample_covers(rng: random.Random, count: int, max_m: int = 4) -> list[tuple[str, CcvGraph]]:
    """``count`` random ccv data over the named quotients."""
    named = sorted(named_quotients().items())
    out: list[tuple[str, CcvGraph]] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count:
            raise RuntimeError("could not sample enough ccv data")
        name, lg = rng.choice(named)
        c = random_ccv(lg, rng.randint(1, max_m), rng)
        if c is not None:
            out.append((name, c))
    return out


def walk_lift_failure(c: CcvGraph, walk: Sequence[int]) -> str | None:
    """Lifts of ``walk`` from index 0 must end exactly at the endset."""
    cg = cover(c)
    ends = lift_end_indices(cg, lifts(c, walk, 0))
    expected = set(endset(c, walk).elements())
    if ends != expected:
        return f"walk {list(walk)}: lift ends {sorted(ends)} != endset {sorted(expected)}"
    return None


def cycle_projection_failure(c: CcvGraph, max_len: int = 8) -> str | None:
    """Every cover cycle of length <= max_len projects to a lambda-reduced
    closed walk whose endset contains 0."""
    cg = cover(c)
    if not is_simple(cg.graph):
        return None
    for cyc in cycles_up_to(cg.graph, max_len):
        walk = [cg.proj_d[x] for x in cyc]
        if not is_lambda_reduced(c.base, walk):
            return f"cycle {cyc} projects to a non-reduced walk"
        if 0 not in endset(c, walk):
            return f"cycle {cyc} projects to a walk with 0 outside its endset"
    return None


# ---------------------------------------------------------------- stages


def cover_checks(seed: int, n_data: int = 40, n_walks: int = 1000) -> list[Check]:
    rng = random.Random(seed)
    data = sample_covers(rng, n_data)
    out = []
    bad_oracle, bad_rho, bad_cubic = [], [], []
    for name, c in data:
        cg = cover(c)
        if not is_cubic(cg.graph) or cg.graph.n_vertices != c.order:
            bad_cubic.append(name)
        if cover_edge_set(cg) != cover_adjacency_oracle(c):
            bad_oracle.append(name)
        if is_simple(cg.graph):
            rho = cg.rho_v
            if not is_automorphism(adjacency_of(cg.graph), rho) or perm_order(rho) != c.rho_order:
                bad_rho.append(name)
    out.append(Check("1-cover/cubic", not bad_cubic, f"{len(data)} data; bad {bad_cubic[:3]}"))
    out.append(Check("1-cover/oracle", not bad_oracle, f"{len(data)} data; bad {bad_oracle[:3]}"))
    out.append(Check("1-cover/rho", not bad_rho, f"{len(data)} data; bad {bad_rho[:3]}"))
    failures = []
    for _ in range(n_walks):
        name, c = rng.choice(data)
        f = walk_lift_failure(c, random_walk(c.base, rng.randint(1, 8), rng))
        if f:
            failures.append(f"{name}: {f}")
    out.append(Check("1-cover/walk-lifts", not failures, f"{n_walks} walks; {len(failures)} failures {failures[:1]}"))
    failures = []
    for name, c in data:
        f = cycle_projection_failure(c)
        if f:
            failures.append(f"{name}: {f}")
    out.append(Check("1-cover/cycle-projection", not failures, f"{len(data)} covers; {failures[:1]}"))
    return out


def known_property_specs() -> list[FamilySpec]:
    specs = [FamilySpec("Prism", (m,)) for m in range(3, 9)]
    specs += [FamilySpec("Moeb", (n,)) for n in range(4, 14, 2)]
    specs += [FamilySpec("GP", p) for p in ((5, 2), (8, 3), (10, 2))]
    specs += [FamilySpec("Haar", (7, 1, 3)), FamilySpec("Y", (3,))]
    specs += [FamilySpec(f, (k,)) for f in ("X", "Y") for k in (9, 15)]
    specs += [FamilySpec("SDW", (m, 3)) for m in (3, 4, 5, 6, 7, 9, 12, 15)]
    specs += [FamilySpec("Tutte8Cage"), FamilySpec("TruncatedTetrahedron")]
    return specs


def family_check(spec: FamilySpec) -> Check:
    cid = f"2-family/{spec}"
    try:
        g = families.build(spec)
    except Exception as exc:  # a broken constructor is a ledger failure
        return Check(cid, False, f"constructor raised {exc!r}")
    stated = known_properties(spec)
    if not (is_simple(g) and is_connected(g) and is_cubic(g)):
        return Check(cid, False, "not simple connected cubic")
    got: dict[str, object] = {"order": g.n_vertices}
    if {"eta", "kappa", "aut_order"} & set(stated):
        sym = symmetry_of(g, witnesses=[family_witness(spec)])
        got["eta"], got["kappa"], got["aut_order"] = sym.eta, sym.kappa, sym.group_order
    if "girth" in stated:
        got["girth"] = int(girth(g))
    bad = {k: (stated[k], got.get(k)) for k in stated if got.get(k) != stated[k]}
    shown = " ".join(f"{k}={got[k]}" for k in sorted(stated))
    return Check(cid, not bad, shown if not bad else f"stated vs computed {bad}")


def gamma12_check(m: int) -> Check:
    sdw = families.build(FamilySpec("SDW", (m, 3)))
    gam = families.gamma12(m, 1, 2)
    phi = families.phi_permutation(m)
    adj = adjacency_of(gam)
    nbr = [set(a) for a in adj]
    by_phi = sorted(phi) == list(range(6 * m)) and all(
        phi[w] in nbr[phi[v]] for v in range(6 * m) for w in sdw.neighbours[v]
    )
    by_form = canonical_form(sdw) == canonical_form(gam)
    return Check(f"2-family/Gamma12({m},1,2)~SDW({m},3)", by_phi and by_form, f"phi={by_phi} canonical={by_form}")


def family_checks() -> list[Check]:
    out = [family_check(s) for s in known_property_specs()]
    out += [gamma12_check(m) for m in (5, 7, 9, 11)]
    return out


def enumeration_checks(max_m: int = 12, workers: int = 1) -> list[Check]:
    q0 = enumerate_Q0()
    diagram = filter_diagram(q0)
    qstar = filter_artefacts(diagram)
    out = [Check("3-enum/Q0", True, f"{len(q0)} labelled graphs")]
    out.append(Check("3-enum/diagram", True, f"{len(diagram)} pass the diagram conditions"))
    out.append(Check("3-enum/Qstar", len(qstar) == QSTAR_EXPECTED, f"|Q*| = {len(qstar)}, expected {QSTAR_EXPECTED}"))
    want = sorted(MULTICIRCULANT + ("D12",))
    for label, cs in (("Q", qstar), ("Q-from-diagram", diagram)):
        q, _ = select_Q(cs, max_m, workers=workers)
        names = sorted(str(quotient_name(c.lg)) for c in q)
        ok = len(q) == Q_EXPECTED and names == want
        out.append(Check(f"3-enum/{label}", ok, f"|Q| = {len(q)} {','.join(names)}"))
    return out


def probe_checks(max_m: int = 12) -> list[Check]:
    """D1-D11 admit no vertex-transitive cover of order > 20; D12 and the
    eight multicirculant quotients do."""
    named = named_quotients()
    out = []
    for name in EXCEPTIONAL + MULTICIRCULANT:
        rep = probe_candidate(named[name], max_m, 20, stop_at_first=True, name=name)
        want = name == "D12" or name in MULTICIRCULANT
        out.append(Check(f"4-probe/{name}", rep.has_vt_cover == want, rep.summary()))
    return out


def forward_checks(max_order: int = 120) -> list[Check]:
    """Every family instance of the classification with 20 < n <= max_order
    has a verified automorphism of order >= n/3.  Haar parameters are swept
    without affine deduplication."""
    out = []
    for n in range(FORWARD_MIN_ORDER, max_order + 1):
        specs = [s for case, s in theorem_instances(n) if case != "2c"]
        if n % 2 == 0:
            specs += [FamilySpec("Haar", (n // 2, r, s)) for r, s in haar_theorem_params(n // 2)]
        worst: tuple[int, str] | None = None
        bad = []
        for spec in specs:
            g = families.build(spec)
            w = family_witness(spec)
            o = perm_order(w)
            if not is_automorphism(adjacency_of(g), w) or 3 * o < n:
                bad.append(str(spec))
            elif worst is None or o < worst[0]:
                worst = (o, str(spec))
        if specs:
            detail = f"{len(specs)} instances; least witness order {worst[0]} ({worst[1]})" if worst else ""
            out.append(Check(f"5-forward/n={n:03d}", not bad, detail if not bad else f"bad {bad[:3]}"))
    return out


STAGES: dict[str, Callable[..., list[Check]]] = {
    "cover": cover_checks,
    "family": family_checks,
    "enumeration": enumeration_checks,
    "probe": probe_checks,
    "forward": forward_checks,
}


def _run_stage(args: tuple[str, dict]) -> list[Check]:
    name, kwargs = args
    return STAGES[name](**kwargs)


def verify_all(max_order: int = 120, max_m: int = 12, seed: int = 0, workers: int = 1) -> list[Check]:
    jobs = [
        ("cover", {"seed": seed}),
        ("family", {}),
        ("enumeration", {"max_m": max_m}),
        ("probe", {"max_m": max_m}),
        ("forward", {"max_order": max_order}),
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_stage, jobs))
    else:
        results = [_run_stage(j) for j in jobs]
    checks = [c for r in results for c in r]
    return sorted(checks, key=lambda c: c.check_id)


def ledger(checks: Iterable[Check], seed: int, max_order: int, max_m: int) -> str:
    checks = list(checks)
    failed = sum(not c.ok for c in checks)
    head = [
        f"# verify-all seed={seed} max_order={max_order} max_m={max_m}",
        f"# {len(checks)} checks, {failed} failed",
    ]
    return "\n".join(head + [c.line() for c in checks]) + "\n"
