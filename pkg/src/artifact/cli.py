"""Command-line interface: ``artifact <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import graph as graph_mod
from . import labelled as labelled_mod
from . import voltage as voltage_mod
from .classify import classify, report_eta_kappa, symmetry_of, theorem_sweep
from .families import DOMAINS, FAMILIES, FamilySpec, build
from .graph import DartGraph, girth, is_connected, is_cubic, is_simple
from .quotients import (
    DEFAULT_MAX_M,
    ORDER_FLOOR,
    CandidateSet,
    enumerate_Q0,
    filter_artefacts,
    filter_diagram,
    named_quotients,
    probe_candidate,
    quotient_name,
    select_Q,
)
from .symmetry import DEFAULT_CAP, CapExceeded, automorphism_group, c_signature, is_arc_transitive
from .verify import ledger, verify_all


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_params(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(int(t) for t in text.replace(",", " ").split())


def _graph_from_args(args: argparse.Namespace) -> tuple[str, DartGraph]:
    if getattr(args, "name", None):
        spec = FamilySpec(args.name, _parse_params(args.params))
        return str(spec), build(spec)
    if not args.input:
        raise SystemExit("give --in FILE or --name FAMILY")
    return args.input, graph_mod.loads(_read(args.input))


# ---------------------------------------------------------------- subcommands


def cmd_family(args: argparse.Namespace) -> int:
    if args.list or not args.name:
        for f in FAMILIES:
            print(f"{f}: {DOMAINS[f]}")
        return 0
    g = build(FamilySpec(args.name, _parse_params(args.params)))
    _write(args.out, graph_mod.dumps(g))
    return 0


def cmd_cover(args: argparse.Namespace) -> int:
    c = voltage_mod.loads(_read(args.input))
    cg = voltage_mod.cover(c)
    _write(args.out, graph_mod.dumps(cg.graph))
    if args.fibres:
        Path(args.fibres).write_text(voltage_mod.dumps_fibres(cg))
    return 0


def cmd_check_ccv(args: argparse.Namespace) -> int:
    c = voltage_mod.loads(_read(args.input))
    problem = voltage_mod.validate_ccv(c)
    if problem:
        print(f"invalid: {problem}")
        return 1
    failed = voltage_mod.ccv_failure(*voltage_mod.tree_normalise(c))
    if failed is None:
        print("ccv: ok")
        return 0
    print(f"ccv: condition {failed} fails")
    return 1


def cmd_simplify(args: argparse.Namespace) -> int:
    c = voltage_mod.loads(_read(args.input))
    _write(args.out, voltage_mod.dumps(voltage_mod.simplify_voltage(c)))
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    label, g = _graph_from_args(args)
    print(f"graph: {label}")
    print(f"vertices: {g.n_vertices}  darts: {g.n_darts}")
    print(f"simple: {is_simple(g)}  connected: {is_connected(g)}  cubic: {is_cubic(g)}")
    gi = girth(g)
    print(f"girth: {gi}")
    if not is_simple(g):
        return 0
    group = automorphism_group(g, args.cap)
    vt = len(group.vertex_orbits()) == 1
    print(f"|Aut|: {group.order}  vertex-transitive: {vt}  arc-transitive: {is_arc_transitive(g, group)}")
    if is_cubic(g) and gi != float("inf"):
        print(f"signature: {c_signature(g, 0, int(gi))}")
    try:
        sym = symmetry_of(g, args.cap, group=group)
    except CapExceeded as exc:
        print(f"eta, kappa: {exc}")
        return 0
    eta = sym.eta if sym.eta is not None else f"in (1, {sym.eta_upper}]"
    kap = sym.kappa if sym.kappa is not None else f"in [{sym.kappa_lower}, {sym.kappa_upper}]"
    print(f"meo witness order: {sym.witness_order}  eta: {eta}  kappa: {kap}")
    return 0


def _stage_set(stage: str) -> CandidateSet:
    cs = enumerate_Q0()
    if stage in ("diagram", "artefacts", "probe"):
        cs = filter_diagram(cs)
    if stage in ("artefacts", "probe"):
        cs = filter_artefacts(cs)
    return cs


def cmd_enumerate(args: argparse.Namespace) -> int:
    cs = _stage_set(args.stage)
    reports = {}
    if args.stage == "probe":
        cs, reports = select_Q(cs, args.max_m, args.floor, args.workers)
    print(f"stage {args.stage}: {len(cs)} labelled graphs ({len(cs.rejected)} rejected)")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        lines = [f"# stage={args.stage} max_m={args.max_m} floor={args.floor}"]
        for c in cs:
            (out / f"{c.id}.lg").write_text(labelled_mod.dumps(c.lg))
            probe = f" {reports[c.id].summary()}" if c.id in reports else ""
            lines.append(f"keep {c.id} {','.join(c.passed)} {quotient_name(c.lg) or '-'}{probe}")
        for cid, why in sorted(cs.rejected.items()):
            probe = f" [{reports[cid].summary()}]" if cid in reports else ""
            lines.append(f"reject {cid} {why}{probe}")
        (out / "provenance.txt").write_text("\n".join(lines) + "\n")
    return 0


def cmd_probe(args: argparse.Namespace) -> int:
    if args.quotient:
        named = named_quotients()
        if args.quotient not in named:
            raise SystemExit(f"unknown quotient {args.quotient!r}; known: {', '.join(sorted(named))}")
        lg, label = named[args.quotient], args.quotient
    elif args.input:
        lg, label = labelled_mod.loads(_read(args.input)), args.input
    else:
        raise SystemExit("give --in FILE or --quotient NAME")
    rep = probe_candidate(lg, args.max_m, args.floor, name=label)
    print(f"{label}: {rep.summary()}")
    for r in rep.found:
        print(f"  m={r.m} order={r.order} zeta={' '.join(map(str, r.zeta))}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    label, g = _graph_from_args(args)
    res = classify(g, label, args.cap)
    print(res.summary())
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    rep = report_eta_kappa(theorem_sweep(args.max_order), args.cap)
    _write(args.out, rep.text())
    return 0


def cmd_verify_all(args: argparse.Namespace) -> int:
    checks = verify_all(args.max_order, args.max_m, args.seed, args.workers)
    _write(args.out, ledger(checks, args.seed, args.max_order, args.max_m))
    return 0 if all(c.ok for c in checks) else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--in", dest="input", help="input file ('-' for stdin)")
        sp.add_argument("--out", help="output file or directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-m", type=int, default=DEFAULT_MAX_M)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="group enumeration cap")
        return sp

    add("cover", cmd_cover, "build the cover of a voltage datum").add_argument("--fibres", help="write the fibre sidecar here")
    add("check-ccv", cmd_check_ccv, "check the cubic-cover conditions")
    add("simplify", cmd_simplify, "simplify a voltage assignment")
    for name, fn, help_ in (
        ("analyze", cmd_analyze, "structural and symmetry summary of a graph"),
        ("classify", cmd_classify, "classify a cubic vertex-transitive graph"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--name", help="family name instead of --in")
        sp.add_argument("--params", help="family parameters, comma separated")
    sp = add("family", cmd_family, "build a family member")
    sp.add_argument("--name")
    sp.add_argument("--params")
    sp.add_argument("--list", action="store_true")
    sp = add("enumerate-quotients", cmd_enumerate, "enumerate candidate quotients")
    sp.add_argument("--stage", choices=("q0", "diagram", "artefacts", "probe"), default="artefacts")
    sp.add_argument("--floor", type=int, default=ORDER_FLOOR)
    sp.add_argument("--workers", type=int, default=1)
    sp = add("probe-quotient", cmd_probe, "search a quotient for vertex-transitive covers")
    sp.add_argument("--quotient", help="named quotient, e.g. D12")
    sp.add_argument("--floor", type=int, default=ORDER_FLOOR)
    sp = add("report", cmd_report, "eta/kappa table over the classification families")
    sp.add_argument("--max-order", type=int, default=120)
    sp = add("verify-all", cmd_verify_all, "run every check and print the ledger")
    sp.add_argument("--max-order", type=int, default=120)
    sp.add_argument("--workers", type=int, default=1)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
