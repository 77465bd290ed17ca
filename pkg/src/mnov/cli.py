"""Command-line front end.

One binary with four command families:

  mnov milnor {radii,crit,trace,report}   numerical Milnor-map analysis
  mnov braid                              braid-diagram invariants
  mnov calc                               symbolic Morse-map constructions
  mnov bounds                             Morse-Novikov upper bounds

Every command prints either human-readable text or, with --json, a single
deterministic JSON object {command, config, result, assumptions, warnings}.
Exit codes: 0 success, 2 input syntax or disconnected-surface errors, 3
invalid sphere radius, 4 incomplete results under --strict, 5 knot-only
estimate on a multi-component closure.
"""

from __future__ import annotations

import argparse
import sys

from .bounds import KnotInput, best_double_bound, free_rank_bound
from .braid import bennequin_invariants, greedy_destabilize, parse_braid
from .bounds import FREE_SURFACE_ASSUMPTION
from .calculus import page_chis, parse_construction
from .errors import (
    DisconnectedSurfaceError,
    InputSyntaxError,
    InvalidRadiusError,
    MnovError,
    MultiComponentError,
)
from .milnor import SolverConfig, grid_residual_table, morse_report, trace_link
from .milnor.classify import fit_degenerate_circles
from .milnor.oracle import oracle_core
from .milnor.ops import (
    critical_radii_ex,
    divisor_min_norm_ex,
    milnor_critical_points_ex,
)
from .milnor.report import (
    WARN_CRITICAL_POINTS,
    WARN_CRITICAL_RADII,
    WARN_DIVISOR_DISTANCE,
)
from .milnor import systems
from .poly import parse_rational, squarefree_heuristic
from .render import format_complex, format_set, render_json

WARN_TRACE = "incomplete link trace: the step limit was reached before closure"
WARN_SQUAREFREE = (
    "the squarefree heuristic failed; proceeding as if the divisor"
    " polynomials were squarefree"
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mnov",
        description=(
            "Numerical Milnor-map analysis on 3-spheres and symbolic"
            " Morse-Novikov upper bounds."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    milnor = commands.add_parser(
        "milnor", help="numerical analysis of a rational Milnor map"
    )
    subcommands = milnor.add_subparsers(dest="subcommand", required=True)

    def add_solver_flags(sub, radius: bool, oracle: bool) -> None:
        sub.add_argument(
            "-f",
            "--function",
            required=True,
            metavar="EXPR",
            help="rational function of z and w, for example 'z*w/(4*z-1)'",
        )
        if radius:
            sub.add_argument(
                "-r",
                "--radius",
                required=True,
                type=float,
                help="sphere radius",
            )
        defaults = SolverConfig()
        sub.add_argument("--seeds", type=int, default=defaults.seed_count,
                         help="Newton seed count")
        sub.add_argument("--rng", type=int, default=defaults.rng_seed,
                         help="random seed")
        sub.add_argument("--threads", type=int, default=None,
                         help="worker threads (default: machine parallelism)")
        sub.add_argument("--newton-tol", type=float,
                         default=defaults.newton_tol,
                         help="Newton convergence tolerance")
        sub.add_argument("--max-iters", type=int,
                         default=defaults.max_newton_iters,
                         help="Newton iteration cap")
        sub.add_argument("--dedup", type=float, default=defaults.dedup_dist,
                         help="solution deduplication distance")
        sub.add_argument("--degeneracy-tol", type=float,
                         default=defaults.degeneracy_rel_tol,
                         help="relative eigenvalue threshold for degeneracy")
        sub.add_argument("--grid", type=int,
                         default=defaults.grid_resolution,
                         help="oracle grid resolution per angle")
        if oracle:
            sub.add_argument("--oracle", action="store_true",
                             help="run the brute-force grid oracle")
        sub.add_argument("--json", action="store_true",
                         help="machine-readable output")
        sub.add_argument("--strict", action="store_true",
                         help="exit 4 when results are incomplete")

    radii = subcommands.add_parser(
        "radii", help="divisor distance and critical radii"
    )
    add_solver_flags(radii, radius=False, oracle=False)

    crit = subcommands.add_parser(
        "crit", help="critical points on one sphere"
    )
    add_solver_flags(crit, radius=True, oracle=True)

    trace = subcommands.add_parser(
        "trace", help="trace the link cut out by the divisor"
    )
    add_solver_flags(trace, radius=True, oracle=False)

    report = subcommands.add_parser(
        "report", help="full analysis with verdict"
    )
    add_solver_flags(report, radius=True, oracle=True)
    report.add_argument(
        "--dump-grid",
        metavar="FILE",
        help="write the oracle residual grid as CSV",
    )

    braid = commands.add_parser("braid", help="braid-diagram invariants")
    braid.add_argument("-b", "--braid", required=True, metavar="WORD",
                       help="braid word, for example '2: 1 1 1'")
    braid.add_argument("--json", action="store_true",
                       help="machine-readable output")

    calc = commands.add_parser(
        "calc", help="evaluate a Morse-map construction expression"
    )
    calc.add_argument("expression", help="construction, e.g. 'msum(u,u,2)'")
    calc.add_argument("--json", action="store_true",
                      help="machine-readable output")

    bounds = commands.add_parser(
        "bounds", help="Morse-Novikov upper bounds for a braid closure"
    )
    bounds.add_argument("--braid", required=True, metavar="WORD",
                        help="braid word")
    bounds.add_argument(
        "--double",
        metavar="M:SIGN",
        help="estimate the M-twisted double with clasp SIGN, e.g. '0:+'",
    )
    bounds.add_argument("--bi", type=int, default=None,
                        help="braid index override")
    bounds.add_argument("--cr", type=int, default=None,
                        help="crossing number override")
    bounds.add_argument("--wrap", type=int, default=None,
                        help="wrapping genus override")
    bounds.add_argument("--wlap", type=int, default=None,
                        help="layered wrapping genus override")
    bounds.add_argument("--freerank", type=int, default=None,
                        help="free rank override")
    bounds.add_argument("--json", action="store_true",
                        help="machine-readable output")
    return parser


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        seed_count=args.seeds,
        rng_seed=args.rng,
        newton_tol=args.newton_tol,
        max_newton_iters=args.max_iters,
        dedup_dist=args.dedup,
        degeneracy_rel_tol=args.degeneracy_tol,
        grid_resolution=args.grid,
        threads=args.threads,
    )


def _milnor_setup(args):
    """Parse the function, run the squarefree gate, return (F, cfg, warnings)."""
    cfg = _solver_config(args)
    F = parse_rational(args.function)
    warnings = []
    if not squarefree_heuristic(F, cfg.rng_seed):
        warnings.append(WARN_SQUAREFREE)
    return F, cfg, warnings


def _config_echo(cfg: SolverConfig, oracle: bool | None = None) -> dict:
    echo = cfg.to_dict()
    if oracle is not None:
        echo["oracle"] = oracle
    return echo


def _point_lines(points) -> list:
    lines = []
    for i, p in enumerate(points, start=1):
        index = "degenerate" if p.degenerate else str(p.index)
        lines.append(
            f"[{i}] z = {format_complex(p.z)}, w = {format_complex(p.w)},"
            f" index = {index}, theta = {p.theta:.6f},"
            f" t = {p.multiplier_t:.6f}, residual = {p.residual:.3g}"
        )
    return lines


def _circle_lines(circles) -> list:
    lines = [f"degenerate circles: {len(circles)}"]
    for i, c in enumerate(circles, start=1):
        lines.append(
            f"[{i}] center z = {format_complex(c.center_z)},"
            f" w = {format_complex(c.center_w)}, radius = {c.radius:.6f},"
            f" residual = {c.residual:.3g}, points = {c.point_count}"
        )
    return lines


def cmd_milnor_radii(args):
    F, cfg, warnings = _milnor_setup(args)
    m, m_inc = divisor_min_norm_ex(F, cfg, assume_squarefree=True)
    radii, radii_inc = critical_radii_ex(F, cfg, assume_squarefree=True)
    if m_inc:
        warnings.append(WARN_DIVISOR_DISTANCE)
    if radii_inc:
        warnings.append(WARN_CRITICAL_RADII)
    result = {"m_of_F": m, "critical_radii": list(radii)}
    lines = [f"m(F) = {m:.6f}", f"X(F) = {format_set(radii)}"]
    return {
        "command": "milnor radii",
        "config": _config_echo(cfg),
        "result": result,
        "assumptions": [],
        "warnings": warnings,
    }, lines


def cmd_milnor_crit(args):
    F, cfg, warnings = _milnor_setup(args)
    points, inc = milnor_critical_points_ex(
        F, args.radius, cfg, assume_squarefree=True
    )
    if inc:
        warnings.append(WARN_CRITICAL_POINTS)
    circles = fit_degenerate_circles(points, args.radius, cfg)
    result = {
        "radius": args.radius,
        "critical_points": [p.to_dict() for p in points],
        "degenerate_circles": [c.to_dict() for c in circles],
    }
    lines = [f"critical points: {len(points)}"]
    lines += _point_lines(points)
    if circles or any(p.degenerate for p in points):
        lines += _circle_lines(circles)
    if args.oracle:
        pack = systems.build_pack(F)
        clusters = oracle_core(pack, args.radius, cfg)
        result["oracle_clusters"] = [c.to_dict() for c in clusters]
        lines.append(f"oracle clusters: {len(clusters)}")
    return {
        "command": "milnor crit",
        "config": _config_echo(cfg, oracle=args.oracle),
        "result": result,
        "assumptions": [],
        "warnings": warnings,
    }, lines


def cmd_milnor_trace(args):
    F, cfg, warnings = _milnor_setup(args)
    trace = trace_link(F, args.radius, cfg, assume_squarefree=True)
    if trace.incomplete:
        warnings.append(WARN_TRACE)
    lines = [f"components: {trace.components}"]
    for i, loop in enumerate(trace.loops, start=1):
        lines.append(f"loop {i}: {len(loop)} samples")
    return {
        "command": "milnor trace",
        "config": _config_echo(cfg),
        "result": trace.to_dict(),
        "assumptions": [],
        "warnings": warnings,
    }, lines


def cmd_milnor_report(args):
    F, cfg, warnings = _milnor_setup(args)
    rep = morse_report(
        F, args.radius, cfg, oracle=args.oracle, assume_squarefree=True
    )
    warnings.extend(rep.warnings)
    if args.dump_grid:
        table = grid_residual_table(
            F, args.radius, cfg, assume_squarefree=True
        )
        with open(args.dump_grid, "w", encoding="utf-8") as handle:
            handle.write("eta,xi1,xi2,residual\n")
            for row in table:
                handle.write(",".join(f"{v:.12g}" for v in row) + "\n")
    points = rep.critical_points
    index1 = sum(1 for p in points if p.index == 1)
    index2 = sum(1 for p in points if p.index == 2)
    degenerate = sum(1 for p in points if p.degenerate)
    lines = [
        f"verdict: {rep.verdict}",
        f"m(F) = {rep.m_of_F:.6f}",
        f"X(F) = {format_set(rep.critical_radii)}",
        f"critical points: {len(points)} (index 1: {index1},"
        f" index 2: {index2}, degenerate: {degenerate})",
    ]
    lines += _point_lines(points)
    lines += _circle_lines(rep.degenerate_loci)
    if rep.oracle_checked:
        lines.append(f"oracle clusters: {len(rep.oracle_clusters)}")
    lines.append(f"balance: {'ok' if rep.balance_ok else 'violated'}")
    return {
        "command": "milnor report",
        "config": _config_echo(cfg, oracle=args.oracle),
        "result": rep.to_dict(),
        "assumptions": [],
        "warnings": warnings,
    }, lines


def cmd_braid(args):
    word = parse_braid(args.braid)
    reduced = greedy_destabilize(word)
    inv = bennequin_invariants(word)
    result = {
        "word": word.unparse(),
        "reduced": reduced.unparse(),
        "invariants": inv.to_dict(),
    }
    lines = [
        f"word: {word.unparse()}",
        f"reduced: {reduced.unparse()}",
        f"strands: {inv.strand_count}",
        f"crossings: {inv.crossing_count}",
        f"components: {inv.closure_components}",
        f"chi: {inv.bennequin_chi}",
        f"free_rank_upper: {inv.free_rank_upper}",
        f"connected: {'yes' if inv.connected_surface else 'no'}",
    ]
    return {
        "command": "braid",
        "config": {},
        "result": result,
        "assumptions": [FREE_SURFACE_ASSUMPTION],
        "warnings": [],
    }, lines


def cmd_calc(args):
    parsed = parse_construction(args.expression)
    model = parsed.model
    result = model.to_dict()
    result["exact_mn"] = parsed.exact_mn
    word = result["word"] if result["word"] else "(empty)"
    pages = "{ " + ", ".join(str(c) for c in result["page_chis"]) + " }"
    lines = [
        f"word: {word}",
        f"mn_upper: {result['mn_upper']}",
        f"pages: {pages}",
        f"chi_small: {result['chi_small']}",
        f"chi_large: {result['chi_large']}",
        f"binding: {model.binding}",
    ]
    if model.boundary_components is not None:
        lines.append(f"boundary components: {model.boundary_components}")
    if parsed.exact_mn is not None:
        lines.append(f"exact MN: {parsed.exact_mn}")
    return {
        "command": "calc",
        "config": {},
        "result": result,
        "assumptions": list(model.assumptions),
        "warnings": [],
    }, lines


def _parse_double(text: str):
    head, sep, sign = text.partition(":")
    if not sep or sign not in ("+", "-"):
        raise InputSyntaxError(
            "expected the double as 'm:+' or 'm:-'", len(head)
        )
    try:
        twist = int(head)
    except ValueError:
        raise InputSyntaxError(
            f"twist count {head!r} is not an integer", 0
        ) from None
    return twist, 1 if sign == "+" else -1


def cmd_bounds(args):
    word = parse_braid(args.braid)
    twist, clasp = (0, 1) if args.double is None else _parse_double(args.double)
    knot = KnotInput(
        braid=word,
        double_twist=twist,
        clasp_sign=clasp,
        braid_index_override=args.bi,
        crossing_override=args.cr,
        wrap_override=args.wrap,
        wlap_override=args.wlap,
        free_rank_override=args.freerank,
    )
    assumptions = []
    if args.double is None:
        cert = free_rank_bound(knot)
        assumptions.extend(cert.assumptions)
        result = {"free_rank": cert.to_dict()}
        lines = [
            f"MN(K) ≤ {cert.value} [{cert.name}]",
            f"  tree: {cert.tree}",
        ]
    else:
        table = best_double_bound(knot)
        best = table.best
        sign = "+" if clasp > 0 else "-"
        result = table.to_dict()
        lines = [f"MN(D(K, {twist}, {sign})) ≤ {best.value} [{best.name}]"]
        for cert in table.table:
            assumptions.extend(cert.assumptions)
            lines.append(f"{cert.name}: {cert.value}")
            lines.append(f"  tree: {cert.tree}")
    return {
        "command": "bounds",
        "config": {},
        "result": result,
        "assumptions": list(dict.fromkeys(assumptions)),
        "warnings": [],
    }, lines


_DISPATCH = {
    ("milnor", "radii"): cmd_milnor_radii,
    ("milnor", "crit"): cmd_milnor_crit,
    ("milnor", "trace"): cmd_milnor_trace,
    ("milnor", "report"): cmd_milnor_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "milnor":
            report, lines = _DISPATCH[(args.command, args.subcommand)](args)
        elif args.command == "braid":
            report, lines = cmd_braid(args)
        elif args.command == "calc":
            report, lines = cmd_calc(args)
        else:
            report, lines = cmd_bounds(args)
    except InputSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DisconnectedSurfaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidRadiusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MultiComponentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except MnovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if getattr(args, "json", False):
        sys.stdout.write(render_json(report))
    else:
        for line in lines:
            print(line)
        if report["assumptions"]:
            print("assumptions:")
            for item in report["assumptions"]:
                print(f"- {item}")
        for item in report["warnings"]:
            print(f"warning: {item}")

    if getattr(args, "strict", False):
        verdict = report["result"].get("verdict")
        incomplete = any(
            w.startswith("incomplete") for w in report["warnings"]
        )
        if verdict == "incomplete" or incomplete:
            return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
