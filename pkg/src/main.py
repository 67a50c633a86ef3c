import argparse
import logging
import math
import os
import sys
from typing import List, Optional

import numpy as np

from .central_configs import RootFindError, cc_report, enumerate_ccs, vl_gap
from .config import (
    ABS_TOL,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    REL_TOL,
    SEED_EPSILON,
    SIGMA_BUDGET,
)
from .connections import (
    Side,
    Stability,
    alpha_star_report,
    branch_samples,
    classify_connections,
    collapse_to_boxes,
    connection_graph,
    find_alpha_star,
    make_branch,
    seed_branch,
    sweep,
    trace_branch,
)
from .estimates import BOUND_SETS, bound_sets
from .flows import (
    IntegratorConfig,
    full_field,
    integrate,
    kepler_transit_angle,
    kepler_transit_check,
    parabolic_constraint,
    section_embedding,
    FullState,
)
from .image_handler import PortraitError, close_portrait, export_png, render_portrait, samples_from_table
from .logger import set_verbosity, setup_logger
from .potentials import Homogeneity, HomogeneityError, NumericalError, SectionKind, regularized_potential, \
    regularizing_factor
from .reports import (
    ReportError,
    bound_rows,
    bound_table_markdown,
    read_trajectory_csv,
    verify_report,
    write_csv,
    write_json,
    write_trajectory_csv,
)

logger = setup_logger("main")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exceptions instead of exiting with 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _alpha(text: str) -> float:
    value = float(text)
    if not (0.0 < value < 2.0):
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 2), got {value}")
    return value


def _branch_label(text: str):
    if len(text) < 2 or text[-1] not in "+-":
        raise argparse.ArgumentTypeError(f"expected a signed label such as p11- or e11+, got '{text}'")
    return text[:-1], 1 if text[-1] == "+" else -1


def _config(args) -> IntegratorConfig:
    return IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


# --- Commands ---

def cmd_cc(args) -> int:
    h = Homogeneity(args.alpha)
    ccs = enumerate_ccs(h)
    write_json({"alpha": h.alpha, "count": len(ccs), "vl_gap": vl_gap(h), "ccs": cc_report(h, ccs)}, args.out)
    return EXIT_OK


def _trace_full(args, h: Homogeneity, label: str, sign: int) -> int:
    section = SectionKind.PLANAR if label.startswith("p") else SectionKind.TETRA
    branch = make_branch(section, h, label, sign, Stability.UNSTABLE, Side(args.side))
    seed = seed_branch(h, branch, args.eps)
    w, _ = regularized_potential(section, h, seed.x)
    r, _ = regularizing_factor(section, h, seed.x)
    start = section_embedding(section, seed.x, seed.v, seed.u * math.sqrt(w) / r)
    traj = integrate(full_field(h), start, _config(args), args.horizon,
                     residual=lambda y: parabolic_constraint(h, FullState.from_array(y)))
    if args.format == "json":
        write_json({"alpha": h.alpha, "branch": branch.name, "final_state": traj.final_state.tolist(),
                    "max_residual": float(np.max(np.abs(traj.residuals)))}, args.out)
    else:
        write_trajectory_csv(traj.sigma, traj.states, traj.residuals, path=args.out, full=True)
    return EXIT_OK


def cmd_trace(args) -> int:
    h = Homogeneity(args.alpha)
    label, sign = args.branch
    if args.section == "full":
        return _trace_full(args, h, label, sign)
    section = SectionKind.parse(args.section)
    stability = Stability.STABLE if args.stable else Stability.UNSTABLE
    branch = make_branch(section, h, label, sign, stability, Side(args.side))
    outcome = trace_branch(h, branch, args.eps, _config(args), sigma_budget=args.horizon)

    if args.format == "json":
        write_json(outcome.as_dict(), args.out)
        return EXIT_OK
    sigma, states, residuals = branch_samples(outcome)
    events = [(c.sigma, f"arm:{c.target}:{c.v:.12g}") for c in outcome.arm_crossings]
    events += [(z.sigma, "v_zero") for z in outcome.zero_crossings]
    events.append((float(sigma[-1]), f"outcome:{outcome.kind.value}:{outcome.target}"))
    events.sort(key=lambda e: abs(e[0]))
    write_trajectory_csv(sigma, states, residuals, events, args.out)
    if args.out and args.out != "-":
        write_json(outcome.as_dict(), os.path.splitext(args.out)[0] + ".outcome.json")
    return EXIT_OK


def cmd_alpha_star(args) -> int:
    section = SectionKind.parse(args.section)
    if args.target == "both":
        write_json(alpha_star_report(section, args.drift, _config(args)), args.out)
    else:
        report = find_alpha_star(section, None, args.target, args.drift, args.integrator, config=_config(args))
        write_json(report.as_dict(), args.out)
    return EXIT_OK


def cmd_verify_appendix(args) -> int:
    reports = bound_sets(args.set, traced=args.traced)
    if args.format == "json":
        write_json([r.as_dict() for r in reports], args.out)
    elif args.format == "markdown":
        text = bound_table_markdown(reports)
        if args.out and args.out != "-":
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
    else:
        header, rows = bound_rows(reports)
        write_csv(header, rows, args.out)
    return EXIT_OK


def cmd_kepler_check(args) -> int:
    measured = kepler_transit_check(args.beta, config=_config(args))
    expected = kepler_transit_angle(args.beta)
    write_json({"beta": args.beta, "transit": measured, "expected": expected,
                "error": abs(measured - expected)}, args.out)
    return EXIT_OK


def cmd_plot(args) -> int:
    h = Homogeneity(args.alpha)
    samples = []
    for path in args.inputs:
        header, data, _ = read_trajectory_csv(path)
        if data.shape[0] == 0:
            raise ReportError(f"{path} has no samples")
        samples.append(samples_from_table(header, data, os.path.basename(path)))
    fig = render_portrait(samples, SectionKind.parse(args.section), h, args.output)
    try:
        if args.png and not export_png(fig, args.png):
            raise ReportError(f"PNG export to {args.png} failed")
    finally:
        close_portrait(fig)
    return EXIT_OK


def cmd_graph(args) -> int:
    h = Homogeneity(args.alpha)
    graph = connection_graph(h, classify_connections(h, args.critical or (), args.eps))
    payload = graph.as_dict()
    if args.boxes:
        payload["boxes"] = collapse_to_boxes(graph)
    write_json(payload, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    for alpha in args.alphas:
        Homogeneity(alpha)
    results = sweep(args.alphas, args.critical or (), args.eps)
    write_json({f"{a:g}": [e.as_dict() for e in edges] for a, edges in results.items()}, args.out)
    return EXIT_OK


def cmd_verify_report(args) -> int:
    for path in args.files:
        value = verify_report(path)
        print(f"{path}: OK {value}")
    return EXIT_OK


# --- Parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dihedral4", description="Collision-manifold toolkit for the dihedral four-body problem")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alpha=True):
        if alpha:
            p.add_argument("--alpha", type=_alpha, default=1.0, help="Homogeneity exponent in (0, 2)")
        p.add_argument("--out", default=None, help="Output path (stdout when omitted)")
        p.add_argument("--rel-tol", type=float, default=REL_TOL)
        p.add_argument("--abs-tol", type=float, default=ABS_TOL)

    p = sub.add_parser("cc", help="Central configurations and their linearization")
    common(p)
    p.set_defaults(func=cmd_cc)

    p = sub.add_parser("trace", help="Trace one branch of a restpoint")
    common(p)
    p.add_argument("--section", choices=["planar", "tetra", "full"], default="planar")
    p.add_argument("--from", dest="branch", type=_branch_label, required=True, help="Restpoint, e.g. p11-")
    p.add_argument("--side", choices=["left", "right"], default="right")
    p.add_argument("--stable", action="store_true", help="Trace the stable branch backward")
    p.add_argument("--eps", type=float, default=SEED_EPSILON)
    p.add_argument("--horizon", type=float, default=SIGMA_BUDGET)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("alpha-star", help="Critical exponents by bisection")
    common(p, alpha=False)
    p.add_argument("--section", choices=["planar", "tetra"], default="planar")
    p.add_argument("--target", choices=["both", "alpha_star", "alpha0_star"], default="both")
    p.add_argument("--drift", choices=["half", "section"], default="half")
    p.add_argument("--integrator", choices=["one_form", "regularized"], default="one_form")
    p.set_defaults(func=cmd_alpha_star)

    p = sub.add_parser("verify-appendix", help="Recompute the estimate chains")
    common(p, alpha=False)
    p.add_argument("--set", choices=["all"] + list(BOUND_SETS), default="all")
    p.add_argument("--traced", action="store_true", help="Also trace the branch values the chains consume")
    p.add_argument("--format", choices=["json", "csv", "markdown"], default="json")
    p.set_defaults(func=cmd_verify_appendix)

    p = sub.add_parser("kepler-check", help="Constant-potential transit angle")
    common(p, alpha=False)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_kepler_check)

    p = sub.add_parser("plot", help="Phase portrait from trajectory CSV files")
    p.add_argument("inputs", nargs="+", help="Trajectory CSV files")
    p.add_argument("-o", "--output", required=True, help="SVG (or PNG) portrait path")
    p.add_argument("--png", default=None, help="Additional PNG export")
    p.add_argument("--alpha", type=_alpha, default=1.0)
    p.add_argument("--section", choices=["planar", "tetra"], default="planar")
    p.set_defaults(func=cmd_plot)

    for name, func, helptext in (("graph", cmd_graph, "Connection graph at one alpha"),
                                 ("sweep", cmd_sweep, "Connection edges over several alphas")):
        p = sub.add_parser(name, help=helptext)
        common(p, alpha=(name == "graph"))
        if name == "graph":
            p.add_argument("--boxes", action="store_true", help="Add the merged box view")
        else:
            p.add_argument("--alphas", type=_alpha, nargs="+", required=True)
        p.add_argument("--critical", type=float, nargs="*", help="Known critical exponents")
        p.add_argument("--eps", type=float, default=SEED_EPSILON)
        p.set_defaults(func=func)

    p = sub.add_parser("verify-report", help="Check report files against their sha256 sidecars")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_verify_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE

    if args.verbose:
        set_verbosity(logging.DEBUG)

    try:
        return args.func(args)
    except (UsageError, HomogeneityError, KeyError, PortraitError) as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except RootFindError as e:
        logger.error(f"Root finder failed: {e}")
        return EXIT_NUMERICAL
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except ReportError as e:
        logger.error(f"Report failure: {e}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
