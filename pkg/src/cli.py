import argparse
import logging
import math
import sys
from typing import Callable, Dict, List, Optional, Sequence

from .config import configure_logging, load_config, parse_limit_overrides
from .errors import (
    DomainError,
    InvariantViolation,
    ParseError,
    ResourceError,
    SizeMismatchError,
    StructureError,
    UsageError,
    ValidationFailed,
)
from .exact_oracles import (
    OracleLimits,
    chromatic_number,
    maximum_independent_set,
    min_biclique_partition,
    min_cover_weight,
)
from .file_formats import read_graph, read_system, serialize_graph, serialize_system, write_text
from .generators import (
    complete_graph,
    complete_multipartite,
    cycle_graph,
    gp_star_partition,
    ks_code_cover,
    petersen_graph,
    random_biclique_union,
    random_graph,
)
from .graph_core import (
    BicliqueSystem,
    cover_stats,
    members,
    popcount,
    union_graph,
    validate_cover,
    validate_partition,
)
from .hansel import (
    derandomized_extract,
    enumerate_mean_survivors,
    expected_survivors,
    jensen_bound,
    randomized_extract,
)
from .mv_coloring import (
    BOTTOM,
    colors_bound,
    invert_bound,
    mv_color,
    theorem1_bound,
    theorem2_main_term,
    unrenumbered_colors_bound,
    verify_proper,
)
from .peeling import analyze_trace, peel, theorem3_bound
from .reporting import RunReport, render_text, write_report

logger = logging.getLogger(__name__)

_cfg = load_config()

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RESOURCE = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _sizes(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}")


def _system_rows(system: BicliqueSystem) -> List[dict]:
    return [
        {"index": i, "left": list(b.left_vertices()), "right": list(b.right_vertices())}
        for i, b in system.indexed()
    ]


def _limits(args) -> OracleLimits:
    overrides = parse_limit_overrides(args.limits)
    if args.time_budget is not None:
        overrides["time_budget"] = args.time_budget
    return OracleLimits.from_config(overrides)


def cmd_validate(args, report: RunReport) -> int:
    system = read_system(args.system)
    report.add_input(args.system)
    if args.kind == "partition":
        with report.phase("validate"):
            verdict = validate_partition(system)
    else:
        if not args.graph:
            raise UsageError("validate cover needs a graph file")
        g = read_graph(args.graph)
        report.add_input(args.graph)
        with report.phase("validate"):
            verdict = validate_cover(system, g)
    report.results.update(verdict.to_dict())
    report.results["message"] = verdict.describe()
    return EXIT_OK if verdict.ok else EXIT_VALIDATION


def cmd_color(args, report: RunReport) -> int:
    system = read_system(args.system)
    report.add_input(args.system)
    with report.phase("color"):
        coloring = mv_color(system, renumber=not args.no_renumber)
    g = union_graph(system)
    with report.phase("verify"):
        check = verify_proper(g, coloring)

    m = system.m
    bottom = sum(1 << v for v, seq in coloring.assignment.items() if seq == BOTTOM)
    bound = colors_bound(m) if coloring.renumber else unrenumbered_colors_bound(m)
    report.results.update(
        {
            "n": system.universe_n,
            "m": m,
            "renumber": coloring.renumber,
            "distinct_colors": coloring.distinct_colors,
            "proper": check.ok,
            "witness": list(check.witness) if check.witness else None,
            "colors_bound": bound,
            "within_bound": coloring.distinct_colors <= bound,
            "invert_bound_of_colors": invert_bound(coloring.distinct_colors),
            "theorem2_main_term": theorem2_main_term(m) if m >= 1 else None,
            "stages": coloring.stages,
            "max_length": coloring.max_length(),
            "bottom_size": popcount(bottom),
            "bottom_independent": g.is_independent(bottom),
            "assignment": {str(v): list(seq) for v, seq in sorted(coloring.assignment.items())},
        }
    )
    if args.trace:
        report.results["trace"] = [record.to_dict() for record in coloring.trace]
    return EXIT_OK if check.ok else EXIT_VALIDATION


def cmd_hansel(args, report: RunReport) -> int:
    system = read_system(args.system)
    report.add_input(args.system)
    stats = cover_stats(system)
    g = union_graph(system)
    report.results.update(
        {
            "n": system.universe_n,
            "m": system.m,
            "weight": stats.weight,
            "jensen_bound": jensen_bound(system.universe_n, stats.weight),
        }
    )

    if args.mode == "expect":
        with report.phase("expect"):
            expected = expected_survivors(system)
        report.results["expected"] = expected
        if args.enumerate:
            with report.phase("enumerate"):
                mean = enumerate_mean_survivors(system)
            report.results["enumerated"] = mean
            report.results["oracle_equal"] = mean == expected
        return EXIT_OK

    with report.phase(args.mode):
        if args.mode == "random":
            report.seed = args.seed
            result = randomized_extract(system, args.seed)
        else:
            result = derandomized_extract(system)
    report.results.update(
        {
            "survivors": result.survivor_list(),
            "size": result.size,
            "guarantee": result.guarantee,
            "guarantee_ceiling": math.ceil(result.guarantee),
            "independent": g.is_independent(result.survivors),
            "deleted_sides": [side.value for side in result.deleted_sides],
        }
    )
    if result.steps:
        report.results["steps"] = [
            {
                "index": step.index,
                "before": step.before,
                "if_left_deleted": step.if_left_deleted,
                "if_right_deleted": step.if_right_deleted,
                "deleted": step.deleted.value,
            }
            for step in result.steps
        ]
    return EXIT_OK


def cmd_peel(args, report: RunReport) -> int:
    g = read_graph(args.graph)
    system = read_system(args.system)
    report.add_input(args.graph)
    report.add_input(args.system)
    limits = _limits(args)
    with report.phase("peel"):
        trace = peel(g, system, args.k, limits)
    with report.phase("analyze"):
        analysis = analyze_trace(trace, trace.k, g.n, g=g, limits=limits)
    report.results.update(
        {
            "n": g.n,
            "k": trace.k,
            "final_vertices": list(members(trace.final_vertices)),
            "rounds": [r.to_dict() for r in trace.rounds],
            "analysis": analysis,
        }
    )
    return EXIT_OK if analysis["t_bound_holds"] else EXIT_VALIDATION


def cmd_oracle(args, report: RunReport) -> int:
    g = read_graph(args.graph)
    report.add_input(args.graph)
    limits = _limits(args)
    report.results["n"] = g.n
    report.results["edges"] = len(g.edges)

    with report.phase(args.quantity):
        if args.quantity == "chi":
            report.results["value"] = chromatic_number(g, limits)
            return EXIT_OK
        if args.quantity == "alpha":
            witness = maximum_independent_set(g, limits)
            report.results["value"] = popcount(witness)
            report.results["witness"] = list(members(witness))
            return EXIT_OK
        solve = min_biclique_partition if args.quantity == "bp" else min_cover_weight
        result = solve(g, limits)

    report.results.update(
        {
            "value": result.value,
            "nodes": result.nodes,
            "witness": _system_rows(result.witness),
        }
    )
    if args.out:
        write_text(args.out, serialize_system(result.witness))
    return EXIT_OK


def cmd_gen(args, report: RunReport) -> int:
    family = args.family
    if family in ("random", "gnp"):
        report.seed = args.seed

    with report.phase("generate"):
        if family == "kk":
            obj = complete_graph(_required(args.k, "--k"))
        elif family == "multipartite":
            obj = complete_multipartite(_required(args.sizes, "--sizes"))
        elif family == "gpstars":
            obj = gp_star_partition(_required(args.sizes, "--sizes"))
        elif family == "kscode":
            obj = ks_code_cover(_required(args.k, "--k"))
        elif family == "random":
            obj = random_biclique_union(_required(args.n, "--n"), _required(args.m, "--m"), args.seed)
        elif family == "petersen":
            obj = petersen_graph()
        elif family == "cycle":
            obj = cycle_graph(_required(args.n, "--n"))
        else:
            obj = random_graph(_required(args.n, "--n"), _required(args.p, "--p"), args.seed)

    if isinstance(obj, BicliqueSystem):
        text = serialize_system(obj)
        report.results.update({"kind": "system", "n": obj.universe_n, "m": obj.m})
    else:
        text = serialize_graph(obj)
        report.results.update({"kind": "graph", "n": obj.n, "edges": len(obj.edges)})
    report.results["text"] = text.splitlines()

    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
        args.quiet_report = True
    return EXIT_OK


def cmd_bounds(args, report: RunReport) -> int:
    which = args.which
    if which == "colors":
        m = _required(args.m, "--m")
        report.results.update(
            {"m": m, "colors_bound": colors_bound(m), "unrenumbered_colors_bound": unrenumbered_colors_bound(m)}
        )
    elif which == "invert":
        k = _integer_k(args)
        report.results.update({"k": k, "m": invert_bound(k)})
    elif which == "thm1":
        k = _required(args.k, "--k")
        report.results.update({"k": k, "theorem1_bound": theorem1_bound(k)})
    else:
        k = _integer_k(args)
        report.results.update({"k": k, "theorem3_bound": theorem3_bound(k)})
    return EXIT_OK


def _required(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


def _integer_k(args) -> int:
    k = _required(args.k, "--k")
    if not float(k).is_integer():
        raise UsageError(f"--k must be an integer for `bounds {args.which}`, got {k}")
    return int(k)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", dest="json_path", default=None, help="Write the JSON report here.")
    common.add_argument(
        "--seed",
        type=int,
        default=int(_cfg["generators"].get("default_seed", 0)),
        help="Seed for every random choice (default from config, 0).",
    )
    common.add_argument("--limits", default=None, help="Oracle limit overrides, e.g. max_edges_partition=12.")
    common.add_argument("--time-budget", type=float, default=None, help="Oracle time budget in seconds.")
    common.add_argument("--verbose", action="store_true", help="Log debug progress to stderr.")

    parser = _Parser(prog="bicliques", description="Biclique coverings and chromatic number experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Check partition or cover structure.")
    p.add_argument("kind", choices=["partition", "cover"])
    p.add_argument("system")
    p.add_argument("graph", nargs="?")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("color", parents=[common], help="Staged coloring of an edge-disjoint biclique union.")
    p.add_argument("system")
    p.add_argument("--no-renumber", action="store_true", help="Use global biclique indices as labels.")
    p.add_argument("--trace", action="store_true", help="Include the per-stage group trace.")
    p.set_defaults(handler=cmd_color)

    p = sub.add_parser("hansel", parents=[common], help="Independent sets from a biclique cover.")
    p.add_argument("mode", choices=["random", "derand", "expect"])
    p.add_argument("system")
    p.add_argument("--enumerate", action="store_true", help="Also average over all 2^m side choices.")
    p.set_defaults(handler=cmd_hansel)

    p = sub.add_parser("peel", parents=[common], help="Iterated Hansel extraction down to k vertices.")
    p.add_argument("graph")
    p.add_argument("system")
    p.add_argument("--k", type=int, default=None, help="Threshold; defaults to the chromatic number.")
    p.set_defaults(handler=cmd_peel)

    p = sub.add_parser("oracle", parents=[common], help="Exact solvers on small graphs.")
    p.add_argument("quantity", choices=["chi", "alpha", "bp", "mincover"])
    p.add_argument("graph")
    p.add_argument("--out", default=None, help="Write the witness system here.")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("gen", parents=[common], help="Emit graphs and biclique systems.")
    p.add_argument("family", choices=["kk", "multipartite", "gpstars", "kscode", "random", "petersen", "cycle", "gnp"])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--sizes", type=_sizes, default=None)
    p.add_argument("--out", default=None, help="Write the generated file here instead of stdout.")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("bounds", parents=[common], help="Evaluate the bound functions.")
    p.add_argument("which", choices=["colors", "invert", "thm1", "thm3"])
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--k", type=float, default=None)
    p.set_defaults(handler=cmd_bounds)

    return parser


_EXIT_FOR: Dict[type, int] = {
    ValidationFailed: EXIT_VALIDATION,
    ParseError: EXIT_VALIDATION,
    StructureError: EXIT_VALIDATION,
    SizeMismatchError: EXIT_VALIDATION,
    InvariantViolation: EXIT_VALIDATION,
    ResourceError: EXIT_RESOURCE,
    UsageError: EXIT_USAGE,
    DomainError: EXIT_USAGE,
    FileNotFoundError: EXIT_USAGE,
}


def _exit_code(exc: BaseException) -> Optional[int]:
    for kind, code in _EXIT_FOR.items():
        if isinstance(exc, kind):
            return code
    return None


def dispatch(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_USAGE

    configure_logging(args.verbose)
    report = RunReport(command=" ".join([args.command] + _positional_tail(args)))
    handler: Callable = args.handler
    try:
        code = handler(args, report)
    except Exception as exc:
        code = _exit_code(exc)
        if code is None:
            raise
        logger.error("%s", exc)
        report.results["error"] = str(exc)
        report.results["exit_code"] = code
        if isinstance(exc, ValidationFailed):
            report.results["validation"] = exc.report.to_dict()

    write_report(report, args.json_path)
    if not getattr(args, "quiet_report", False):
        sys.stdout.write(render_text(report))
    return code


def _positional_tail(args) -> List[str]:
    for name in ("kind", "mode", "quantity", "family", "which"):
        if hasattr(args, name):
            return [getattr(args, name)]
    return []


def main() -> int:
    return dispatch(sys.argv[1:])


__all__ = ["dispatch", "main", "build_parser"]
