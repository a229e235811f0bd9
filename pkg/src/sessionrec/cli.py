"""Batch command-line entry point.

Subcommands: stats, recommend, pathway, simulate, evaluate, serve. Edge files
are passed as repeatable ``--edges CLASS:PATH[:KERNEL_COL:OBJECT_COL]`` flags,
one per kernel class file.

Exit codes: 0 success, 2 graph validation violations, 3 usage or input errors.
Stdout tables are for humans; the CSV written via --out is the stable format.
"""
from __future__ import annotations

import argparse
import datetime
import random
import sys

from . import engine, evaluation, ingest, service
from .errors import SessionRecError
from .graph import KernelClass, SessionGraph, object_id

EXIT_OK = 0
EXIT_INVALID_GRAPH = 2
EXIT_USAGE = 3


class CliError(Exception):
    """Input problem that maps to exit code 3."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract reserves 2
    # for graph validation, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_edge_spec(value: str) -> ingest.EdgeFileSpec:
    parts = value.split(":")
    if len(parts) == 2:
        return ingest.EdgeFileSpec(path=parts[1], class_id=parts[0])
    if len(parts) >= 4:
        return ingest.EdgeFileSpec(
            path=":".join(parts[1:-2]),
            class_id=parts[0],
            kernel_column=parts[-2],
            object_column=parts[-1],
        )
    raise CliError(
        f"bad --edges value {value!r}, expected CLASS:PATH or "
        "CLASS:PATH:KERNEL_COL:OBJECT_COL"
    )


def _parse_date(value: str | None) -> datetime.date | None:
    if value is None:
        return None
    try:
        return datetime.date.fromisoformat(value)
    except ValueError:
        raise CliError(f"bad date {value!r}, expected YYYY-MM-DD") from None


def load_graph(args) -> tuple[SessionGraph, list[ingest.IngestReport]]:
    """Build and freeze a graph from the --edges flags."""
    specs = [parse_edge_spec(v) for v in args.edges]
    class_ids = []
    for spec in specs:
        if spec.class_id not in class_ids:
            class_ids.append(spec.class_id)
    g = SessionGraph([KernelClass(cid) for cid in class_ids])
    reports = []
    for spec in specs:
        reports.append(
            ingest.load_edges(
                spec,
                g,
                date_from=_parse_date(getattr(args, "date_from", None)),
                date_to=_parse_date(getattr(args, "date_to", None)),
                date_column=getattr(args, "date_column", "data"),
                strict=getattr(args, "strict", False),
            )
        )
    g.freeze()
    return g, reports


def _build_params(args) -> engine.RecommendParams:
    try:
        variant = engine.Variant(args.variant.replace("_", "-"))
    except ValueError:
        raise CliError(f"unknown variant {args.variant!r}") from None
    try:
        scope = engine.DegreeScope(args.scope)
    except ValueError:
        raise CliError(f"unknown scope {args.scope!r}") from None
    weights = None
    if args.weights:
        try:
            weights = engine.ClassWeights.parse(args.weights)
        except ValueError as exc:
            raise CliError(str(exc)) from None
    try:
        return engine.RecommendParams(
            variant=variant, degree_scope=scope, weights=weights, k=args.k
        )
    except (ValueError, SessionRecError) as exc:
        raise CliError(str(exc)) from None


def _load_catalog(args) -> ingest.ObjectCatalog | None:
    if not getattr(args, "catalog", None):
        return None
    return ingest.load_catalog(args.catalog)


def _print_validation(g: SessionGraph) -> int:
    report = g.validation_report
    if report.valid:
        return EXIT_OK
    print(f"validation: {len(report.violations)} violation(s)")
    for violation in report.violations:
        print(f"  {violation.code}: {violation.subject} ({violation.message})")
    return EXIT_INVALID_GRAPH


def _print_vector(vec, catalog, limit=10):
    if not vec.entries:
        print("(no recommendations)")
        return
    for position, (obj, score) in enumerate(vec.entries[:limit], start=1):
        name = catalog.name_of(obj) if catalog else None
        suffix = f"  {name}" if name else ""
        print(f"{position:>4}  {obj.raw:<16} {engine.normalize_score(score)}{suffix}")
    if len(vec.entries) > limit:
        print(f"... {len(vec.entries) - limit} more")


# -- subcommands ----------------------------------------------------------

def cmd_stats(args) -> int:
    g, reports = load_graph(args)
    stats = g.stats()
    print(f"objects: {stats.object_count}")
    print(f"kernels: {stats.kernel_count}")
    print(f"edges:   {stats.edge_count}")
    for cid in sorted(stats.kernel_counts):
        print(
            f"  class {cid}: kernels={stats.kernel_counts[cid]} "
            f"edges={stats.edge_counts[cid]}"
        )
    for report in reports:
        print(
            f"ingest {report.path}: rows={report.rows_read} "
            f"added={report.edges_added} duplicates={report.duplicates} "
            f"filtered={report.filtered} rejected={report.rejected_count}"
        )
        for rejected in report.rejected:
            print(f"  line {rejected.line}: {rejected.reason}")
    return _print_validation(g)


def _single_vector_command(args, compute) -> int:
    g, _ = load_graph(args)
    code = _print_validation(g)
    if code != EXIT_OK:
        return code
    params = _build_params(args)
    catalog = _load_catalog(args)
    vec = compute(g, params)
    _print_vector(vec, catalog)
    if args.out:
        ingest.export_vector(vec, catalog, args.out)
        print(f"wrote {len(vec.entries)} row(s) to {args.out}")
    return EXIT_OK


def cmd_recommend(args) -> int:
    seed = object_id(args.object)
    return _single_vector_command(
        args, lambda g, params: engine.recommend(g, seed, params)
    )


def cmd_pathway(args) -> int:
    raws = [part.strip() for part in args.objects.split(",") if part.strip()]
    if not raws:
        raise CliError("--objects must list at least one object id")
    seeds = [object_id(raw) for raw in raws]
    return _single_vector_command(
        args, lambda g, params: engine.recommend_pathway(g, seeds, params)
    )


def _algorithm_handles(names, params, k) -> list[evaluation.RecommenderHandle]:
    handles = []
    for name in names:
        if name == "ars":
            p = engine.RecommendParams(k=k)
            fn = lambda g, m, rng, p=p: engine.recommend(g, m, p)
        elif name == "ars-global":
            p = engine.RecommendParams(degree_scope=engine.DegreeScope.GLOBAL, k=k)
            fn = lambda g, m, rng, p=p: engine.recommend(g, m, p)
        elif name == "ars-weighted":
            if params.weights is None:
                raise CliError("algorithm 'ars-weighted' needs --weights")
            p = engine.RecommendParams(
                variant=engine.Variant.WEIGHTED, weights=params.weights, k=k
            )
            fn = lambda g, m, rng, p=p: engine.recommend(g, m, p)
        elif name == "ars-three-layer":
            p = engine.RecommendParams(variant=engine.Variant.THREE_LAYER, k=k)
            fn = lambda g, m, rng, p=p: engine.recommend_three_layer(g, m, p)
        elif name == "popularity":
            fn = lambda g, m, rng, k=k: evaluation.baseline_popularity(g, m, k)
        elif name == "random":
            count = k if k is not None else 10
            fn = lambda g, m, rng, count=count: evaluation.baseline_random(
                g, m, count, rng
            )
        else:
            raise CliError(f"unknown algorithm {name!r}")
        handles.append(evaluation.RecommenderHandle(name, fn))
    return handles


def cmd_simulate(args) -> int:
    names = [part.strip() for part in args.algorithms.split(",") if part.strip()]
    if not names:
        raise CliError("--algorithms must list at least one algorithm")
    if len(set(names)) != len(names):
        raise CliError("--algorithms must not repeat names")
    g, _ = load_graph(args)
    code = _print_validation(g)
    if code != EXIT_OK:
        return code
    params = _build_params(args)
    handles = _algorithm_handles(names, params, args.k)
    model_cls = evaluation.USER_MODELS.get(args.model)
    if model_cls is None:
        raise CliError(
            f"unknown user model {args.model!r}, "
            f"expected one of {sorted(evaluation.USER_MODELS)}"
        )
    rng = random.Random(args.seed)
    try:
        log = evaluation.simulate(g, handles, model_cls(), args.steps, rng)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    evaluation.write_action_log(log, args.out)
    print(f"wrote {len(log)} action(s) to {args.out}")
    for name in names:
        ratio = evaluation.efficiency(log, name)
        print(f"{name}: {ratio.numerator}/{ratio.denominator} = {float(ratio)}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    log = evaluation.read_action_log(args.log)
    ratio = evaluation.efficiency(log, args.algorithm, args.k)
    print(f"{ratio.numerator}/{ratio.denominator} = {float(ratio)}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    app = build_server_app(args)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_server_app(args):
    """Everything cmd_serve does short of binding the socket."""
    if not 1 <= args.port <= 65535:
        raise CliError(f"port must be in 1..65535, got {args.port}")
    g, _ = load_graph(args)
    if not g.valid:
        _print_validation(g)
        raise CliError("graph failed validation, refusing to serve")
    params = _build_params(args)
    catalog = _load_catalog(args)
    return service.create_app(g, catalog, params)


# -- parser ---------------------------------------------------------------

def _add_edges_arguments(sub):
    sub.add_argument(
        "--edges",
        action="append",
        required=True,
        metavar="CLASS:PATH[:KERNEL_COL:OBJECT_COL]",
        help="edge CSV for one kernel class; repeatable",
    )
    sub.add_argument("--date-from", help="keep rows dated on/after YYYY-MM-DD")
    sub.add_argument("--date-to", help="keep rows dated on/before YYYY-MM-DD")
    sub.add_argument("--date-column", default="data", help="date column name")
    sub.add_argument(
        "--strict", action="store_true", help="fail on the first rejected row"
    )


def _add_params_arguments(sub):
    sub.add_argument("--k", type=int, default=None, help="cut the vector to k entries")
    sub.add_argument(
        "--variant",
        default="base",
        help="base, weighted, three-layer or pathway",
    )
    sub.add_argument(
        "--scope", default="subgraph", help="degree scope: subgraph or global"
    )
    sub.add_argument("--weights", help="class weights, e.g. K1=2,K2=0.5")
    sub.add_argument("--catalog", help="object_id,name CSV for display names")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sessionrec", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("stats", help="ingest and validate, print counts")
    _add_edges_arguments(sub)
    sub.set_defaults(func=cmd_stats)

    sub = commands.add_parser("recommend", help="rank objects for one seed")
    _add_edges_arguments(sub)
    _add_params_arguments(sub)
    sub.add_argument("--object", required=True, help="seed object id")
    sub.add_argument("--out", help="write the vector CSV here")
    sub.set_defaults(func=cmd_recommend)

    sub = commands.add_parser("pathway", help="rank objects for a seed pathway")
    _add_edges_arguments(sub)
    _add_params_arguments(sub)
    sub.add_argument(
        "--objects", required=True, help="comma-separated ordered seed ids"
    )
    sub.add_argument("--out", help="write the vector CSV here")
    sub.set_defaults(func=cmd_pathway)

    sub = commands.add_parser("simulate", help="run the A/B user simulator")
    _add_edges_arguments(sub)
    _add_params_arguments(sub)
    sub.add_argument(
        "--algorithms",
        required=True,
        help="comma-separated names: ars, ars-global, ars-weighted, "
        "ars-three-layer, popularity, random",
    )
    sub.add_argument("--steps", type=int, required=True)
    sub.add_argument("--seed", type=int, default=0, help="simulation rng seed")
    sub.add_argument(
        "--model",
        default="uniform",
        help=f"user model: {', '.join(sorted(evaluation.USER_MODELS))}",
    )
    sub.add_argument("--out", required=True, help="write the action log here")
    sub.set_defaults(func=cmd_simulate)

    sub = commands.add_parser("evaluate", help="score an action log")
    sub.add_argument("--log", required=True, help="action log CSV")
    sub.add_argument("--algorithm", required=True)
    sub.add_argument("--k", type=int, default=None, help="count hits only in the top k")
    sub.set_defaults(func=cmd_evaluate)

    sub = commands.add_parser("serve", help="serve recommendations over HTTP")
    _add_edges_arguments(sub)
    _add_params_arguments(sub)
    sub.add_argument("--host", default="127.0.0.1")
    sub.add_argument("--port", type=int, default=8000)
    sub.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_USAGE
    except SessionRecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
