"""Command-line entry point.

Subcommands: gen (synthesize a follower network), run (single simulation),
sweep-tau / sweep-gap / equal-prior (experiment tables), analyze (metrics
from an existing event log). Exit codes: 0 success, 1 usage error, 2
validation error, 3 runtime failure. Every stochastic component is driven
by an explicit --seed; given identical inputs and seeds, outputs are
byte-identical.
"""

from __future__ import annotations

import argparse
import sys

from . import engine, experiments, metrics
from .emotions import (
    EMOTIONS,
    SimulationConfig,
    config_from_dict,
    ensure_valid,
    load_config,
)
from .errors import ValidationError
from .graph import GeneratorParams, generate_network, load_edge_list, save_edge_list

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting with code 2."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


# Flags mirroring the flat config keys; each overrides the config file value.
_CONFIG_FLAGS = (
    ("p_new", float), ("p_anger", float), ("p_disgust", float), ("p_joy", float),
    ("p_sadness", float), ("c_anger", float), ("c_disgust", float), ("c_joy", float),
    ("c_sadness", float), ("screen_size", int), ("steps", int), ("tau", float),
    ("seed", int),
)


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="JSON config file; flags below override its values")
    group = parser.add_argument_group("config overrides")
    for key, typ in _CONFIG_FLAGS:
        group.add_argument(f"--{key}", type=typ, default=None, help=f"override {key}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="emosim",
                     description="Emotion contagion simulator for directed follower networks")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = sub.add_parser("gen", help="generate a synthetic follower network")
    gen.add_argument("--nodes", type=int, required=True, help="number of users")
    gen.add_argument("--out-degree", type=int, default=20,
                     help="follow count of community members (default: 20)")
    gen.add_argument("--reciprocity", type=float, default=0.7,
                     help="probability a follow is reciprocated (default: 0.7)")
    gen.add_argument("--clustered-fraction", type=float, default=0.4,
                     help="share of users placed in tight circles (default: 0.4)")
    gen.add_argument("--seed", type=int, default=1, help="generator seed (default: 1)")
    gen.add_argument("-o", "--output", required=True,
                     help="edge-list path; strengths go to <output>.strengths")

    runp = sub.add_parser("run", help="run one simulation and write the event log")
    runp.add_argument("--graph", required=True, help="edge-list file")
    _add_config_options(runp)
    runp.add_argument("-o", "--output", required=True,
                      help="event log CSV; metadata goes to <output>.meta.json")

    tau = sub.add_parser("sweep-tau", help="threshold sweep with default posting priors")
    tau.add_argument("--graph", required=True)
    _add_config_options(tau)
    tau.add_argument("--taus", type=_float_list,
                     default=experiments.DEFAULT_TAUS, metavar="T0,T1,...",
                     help="thresholds to sweep (default: 0,0.02,0.04,0.06,0.08)")
    tau.add_argument("--seeds", type=_int_list, default=experiments.DEFAULT_SEEDS,
                     metavar="S0,S1,...", help="seeds per threshold (default: 1,2,3,4,5)")
    tau.add_argument("--workers", type=int, default=1, help="parallel runs (default: 1)")
    tau.add_argument("-o", "--output", required=True,
                     help="sweep CSV; manifest goes to <output>.manifest.json")

    gap = sub.add_parser("sweep-gap", help="joy-anger prior gap sweep at fixed tau")
    gap.add_argument("--graph", required=True)
    _add_config_options(gap)
    gap.add_argument("--gaps", type=_float_list, default=experiments.DEFAULT_GAPS,
                     metavar="G0,G1,...",
                     help="joy-anger prior gaps in [0, 0.5] (default: 0,0.04,...,0.40)")
    gap.add_argument("--gap-tau", type=float, default=experiments.DEFAULT_GAP_TAU,
                     help="threshold held fixed across the sweep (default: 0.06)")
    gap.add_argument("--seeds", type=_int_list, default=experiments.DEFAULT_SEEDS,
                     metavar="S0,S1,...")
    gap.add_argument("--workers", type=int, default=1)
    gap.add_argument("-o", "--output", required=True)

    eq = sub.add_parser("equal-prior", help="threshold sweep with all priors at 0.25")
    eq.add_argument("--graph", required=True)
    _add_config_options(eq)
    eq.add_argument("--taus", type=_float_list, default=experiments.DEFAULT_TAUS,
                    metavar="T0,T1,...")
    eq.add_argument("--seeds", type=_int_list, default=experiments.DEFAULT_SEEDS,
                    metavar="S0,S1,...")
    eq.add_argument("--workers", type=int, default=1)
    eq.add_argument("-o", "--output", required=True)

    an = sub.add_parser("analyze", help="compute metrics from an event log")
    an.add_argument("--events", required=True, help="event log CSV from 'run'")
    an.add_argument("--graph", required=True, help="the graph the log was produced on")
    an.add_argument("-o", "--output", required=True, help="per-emotion metrics CSV")
    an.add_argument("--vitality-out", default=None,
                    help="optional per-user vitality CSV (user,vitality,dominant)")

    return parser


def _config_from_args(args) -> SimulationConfig:
    base = load_config(args.config) if args.config else SimulationConfig()
    overrides = {key: getattr(args, key) for key, _ in _CONFIG_FLAGS
                 if getattr(args, key) is not None}
    return ensure_valid(config_from_dict(overrides, base=base))


def _cmd_gen(args) -> int:
    params = GeneratorParams(node_count=args.nodes, out_degree_target=args.out_degree,
                             reciprocity_prob=args.reciprocity, seed=args.seed,
                             clustered_fraction=args.clustered_fraction)
    graph = generate_network(params)
    save_edge_list(graph, args.output)
    print(f"wrote {graph.node_count} nodes, {graph.edge_count} edges to {args.output}")
    return EXIT_OK


def _cmd_run(args) -> int:
    graph = load_edge_list(args.graph)
    config = _config_from_args(args)
    result = engine.run(graph, config)
    engine.write_event_log(result.events, args.output)
    engine.write_run_metadata(args.output + ".meta.json", result)
    print(f"wrote {len(result.events)} events ({result.message_count} posts, "
          f"{result.retweet_count} retweets) to {args.output}")
    return EXIT_OK


def _cmd_sweep_tau(args) -> int:
    graph = load_edge_list(args.graph)
    config = _config_from_args(args)
    spec = experiments.SweepSpec(base_config=config, variable="tau",
                                 values=tuple(args.taus), seeds=tuple(args.seeds),
                                 graph_source=args.graph)
    rows = experiments.sweep_tau(spec, graph=graph, workers=args.workers)
    experiments.write_sweep_csv(rows, args.output, "tau")
    experiments.write_sweep_manifest(
        args.output + ".manifest.json", experiment="sweep-tau", variable="tau",
        values=args.taus, seeds=args.seeds, config=config, graph=graph)
    print(f"wrote {len(rows)} rows to {args.output}")
    return EXIT_OK


def _cmd_sweep_gap(args) -> int:
    graph = load_edge_list(args.graph)
    config = _config_from_args(args)
    spec = experiments.SweepSpec(base_config=config, variable="gap",
                                 values=tuple(args.gaps), seeds=tuple(args.seeds),
                                 graph_source=args.graph)
    result = experiments.sweep_gap(spec, tau=args.gap_tau, graph=graph,
                                   workers=args.workers)
    experiments.write_sweep_csv(result.rows, args.output, "gap")
    experiments.write_sweep_manifest(
        args.output + ".manifest.json", experiment="sweep-gap", variable="gap",
        values=args.gaps, seeds=args.seeds, config=config, graph=graph,
        extra={"tau": args.gap_tau,
               "crossover_tweets": result.crossover_tweets,
               "crossover_users": result.crossover_users})
    print(f"wrote {len(result.rows)} rows to {args.output}; "
          f"crossovers: tweets={result.crossover_tweets} users={result.crossover_users}")
    return EXIT_OK


def _cmd_equal_prior(args) -> int:
    graph = load_edge_list(args.graph)
    config = _config_from_args(args)
    config = ensure_valid(config_from_dict(
        {"p_anger": 0.25, "p_joy": 0.25, "p_disgust": 0.25, "p_sadness": 0.25},
        base=config))
    rows = experiments.equal_prior_run(config, taus=args.taus, seeds=args.seeds,
                                       graph=graph, graph_source=args.graph,
                                       workers=args.workers)
    experiments.write_sweep_csv(rows, args.output, "tau")
    experiments.write_sweep_manifest(
        args.output + ".manifest.json", experiment="equal-prior", variable="tau",
        values=args.taus, seeds=args.seeds, config=config, graph=graph)
    print(f"wrote {len(rows)} rows to {args.output}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    graph = load_edge_list(args.graph)
    events = engine.read_event_log(args.events)
    prefs = metrics.strength_preferences(events, graph)
    post_counts = [[0] * len(EMOTIONS) for _ in range(graph.node_count)]
    for e in events:
        post_counts[e.author if isinstance(e, engine.PostEvent) else e.reader][e.emotion] += 1
    report = metrics.proportion_report(events, post_counts)
    metrics.write_metrics_report(args.output, prefs, report)
    if args.vitality_out:
        records = metrics.build_vitality_records(post_counts)
        metrics.write_vitality_csv(args.vitality_out, records)
    print(f"wrote metrics for {len(events)} events to {args.output}")
    return EXIT_OK


_HANDLERS = {
    "gen": _cmd_gen,
    "run": _cmd_run,
    "sweep-tau": _cmd_sweep_tau,
    "sweep-gap": _cmd_sweep_gap,
    "equal-prior": _cmd_equal_prior,
    "analyze": _cmd_analyze,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        print("run 'emosim COMMAND --help' for usage", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _HANDLERS[args.command](args)
    except ValidationError as exc:
        print(f"emosim {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"emosim {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:
        print(f"emosim {args.command}: unexpected failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def console_entry() -> None:
    raise SystemExit(main())
