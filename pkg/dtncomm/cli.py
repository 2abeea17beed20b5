"""
Command line entry point: dtncomm <subcommand> [options]
Every subcommand accepts the global options --config, --output-dir, --threads, --seed and --log-level. Options given
on the command line override the YAML configuration file, which overrides the defaults.
Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical error.
"""
import logging
import sys
from argparse import ArgumentParser
from pathlib import Path

from dtncomm import __version__, read_save
from dtncomm.errors import ConfigError, DtnCommError
from dtncomm.metrics.static import compare_networks
from dtncomm.pipeline.config import build_config
from dtncomm.pipeline.runner import run_pipeline
from dtncomm.synthetic.networks import SyntheticModel, SyntheticSpec, generate
from dtncomm.synthetic.traces import poisson_contact_trace, synthetic_session_log

logger = logging.getLogger("dtncomm")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _common_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="YAML", help="Configuration file, keys are PipelineConfig fields.")
    common.add_argument("--output-dir", metavar="DIR", help="Directory of the output files.")
    common.add_argument("--threads", type=int, help="Number of worker threads (outputs do not depend on it).")
    common.add_argument("--seed", type=int, help="Seed of every random generator.")
    common.add_argument(
        "--log-level", default="WARNING", type=str.upper, choices=LOG_LEVELS, help="Logging level."
    )
    return common


def _add_ingest_options(parser):
    parser.add_argument("--delimiter", help="Field separator of the session log, ',' by default.")
    parser.add_argument("--gap-seconds", help="Same-AP merge gap, seconds or a duration like 1m.")
    parser.add_argument("--flicker-seconds", help="Longest absorbed ping-pong flicker.")


def _add_temporal_options(parser):
    parser.add_argument(
        "--window",
        dest="windows",
        action="append",
        metavar="DURATION",
        help="Snapshot window, repeatable: seconds or a duration with a s/m/h/d/w/mo suffix.",
    )
    parser.add_argument("--gamma-factor", type=float, help="gamma = factor / max spectral radius, in (0, 1).")
    parser.add_argument("--origin", type=int, help="Start time of the first snapshot.")
    parser.add_argument("--observation-span", help="Observation span T, seconds or a duration.")
    parser.add_argument(
        "--trajectory", action="store_true", default=None, help="Also write C_t after every snapshot."
    )
    parser.add_argument(
        "--node-vectors", action="store_true", default=None, help="Also write per-node broadcast/receive vectors."
    )


def parse_args(argv=None):
    common = _common_parser()
    parser = ArgumentParser(
        prog="dtncomm",
        description="""Communicability measures of static and temporal contact graphs built from WiFi association
        logs, and synthetic baselines.""",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    ingest = subparsers.add_parser(
        "ingest", parents=[common], help="Session log -> smoothed association intervals."
    )
    ingest.add_argument("--input", dest="sessions", metavar="LOG", help="Association session log.")
    _add_ingest_options(ingest)

    encounters = subparsers.add_parser(
        "encounters", parents=[common], help="Association intervals -> encounter events."
    )
    encounters.add_argument("--intervals", metavar="CSV", help="Intervals CSV written by ingest.")
    encounters.add_argument("--merge-gap-seconds", help="Merge same-pair encounters closer than this gap.")

    graph = subparsers.add_parser("graph", parents=[common], help="Encounter events -> contact graphs.")
    graph.add_argument("--encounters", metavar="CSV", help="Encounters CSV written by encounters.")
    graph.add_argument(
        "--mode",
        dest="graph_modes",
        action="append",
        choices=("unweighted", "weighted"),
        help="Graph mode, repeatable. Both modes by default.",
    )
    graph.add_argument("--threshold", type=float, help="Keep the edges with social weight above this value.")
    graph.add_argument("--observation-span", help="Observation span T, seconds or a duration.")

    static = subparsers.add_parser(
        "static-metrics", parents=[common], help="Communicability and subgraph centrality of contact graphs."
    )
    static.add_argument("--graph", dest="graphs", action="append", metavar="CSV", help="Graph edge list, repeatable.")
    static.add_argument(
        "--mode",
        dest="graph_modes",
        action="append",
        choices=("unweighted", "weighted"),
        help="Only report the input graphs of this mode, repeatable. Every mode by default.",
    )
    static.add_argument("--dense-limit", type=int, help="Exact dense computation up to this many nodes.")
    static.add_argument("--probes", type=int, help="Number of stochastic probes above the dense limit.")

    temporal = subparsers.add_parser(
        "temporal-metrics", parents=[common], help="Katz temporal communicability over snapshot windows."
    )
    temporal.add_argument("--encounters", metavar="CSV", help="Encounters CSV written by encounters.")
    temporal.add_argument(
        "--dense-limit", dest="temporal_dense_limit", type=int, help="Dense C^M up to this many nodes."
    )
    _add_temporal_options(temporal)

    synth = subparsers.add_parser(
        "synth", parents=[common], help="Synthetic networks, contact traces and session logs."
    )
    synth.add_argument(
        "--model",
        required=True,
        choices=("ba", "ws", "contacts", "sessions"),
        help="ba: preferential attachment graph, ws: small world graph, contacts: Poisson encounter trace, "
        "sessions: association session log.",
    )
    synth.add_argument("--nodes", type=int, required=True, help="Number of nodes.")
    synth.add_argument("--m", type=int, default=2, help="Preferential attachment edges per new node.")
    synth.add_argument("--k", type=int, default=2, help="Small world ring degree (even).")
    synth.add_argument("--p", type=float, default=0.0, help="Small world rewiring probability.")
    synth.add_argument("--days", type=float, default=30.0, help="Length of a trace or log in days.")
    synth.add_argument("--rate", type=float, default=5.0, help="Contacts per node per day of a trace.")
    synth.add_argument("--mean-duration", type=float, default=600.0, help="Mean contact duration in seconds.")
    synth.add_argument("--aps", type=int, default=50, help="Number of APs of a session log.")

    compare = subparsers.add_parser(
        "compare", parents=[common], help="Comparison table of graphs and synthetic baselines of the same size."
    )
    compare.add_argument("--graph", dest="graphs", action="append", metavar="CSV", help="Graph edge list, repeatable.")
    compare.add_argument(
        "--baseline",
        action="append",
        choices=("ba", "ws"),
        default=[],
        help="Add a synthetic baseline with the node count of the first graph, repeatable.",
    )
    compare.add_argument("--m", type=int, default=2, help="Preferential attachment edges per new node.")
    compare.add_argument("--k", type=int, default=2, help="Small world ring degree (even).")
    compare.add_argument("--p", type=float, default=0.0, help="Small world rewiring probability.")
    compare.add_argument("--dense-limit", type=int, help="Exact dense computation up to this many nodes.")
    compare.add_argument("--probes", type=int, help="Number of stochastic probes above the dense limit.")

    run = subparsers.add_parser("run", parents=[common], help="The full pipeline, from a configuration file.")
    run.add_argument("--input", dest="sessions", metavar="LOG", help="Association session log.")
    run.add_argument("--threshold", type=float, help="Keep the edges with social weight above this value.")
    _add_ingest_options(run)
    _add_temporal_options(run)

    return parser.parse_args(argv)


# subcommand -> the pipeline stages it runs
COMMAND_STAGES = {
    "ingest": ("ingest",),
    "encounters": ("encounters",),
    "graph": ("graph",),
    "static-metrics": ("static",),
    "temporal-metrics": ("temporal",),
}

# parsed options that are not PipelineConfig fields
_NOT_CONFIG = {
    "command",
    "config",
    "log_level",
    "model",
    "nodes",
    "m",
    "k",
    "p",
    "days",
    "rate",
    "mean_duration",
    "aps",
    "baseline",
}


def _config_from_args(args):
    overrides = {key: value for key, value in vars(args).items() if key not in _NOT_CONFIG}
    if args.command in COMMAND_STAGES:
        overrides["stages"] = COMMAND_STAGES[args.command]
    return build_config(args.config, overrides)


def run_synth(args, config):
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    if args.model in ("ba", "ws"):
        spec = SyntheticSpec(args.model, args.nodes, m=args.m, k=args.k, p=args.p, seed=config.seed)
        filename = output_dir / f"synthetic_{args.model}.csv"
        read_save.save_graph(filename, generate(spec))
    elif args.model == "contacts":
        events = poisson_contact_trace(
            args.nodes, args.days, args.rate, args.mean_duration, seed=config.seed
        )
        filename = output_dir / "encounters.csv"
        read_save.save_encounters(filename, events)
    else:
        records = synthetic_session_log(args.nodes, args.aps, args.days, seed=config.seed)
        filename = output_dir / "sessions.csv"
        read_save.save_sessions(filename, records)
    logger.info("Wrote %s", filename)


def run_compare(args, config):
    if not config.graphs:
        raise ConfigError("compare needs at least one --graph")
    graphs = []
    for path in config.graphs:
        graph = read_save.read_graph(path)
        graphs.append(graph.with_label(graph.label or Path(path).stem))
    n_nodes = graphs[0].n_nodes
    for model in args.baseline:
        spec = SyntheticSpec(model, n_nodes, m=args.m, k=args.k, p=args.p, seed=config.seed)
        graphs.append(generate(spec))
    table = compare_networks(
        graphs, config.dense_limit, config.probes, config.seed, threads=config.threads
    )
    filename = Path(config.output_dir) / "comparison.csv"
    read_save.save_table(filename, table, mkdir=True, parents=True)
    logger.info("Wrote %s", filename)


def main(argv=None):
    args = parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _config_from_args(args)
        if args.command == "synth":
            run_synth(args, config)
        elif args.command == "compare":
            run_compare(args, config)
        else:
            manifest = run_pipeline(config)
            logger.info("Wrote %d artifacts to %s", len(manifest.artifacts), config.output_dir)
    except DtnCommError as e:
        logger.error("%s", e)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
