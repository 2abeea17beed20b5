"""
Stage orchestration: ingest -> encounters -> graph -> static -> temporal.
Each stage writes the file formats of its module, so the output of a stage can be the input of a later invocation.
"""
import logging
import time
from pathlib import Path

import pandas as pd

from dtncomm import __version__
from dtncomm import read_save
from dtncomm.encounter.sweep import extract_encounters, merge_cross_ap_encounters
from dtncomm.errors import ConfigError, DtnCommError, StageError
from dtncomm.graph.contact_graph import (
    GraphMode,
    build_graph,
    degree_distribution,
    distribution_ccdf,
    weight_distribution,
)
from dtncomm.graph.pair_stats import pair_statistics
from dtncomm.ingest.intervals import ReconciliationReport, build_intervals
from dtncomm.ingest.records import SessionFormat, dataset_summary
from dtncomm.ingest.smoothing import SmoothingReport, smooth_ping_pong
from dtncomm.metrics.static import comparison_table, total_communicability
from dtncomm.metrics.temporal import static_temporal_gap, sweep_table, window_results
from dtncomm.pipeline.config import STAGES, validate_config
from dtncomm.pipeline.manifest import MANIFEST_NAME, RunManifest
from dtncomm.utils.concurrency import map_ordered
from dtncomm.utils.durations import format_duration

logger = logging.getLogger(__name__)


class PipelineRun:
    def __init__(self, config):
        self.config = config
        self.output_dir = Path(config.output_dir)
        self.manifest = RunManifest(config=config.as_dict(), version=__version__)
        self.written = []
        self.intervals = None
        self.encounters = None
        self.graphs = {}
        self.static_reports = {}

    def run(self):
        self.output_dir.mkdir(parents=True, exist_ok=True)
        for stage in STAGES:
            if stage not in self.config.stages:
                continue
            logger.info('Running stage "%s"', stage)
            start = time.perf_counter()
            try:
                getattr(self, f"stage_{stage}")()
            except (DtnCommError, OSError, ValueError, ArithmeticError) as e:
                self.remove_outputs()
                raise StageError(stage, e) from e
            self.manifest.wall_clock[stage] = round(time.perf_counter() - start, 6)
        self.manifest.save(self.output_dir / MANIFEST_NAME)
        return self.manifest

    def remove_outputs(self):
        for path in self.written:
            path.unlink(missing_ok=True)
        logger.warning("Removed %d partial outputs from %s", len(self.written), self.output_dir)
        self.written = []

    def output(self, name):
        path = self.output_dir / name
        self.written.append(path)
        return path

    def record(self, path):
        self.manifest.add_artifact(path, self.output_dir)

    def save_table(self, name, table):
        path = self.output(name)
        read_save.save_table(path, table)
        self.record(path)

    def save_json(self, name, data):
        path = self.output(name)
        read_save.save_json(path, data)
        self.record(path)

    # stages

    def stage_ingest(self):
        config = self.config
        self.manifest.add_input(config.sessions)
        fmt = SessionFormat(delimiter=config.delimiter, columns=tuple(config.columns), header=config.header)
        parsed = read_save.read_sessions(config.sessions, fmt=fmt)
        reconciliation = ReconciliationReport()
        intervals = build_intervals(parsed.records, reconciliation)
        smoothing = SmoothingReport()
        self.intervals = smooth_ping_pong(
            intervals, config.gap, config.flicker, smoothing, threads=config.threads
        )

        path = self.output("intervals.csv")
        read_save.save_intervals(path, self.intervals)
        self.record(path)
        summary = dataset_summary(self.intervals)
        self.save_json(
            "ingest_report.json",
            {
                "lines": parsed.line_count,
                "malformed_lines": parsed.malformed_count,
                "header_skipped": parsed.header_skipped,
                "records": len(parsed.records),
                "reconciliation": reconciliation.as_dict(),
                "smoothing": smoothing.as_dict(),
                "nodes": summary.n_nodes,
                "aps": summary.n_aps,
                "first_timestamp": summary.first_timestamp,
                "last_timestamp": summary.last_timestamp,
                "span_days": summary.span_days,
            },
        )
        self.manifest.add_counts(
            "ingest",
            records=len(parsed.records),
            malformed_lines=parsed.malformed_count,
            intervals=len(self.intervals),
        )

    def stage_encounters(self):
        if self.intervals is None:
            self.manifest.add_input(self.config.intervals)
            self.intervals = read_save.read_intervals(self.config.intervals)
        events = extract_encounters(self.intervals, threads=self.config.threads)
        self.encounters = merge_cross_ap_encounters(events, self.config.merge_gap)
        path = self.output("encounters.csv")
        read_save.save_encounters(path, self.encounters)
        self.record(path)
        self.manifest.add_counts("encounters", encounters=len(self.encounters))

    def load_encounters(self):
        if self.encounters is None:
            self.manifest.add_input(self.config.encounters)
            self.encounters = read_save.read_encounters(self.config.encounters)
        return self.encounters

    def observation_span(self):
        """T: the configured span, else the span of the intervals, else the span of the encounters"""
        if self.config.span is not None:
            return self.config.span
        source = self.intervals if self.intervals is not None else self.encounters
        starts = [item.start for item in source]
        ends = [item.end for item in source]
        return max(ends) - min(starts) if starts else 0

    def stage_graph(self):
        config = self.config
        events = self.load_encounters()
        stats = pair_statistics(events)
        span = self.observation_span()
        for mode in config.graph_modes:
            mode = GraphMode.parse(mode)
            graph = build_graph(
                stats,
                mode=mode,
                threshold=config.threshold,
                observation_span=span if span > 0 else None,
                label=mode.value,
            )
            self.graphs[mode.value] = graph
            path = self.output(f"graph_{mode.value}.csv")
            read_save.save_graph(path, graph)
            self.record(path)
            self.written.append(path.with_suffix(".json"))
            self.record(path.with_suffix(".json"))
            self.save_table(f"degree_{mode.value}_ccdf.csv", degree_distribution(graph))
            if mode is GraphMode.WEIGHTED:
                self.save_table("weight_ccdf.csv", weight_distribution(graph))
            self.manifest.add_counts(
                "graph", **{f"{mode.value}_nodes": graph.n_nodes, f"{mode.value}_edges": graph.n_edges}
            )

    def stage_static(self):
        config = self.config
        if not self.graphs:
            modes = {GraphMode.parse(mode) for mode in config.graph_modes}
            for path in config.graphs:
                self.manifest.add_input(path)
                graph = read_save.read_graph(path)
                if graph.mode not in modes:
                    logger.info("Skipping the %s graph %s", graph.mode.value, path)
                    continue
                label = graph.label or Path(path).stem
                if label in self.graphs:
                    raise ConfigError(f'Two input graphs share the label "{label}"')
                self.graphs[label] = graph.with_label(label)
            if not self.graphs:
                raise ConfigError(
                    f"None of the input graphs has one of the modes: {sorted(m.value for m in modes)}"
                )
        labels = list(self.graphs)
        reports = map_ordered(
            lambda label: total_communicability(
                self.graphs[label], config.dense_limit, config.probes, config.seed
            ),
            labels,
            config.threads,
        )
        self.save_table("static_comparison.csv", comparison_table(reports))
        for label, report in zip(labels, reports):
            self.static_reports[label] = report
            graph = self.graphs[label]
            self.save_table(f"static_nodes_{label}.csv", report.node_table(graph.unweighted_degree))
            self.save_table(
                f"subgraph_centrality_{label}_ccdf.csv",
                distribution_ccdf(report.centrality.values, "subgraph_centrality"),
            )
            self.save_table(
                f"communicability_{label}_ccdf.csv",
                distribution_ccdf(report.row_sums, "communicability"),
            )
        self.manifest.add_counts("static", graphs=len(reports))

    def stage_temporal(self):
        config = self.config
        events = self.load_encounters()
        results = window_results(
            events,
            config.window_seconds,
            origin=config.origin,
            span=config.span,
            factor=config.gamma_factor,
            dense_limit=config.temporal_dense_limit,
            trajectory=config.trajectory,
            threads=config.threads,
        )
        sweep = sweep_table(results)
        self.save_table("temporal_sweep.csv", sweep)
        for result in results:
            name = format_duration(result.window)
            nodes = result.node_table()
            if config.node_vectors:
                self.save_table(f"temporal_nodes_{name}.csv", nodes)
            self.save_table(f"broadcast_{name}_ccdf.csv", distribution_ccdf(nodes["broadcast"], "broadcast"))
            self.save_table(f"receive_{name}_ccdf.csv", distribution_ccdf(nodes["receive"], "receive"))
            if config.trajectory and result.result is not None:
                trajectory = result.result.trajectory
                self.save_table(
                    f"temporal_trajectory_{name}.csv",
                    pd.DataFrame({"snapshot": range(1, len(trajectory) + 1), "C_t": trajectory}),
                )
        unweighted = self.static_reports.get(GraphMode.UNWEIGHTED.value)
        if unweighted is not None:
            self.save_table("static_temporal_gap.csv", static_temporal_gap(unweighted, sweep))
        self.manifest.add_counts("temporal", windows=len(results))


def run_pipeline(config):
    """
    Run the requested stages of a configuration in dependency order
    :param config: PipelineConfig
    :return: RunManifest, also saved as manifest.json in the output directory
    """
    violations = validate_config(config)
    if violations:
        raise ConfigError("Invalid configuration:\n  " + "\n  ".join(violations))
    return PipelineRun(config).run()
