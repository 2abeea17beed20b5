import json

import pandas as pd
import pytest

from dtncomm import read_save
from dtncomm.errors import ConfigError, NumericalError, StageError
from dtncomm.pipeline import MANIFEST_NAME, PipelineConfig, RunManifest, run_pipeline
from dtncomm.pipeline import runner

FULL_RUN_FILES = {
    "intervals.csv",
    "ingest_report.json",
    "encounters.csv",
    "graph_unweighted.csv",
    "graph_unweighted.json",
    "graph_weighted.csv",
    "graph_weighted.json",
    "degree_unweighted_ccdf.csv",
    "degree_weighted_ccdf.csv",
    "weight_ccdf.csv",
    "static_comparison.csv",
    "static_nodes_unweighted.csv",
    "static_nodes_weighted.csv",
    "subgraph_centrality_unweighted_ccdf.csv",
    "subgraph_centrality_weighted_ccdf.csv",
    "communicability_unweighted_ccdf.csv",
    "communicability_weighted_ccdf.csv",
    "temporal_sweep.csv",
    "broadcast_1h_ccdf.csv",
    "receive_1h_ccdf.csv",
    "broadcast_1d_ccdf.csv",
    "receive_1d_ccdf.csv",
    "static_temporal_gap.csv",
}


def full_config(session_log, output_dir, **kwargs):
    return PipelineConfig(
        sessions=str(session_log), output_dir=str(output_dir), windows=("1h", "1d"), **kwargs
    )


@pytest.fixture(scope="module")
def full_run(session_log, tmp_path_factory):
    output_dir = tmp_path_factory.mktemp("full")
    manifest = run_pipeline(full_config(session_log, output_dir))
    return output_dir, manifest


def test_full_run_outputs(full_run):
    output_dir, manifest = full_run
    assert set(manifest.artifacts) == FULL_RUN_FILES
    assert {p.name for p in output_dir.iterdir()} == FULL_RUN_FILES | {MANIFEST_NAME}
    assert list(manifest.wall_clock) == ["ingest", "encounters", "graph", "static", "temporal"]
    assert manifest.counts["ingest"]["intervals"] > 0
    assert manifest.counts["encounters"]["encounters"] > 0

    saved = RunManifest.load(output_dir / MANIFEST_NAME)
    assert saved.artifacts == manifest.artifacts
    assert saved.config["windows"] == ["1h", "1d"]


def test_full_run_tables(full_run):
    output_dir, _ = full_run
    comparison = pd.read_csv(output_dir / "static_comparison.csv")
    assert list(comparison["label"]) == ["unweighted", "weighted"]
    assert (comparison["communicability_per_node"] > 0).all()

    sweep = pd.read_csv(output_dir / "temporal_sweep.csv")
    assert list(sweep["window"]) == [3600, 86400]
    assert (sweep["C_t_per_node"] >= 1).all()

    graph = read_save.read_graph(output_dir / "graph_weighted.csv")
    assert graph.observation_span > 0
    report = json.loads((output_dir / "ingest_report.json").read_text())
    assert report["malformed_lines"] == 0
    assert report["nodes"] == 30


def test_threads_do_not_change_the_outputs(full_run, session_log, tmp_path):
    _, manifest = full_run
    threaded = run_pipeline(full_config(session_log, tmp_path, threads=8))
    assert threaded.artifacts == manifest.artifacts


def test_stage_subset(session_log, tmp_path):
    manifest = run_pipeline(full_config(session_log, tmp_path, stages=("ingest",)))
    assert set(manifest.artifacts) == {"intervals.csv", "ingest_report.json"}
    assert list(manifest.wall_clock) == ["ingest"]


def test_stages_compose(full_run, session_log, tmp_path):
    output_dir, _ = full_run
    first = tmp_path / "first"
    second = tmp_path / "second"
    span = "2d"
    whole = run_pipeline(
        full_config(
            session_log,
            tmp_path / "whole",
            observation_span=span,
            stages=("ingest", "encounters", "graph", "static"),
        )
    )
    run_pipeline(full_config(session_log, first, stages=("ingest", "encounters")))
    split = run_pipeline(
        PipelineConfig(
            encounters=str(first / "encounters.csv"),
            output_dir=str(second),
            stages=("graph", "static"),
            observation_span=span,
        )
    )
    for name in ("graph_weighted.csv", "static_comparison.csv", "static_nodes_weighted.csv"):
        assert split.artifacts[name] == whole.artifacts[name]

    # static metrics of previously written graphs
    third = run_pipeline(
        PipelineConfig(
            graphs=(str(output_dir / "graph_unweighted.csv"),),
            output_dir=str(tmp_path / "third"),
            stages=("static",),
        )
    )
    full_table = pd.read_csv(output_dir / "static_comparison.csv")
    table = pd.read_csv(tmp_path / "third" / "static_comparison.csv")
    assert list(table["label"]) == ["unweighted"]
    assert table.loc[0, "total_communicability"] == full_table.loc[0, "total_communicability"]


def test_optional_temporal_outputs(full_run, tmp_path):
    output_dir, _ = full_run
    manifest = run_pipeline(
        PipelineConfig(
            encounters=str(output_dir / "encounters.csv"),
            output_dir=str(tmp_path),
            stages=("temporal",),
            windows=("6h",),
            trajectory=True,
            node_vectors=True,
        )
    )
    assert {"temporal_nodes_6h.csv", "temporal_trajectory_6h.csv"} <= set(manifest.artifacts)
    assert "static_temporal_gap.csv" not in manifest.artifacts
    trajectory = pd.read_csv(tmp_path / "temporal_trajectory_6h.csv")
    sweep = pd.read_csv(tmp_path / "temporal_sweep.csv")
    assert trajectory["C_t"].iloc[-1] == pytest.approx(sweep.loc[0, "C_t"], rel=1e-12)
    assert len(trajectory) == sweep.loc[0, "M"]


def test_invalid_config_is_rejected_before_running(tmp_path):
    with pytest.raises(ConfigError, match="threshold must be"):
        run_pipeline(PipelineConfig(sessions=None, output_dir=str(tmp_path / "out"), threshold=-1))
    assert not (tmp_path / "out").exists()


def test_failed_stage_removes_partial_outputs(full_run, tmp_path, monkeypatch):
    output_dir, _ = full_run

    def failing(*args, **kwargs):
        raise NumericalError("solver breakdown")

    monkeypatch.setattr(runner, "window_results", failing)
    config = PipelineConfig(
        encounters=str(output_dir / "encounters.csv"),
        output_dir=str(tmp_path),
        stages=("graph", "temporal"),
    )
    with pytest.raises(StageError) as info:
        run_pipeline(config)
    assert info.value.stage == "temporal"
    assert info.value.exit_code == 4
    assert list(tmp_path.iterdir()) == []
