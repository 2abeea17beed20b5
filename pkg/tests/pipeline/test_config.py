import pytest

from dtncomm.errors import ConfigError
from dtncomm.pipeline import PipelineConfig, build_config, config_from_mapping, validate_config


def test_defaults_need_a_session_log():
    assert validate_config(PipelineConfig()) == [
        "sessions: an input session log is required by the ingest stage"
    ]


def test_valid_config(session_log):
    assert validate_config(PipelineConfig(sessions=str(session_log))) == []


def test_violations(tmp_path):
    config = PipelineConfig(
        sessions=str(tmp_path / "missing.csv"),
        threshold=-1,
        gamma_factor=1.0,
        threads=0,
        windows=("1h", "0s", "1x"),
        stages=("ingest", "reports"),
        delimiter=";;",
    )
    violations = validate_config(config)
    assert "threshold must be ≥ 0" in violations
    assert f'sessions: input path "{tmp_path / "missing.csv"}" does not exist' in violations
    assert "gamma_factor must lie in (0, 1)" in violations
    assert "threads must be ≥ 1" in violations
    assert "windows must be positive, got: 0s" in violations
    assert any(v.startswith("windows: Unknown duration unit") for v in violations)
    assert any(v.startswith("stages: unknown stages ['reports']") for v in violations)
    assert any(v.startswith("delimiter") for v in violations)


def test_stage_inputs(tmp_path):
    violations = validate_config(PipelineConfig(stages=("graph", "static")))
    assert violations == ["encounters: an input path is required when the encounters stage is not run"]

    violations = validate_config(PipelineConfig(stages=("static",)))
    assert violations == ["graphs: input graph paths are required when the graph stage is not run"]

    encounters = tmp_path / "encounters.csv"
    encounters.write_text("")
    assert validate_config(PipelineConfig(stages=("temporal",), encounters=str(encounters))) == []


def test_yaml_layers(tmp_path):
    config_file = tmp_path / "config.yaml"
    config_file.write_text("threads: 4\nwindows: [1h, 6h]\nthreshold: 0.001\ngraph_modes: weighted\n")
    config = build_config(config_file, {"threads": 2, "windows": None, "seed": 7})
    assert config.threads == 2
    assert config.windows == ("1h", "6h")
    assert config.window_seconds == [3600, 21600]
    assert config.threshold == 0.001
    assert config.graph_modes == ("weighted",)
    assert config.seed == 7
    assert build_config().threads == 1


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="Unknown configuration keys"):
        config_from_mapping({"thread": 2})
    invalid = tmp_path / "invalid.yaml"
    invalid.write_text("threads: [4\n")
    with pytest.raises(ConfigError, match="Invalid YAML"):
        build_config(invalid)
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError, match="mapping"):
        build_config(listing)
    with pytest.raises(ConfigError, match="Cannot read"):
        build_config(tmp_path / "missing.yaml")


def test_durations_in_config():
    config = PipelineConfig(gap_seconds="1m", flicker_seconds=30, observation_span="2d")
    assert (config.gap, config.flicker, config.span) == (60, 30, 172800)
    assert PipelineConfig().span is None
    assert PipelineConfig().as_dict()["windows"] == ["1h", "1d", "1w"]
