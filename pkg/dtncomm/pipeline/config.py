"""
Pipeline configuration: defaults, overridden by a YAML file, overridden by command line flags.
The YAML keys are the PipelineConfig field names.
"""
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional, Union

import yaml

from dtncomm.errors import ConfigError
from dtncomm.graph.contact_graph import GraphMode
from dtncomm.ingest.records import DEFAULT_COLUMNS
from dtncomm.ingest.smoothing import DEFAULT_FLICKER, DEFAULT_GAP
from dtncomm.metrics.temporal import DEFAULT_GAMMA_FACTOR, TEMPORAL_DENSE_LIMIT
from dtncomm.spectral.kernels import DEFAULT_DENSE_LIMIT
from dtncomm.spectral.lanczos import DEFAULT_PROBES
from dtncomm.utils.durations import parse_duration

STAGES = ("ingest", "encounters", "graph", "static", "temporal")


@dataclass(frozen=True)
class PipelineConfig:
    # inputs, the ones upstream of the first requested stage are required
    sessions: Optional[str] = None
    intervals: Optional[str] = None
    encounters: Optional[str] = None
    graphs: tuple = ()
    output_dir: str = "dtncomm_output"
    stages: tuple = STAGES
    # session log format
    delimiter: str = ","
    columns: tuple = DEFAULT_COLUMNS
    header: Optional[bool] = None
    # ingest and encounters
    gap_seconds: Union[int, str, None] = DEFAULT_GAP
    flicker_seconds: Union[int, str, None] = DEFAULT_FLICKER
    merge_gap_seconds: Union[int, str, None] = 0
    # graphs
    graph_modes: tuple = (GraphMode.UNWEIGHTED.value, GraphMode.WEIGHTED.value)
    threshold: float = 0.0
    observation_span: Union[int, str, None] = None
    # static metrics
    dense_limit: int = DEFAULT_DENSE_LIMIT
    probes: int = DEFAULT_PROBES
    # temporal metrics
    windows: tuple = ("1h", "1d", "1w")
    gamma_factor: float = DEFAULT_GAMMA_FACTOR
    origin: Optional[int] = None
    temporal_dense_limit: int = TEMPORAL_DENSE_LIMIT
    trajectory: bool = False
    node_vectors: bool = False
    # execution
    seed: int = 0
    threads: int = 1

    def as_dict(self):
        """Plain (YAML/JSON serializable) echo of the configuration"""
        echo = asdict(self)
        return {key: list(value) if isinstance(value, tuple) else value for key, value in echo.items()}

    @property
    def window_seconds(self):
        return [parse_duration(w) for w in self.windows]

    @property
    def gap(self):
        return parse_duration(self.gap_seconds)

    @property
    def flicker(self):
        return parse_duration(self.flicker_seconds)

    @property
    def merge_gap(self):
        return parse_duration(self.merge_gap_seconds)

    @property
    def span(self):
        return None if self.observation_span is None else parse_duration(self.observation_span)


_LIST_FIELDS = ("graphs", "stages", "columns", "graph_modes", "windows")
FIELD_NAMES = tuple(f.name for f in fields(PipelineConfig))


def config_from_mapping(mapping, base=None):
    """
    Apply a mapping of field values on top of base (the defaults if None). None values are ignored, so unset command
    line flags leave the lower layers in place.
    """
    base = base or PipelineConfig()
    unknown = sorted(set(mapping) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(
            f"Unknown configuration keys: {unknown}. Valid keys are: {', '.join(FIELD_NAMES)}"
        )
    values = {}
    for key, value in mapping.items():
        if value is None:
            continue
        if key in _LIST_FIELDS:
            value = (value,) if isinstance(value, (str, int)) else tuple(value)
        values[key] = value
    return replace(base, **values)


def load_config(filename):
    """
    Read a YAML configuration file
    :param filename: path of a YAML document holding a mapping of PipelineConfig fields
    :return: PipelineConfig
    """
    try:
        with open(filename) as f:
            mapping = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read the configuration file "{filename}": {e}') from e
    except yaml.YAMLError as e:
        raise ConfigError(f'Invalid YAML in "{filename}": {e}') from e
    if mapping is None:
        mapping = {}
    if not isinstance(mapping, dict):
        raise ConfigError(
            f'The configuration file "{filename}" must hold a mapping, got: {type(mapping).__name__}'
        )
    return config_from_mapping(mapping)


def build_config(config_file=None, overrides=None):
    """defaults < YAML file < overrides"""
    config = load_config(config_file) if config_file is not None else PipelineConfig()
    return config_from_mapping(overrides or {}, base=config)


def validate_config(config):
    """
    Check that a configuration is runnable
    :return: list of violations, each naming the field and the broken constraint, empty iff the config is valid
    """
    violations = []
    stages = set(config.stages)
    unknown_stages = sorted(stages - set(STAGES))
    if unknown_stages:
        violations.append(f"stages: unknown stages {unknown_stages}, valid stages are {list(STAGES)}")
    if not stages:
        violations.append("stages: at least one stage must be requested")

    def require_input(name, produced_by, needed_by):
        if not stages & set(needed_by) or produced_by in stages:
            return
        path = getattr(config, name)
        if path is None:
            violations.append(
                f"{name}: an input path is required when the {produced_by} stage is not run"
            )
        elif not Path(path).is_file():
            violations.append(f'{name}: input path "{path}" does not exist')

    if "ingest" in stages:
        if config.sessions is None:
            violations.append("sessions: an input session log is required by the ingest stage")
        elif not Path(config.sessions).is_file():
            violations.append(f'sessions: input path "{config.sessions}" does not exist')
    require_input("intervals", "ingest", ("encounters",))
    require_input("encounters", "encounters", ("graph", "temporal"))
    if "static" in stages and "graph" not in stages:
        if not config.graphs:
            violations.append("graphs: input graph paths are required when the graph stage is not run")
        for path in config.graphs:
            if not Path(path).is_file():
                violations.append(f'graphs: input path "{path}" does not exist')

    if len(config.delimiter) != 1:
        violations.append(f'delimiter must be a single character, got: "{config.delimiter}"')
    if sorted(config.columns) != sorted(DEFAULT_COLUMNS):
        violations.append(f"columns must be a permutation of {list(DEFAULT_COLUMNS)}")

    for name in ("gap_seconds", "flicker_seconds", "merge_gap_seconds", "observation_span"):
        value = getattr(config, name)
        if value is None:
            continue
        try:
            seconds = parse_duration(value)
        except ConfigError as e:
            violations.append(f"{name}: {e}")
            continue
        if name == "observation_span" and seconds <= 0:
            violations.append("observation_span must be > 0")

    if not config.windows:
        violations.append("windows: at least one snapshot window is required")
    for window in config.windows:
        try:
            if parse_duration(window) <= 0:
                violations.append(f"windows must be positive, got: {window}")
        except ConfigError as e:
            violations.append(f"windows: {e}")

    if not _is_number(config.threshold) or config.threshold < 0:
        violations.append("threshold must be ≥ 0")
    for mode in config.graph_modes:
        if str(mode).lower() not in {m.value for m in GraphMode}:
            violations.append(f'graph_modes: unknown mode "{mode}", use "unweighted" or "weighted"')
    if not config.graph_modes:
        violations.append("graph_modes: at least one graph mode is required")
    if not _is_number(config.gamma_factor) or not 0 < config.gamma_factor < 1:
        violations.append("gamma_factor must lie in (0, 1)")
    if not _is_number(config.threads, integral=True) or config.threads < 1:
        violations.append("threads must be ≥ 1")
    if not _is_number(config.probes, integral=True) or config.probes < 2:
        violations.append("probes must be ≥ 2")
    if not all(
        _is_number(limit, integral=True) and limit >= 0
        for limit in (config.dense_limit, config.temporal_dense_limit)
    ):
        violations.append("dense_limit and temporal_dense_limit must be ≥ 0")
    return violations


def _is_number(value, integral=False):
    if isinstance(value, bool):
        return False
    return isinstance(value, int) if integral else isinstance(value, (int, float))
