from dtncomm.pipeline.config import (
    STAGES,
    PipelineConfig,
    build_config,
    config_from_mapping,
    load_config,
    validate_config,
)
from dtncomm.pipeline.manifest import MANIFEST_NAME, RunManifest
from dtncomm.pipeline.runner import PipelineRun, run_pipeline
