from dtncomm.ingest.records import (
    AssociationInterval,
    DatasetSummary,
    ParsedLog,
    SessionFormat,
    SessionRecord,
    SessionStatus,
    dataset_summary,
)
from dtncomm.ingest.intervals import (
    ReconciliationReport,
    build_intervals,
    intervals_to_records,
)
from dtncomm.ingest.smoothing import SmoothingReport, smooth_ping_pong
