from dtncomm.metrics.static import (
    COMPARISON_COLUMNS,
    CentralityVector,
    CommunicabilityReport,
    communicability_pair,
    compare_networks,
    comparison_table,
    exponent_matrix,
    exponential_of,
    subgraph_centrality,
    total_communicability,
)
from dtncomm.metrics.temporal import (
    SWEEP_COLUMNS,
    SnapshotSequence,
    TemporalCommunicability,
    TemporalTotals,
    WindowResult,
    dynamic_communicability,
    katz_gamma,
    snapshot_count,
    snapshot_sequence,
    static_temporal_gap,
    sweep_table,
    total_temporal_communicability,
    window_results,
    window_sweep,
)
