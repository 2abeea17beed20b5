__version__ = "0.1.0"

from dtncomm.encounter import EncounterEvent, extract_encounters, merge_cross_ap_encounters
from dtncomm.graph import ContactGraph, GraphMode, build_graph, pair_statistics, social_weight
from dtncomm.ingest import build_intervals, smooth_ping_pong
from dtncomm.metrics import (
    compare_networks,
    dynamic_communicability,
    katz_gamma,
    snapshot_sequence,
    subgraph_centrality,
    total_communicability,
    total_temporal_communicability,
    window_sweep,
)
from dtncomm.read_save import (
    read_encounters,
    read_graph,
    read_intervals,
    read_sessions,
    save_encounters,
    save_graph,
    save_intervals,
    save_json,
    save_sessions,
    save_table,
)
from dtncomm import encounter, graph, ingest, metrics, spectral, synthetic, utils

__all__ = [
    "read_sessions",
    "save_sessions",
    "read_intervals",
    "save_intervals",
    "read_encounters",
    "save_encounters",
    "read_graph",
    "save_graph",
    "save_table",
    "save_json",
    "build_intervals",
    "smooth_ping_pong",
    "EncounterEvent",
    "extract_encounters",
    "merge_cross_ap_encounters",
    "ContactGraph",
    "GraphMode",
    "build_graph",
    "pair_statistics",
    "social_weight",
    "subgraph_centrality",
    "total_communicability",
    "compare_networks",
    "snapshot_sequence",
    "katz_gamma",
    "dynamic_communicability",
    "total_temporal_communicability",
    "window_sweep",
    "__version__",
]
