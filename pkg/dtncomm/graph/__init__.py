from dtncomm.graph.pair_stats import PairStats, pair_statistics, social_weight
from dtncomm.graph.contact_graph import (
    ContactGraph,
    GraphMode,
    build_graph,
    degree_distribution,
    distribution_ccdf,
    weight_distribution,
)
