"""
Static communicability measures: subgraph centrality, pairwise communicability and total network communicability,
all read off exp(M) where M is D^{-1/2} A D^{-1/2} for weighted graphs and A for unweighted ones.
Graphs up to `dense_limit` nodes are handled with a dense spectral decomposition, larger ones matrix-free
(Lanczos for exp(M) 1, Hutchinson probes for the diagonal).
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from dtncomm.errors import DomainError
from dtncomm.graph.contact_graph import GraphMode
from dtncomm.spectral.kernels import (
    DEFAULT_DENSE_LIMIT,
    matrix_exponential,
    normalized_adjacency,
)
from dtncomm.spectral.lanczos import DEFAULT_PROBES, hutchinson_diagonal, lanczos_exp_action
from dtncomm.utils.concurrency import map_ordered

logger = logging.getLogger(__name__)

DENSE = "dense"
MATRIX_FREE = "matrix-free"


@dataclass(frozen=True)
class CentralityVector:
    values: np.ndarray
    mode: GraphMode
    node_ids: tuple
    standard_error: Optional[np.ndarray] = None
    method: str = DENSE

    @property
    def mean(self):
        return float(np.mean(self.values)) if self.values.size else float("nan")

    def as_series(self):
        return pd.Series(self.values, index=list(self.node_ids), name="subgraph_centrality")


@dataclass(frozen=True)
class CommunicabilityReport:
    label: Optional[str]
    mode: GraphMode
    n_nodes: int
    n_edges: int
    total: float
    off_diagonal_total: float
    row_sums: np.ndarray
    centrality: CentralityVector
    method: str = DENSE

    @property
    def per_node(self):
        return self.total / self.n_nodes

    @property
    def per_edge(self):
        return self.total / self.n_edges if self.n_edges else float("nan")

    @property
    def subgraph_centrality_per_node(self):
        return self.centrality.mean

    def as_dict(self):
        summary = {
            "label": self.label,
            "mode": self.mode.value,
            "method": self.method,
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "total_communicability": self.total,
            "off_diagonal_communicability": self.off_diagonal_total,
            "communicability_per_node": self.per_node,
            "communicability_per_edge": self.per_edge,
            "subgraph_centrality_per_node": self.subgraph_centrality_per_node,
        }
        if self.centrality.standard_error is not None:
            summary["subgraph_centrality_standard_error"] = float(
                np.mean(self.centrality.standard_error)
            )
        return summary

    def node_table(self, degree):
        """Per-node values behind the distribution plots"""
        table = pd.DataFrame(
            {
                "node_id": list(self.centrality.node_ids),
                "degree": degree,
                "subgraph_centrality": self.centrality.values,
                "communicability": self.row_sums,
            }
        )
        if self.centrality.standard_error is not None:
            table["subgraph_centrality_se"] = self.centrality.standard_error
        return table


def exponent_matrix(graph):
    """The matrix M whose exponential defines the measures of the graph's mode"""
    isolated = graph.isolated_nodes()
    if isolated:
        raise DomainError(
            f"The graph has {len(isolated)} isolated nodes, e.g.: {isolated[:5]}. "
            "Communicability measures are defined on graphs without isolated nodes."
        )
    if graph.n_nodes == 0:
        raise DomainError("Communicability measures need a graph with at least one edge")
    if graph.mode is GraphMode.WEIGHTED:
        return normalized_adjacency(graph)
    return graph.adjacency()


def _uses_dense(graph, dense_limit):
    return graph.n_nodes <= dense_limit


def exponential_of(graph):
    """Dense exp(M) as a numpy array"""
    return matrix_exponential(exponent_matrix(graph)).to_dense()


def subgraph_centrality(
    graph, dense_limit=DEFAULT_DENSE_LIMIT, probes=DEFAULT_PROBES, seed=0
):
    """
    S_i = [exp(M)]_ii for every node
    :param graph: ContactGraph without isolated nodes
    :param dense_limit: exact dense computation up to this number of nodes
    :param probes: number of Hutchinson probes above dense_limit
    :param seed: probe seed
    :return: CentralityVector
    """
    if _uses_dense(graph, dense_limit):
        values = np.diag(exponential_of(graph)).copy()
        return CentralityVector(values, graph.mode, graph.node_index.ids)
    estimate = hutchinson_diagonal(exponent_matrix(graph), probes=probes, seed=seed)
    logger.warning(
        "Subgraph centrality of %d nodes estimated with %d probes (mean standard error %.3g)",
        graph.n_nodes,
        probes,
        estimate.mean_standard_error,
    )
    return CentralityVector(
        estimate.values,
        graph.mode,
        graph.node_index.ids,
        standard_error=estimate.standard_error,
        method=MATRIX_FREE,
    )


def communicability_pair(graph, node_i, node_j, dense_limit=DEFAULT_DENSE_LIMIT):
    """
    C(i, j) = [exp(M)]_ij for two distinct nodes
    :param node_i: node id
    :param node_j: node id
    """
    if node_i == node_j:
        raise DomainError(
            f'Communicability is defined between distinct nodes, got "{node_i}" twice. '
            "Use subgraph_centrality for the diagonal."
        )
    i, j = graph.node_index[node_i], graph.node_index[node_j]
    if _uses_dense(graph, dense_limit):
        return float(exponential_of(graph)[i, j])
    e_j = np.zeros(graph.n_nodes)
    e_j[j] = 1.0
    return float(lanczos_exp_action(exponent_matrix(graph), e_j).vector[i])


def total_communicability(
    graph, dense_limit=DEFAULT_DENSE_LIMIT, probes=DEFAULT_PROBES, seed=0
):
    """
    Total network communicability C(A) = sum_ij [exp(M)]_ij (diagonal included), its per-node and per-edge
    normalizations, the per-node row sums and the normalized total subgraph centrality
    :param graph: ContactGraph without isolated nodes
    :return: CommunicabilityReport
    """
    if _uses_dense(graph, dense_limit):
        exp_m = exponential_of(graph)
        row_sums = exp_m.sum(axis=1)
        total = float(row_sums.sum())
        centrality = CentralityVector(np.diag(exp_m).copy(), graph.mode, graph.node_index.ids)
        method = DENSE
    else:
        matrix = exponent_matrix(graph)
        result = lanczos_exp_action(matrix, np.ones(graph.n_nodes))
        row_sums = result.vector
        total = result.quadrature
        logger.info(
            "Total communicability by Lanczos quadrature after %d iterations", result.iterations
        )
        centrality = subgraph_centrality(graph, dense_limit, probes, seed)
        method = MATRIX_FREE
    return CommunicabilityReport(
        label=graph.label,
        mode=graph.mode,
        n_nodes=graph.n_nodes,
        n_edges=graph.n_edges,
        total=total,
        off_diagonal_total=total - float(np.sum(centrality.values)),
        row_sums=row_sums,
        centrality=centrality,
        method=method,
    )


COMPARISON_COLUMNS = [
    "label",
    "mode",
    "n_nodes",
    "n_edges",
    "communicability_per_node",
    "communicability_per_edge",
    "subgraph_centrality_per_node",
    "total_communicability",
    "off_diagonal_communicability",
]


def compare_networks(
    graphs, dense_limit=DEFAULT_DENSE_LIMIT, probes=DEFAULT_PROBES, seed=0, threads=1
):
    """
    Comparison table of normalized communicability measures, one row per graph in the given order
    :param graphs: iterable of labeled ContactGraph, or a mapping label -> ContactGraph
    :return: pandas.DataFrame with COMPARISON_COLUMNS
    """
    if hasattr(graphs, "items"):
        graphs = [graph.with_label(label) for label, graph in graphs.items()]
    graphs = list(graphs)
    labels = [graph.label for graph in graphs]
    if any(label is None for label in labels):
        raise DomainError("Every compared graph needs a label")
    if len(set(labels)) != len(labels):
        raise DomainError(f"Graph labels must be unique, got: {labels}")

    reports = map_ordered(
        lambda graph: total_communicability(graph, dense_limit, probes, seed), graphs, threads
    )
    return comparison_table(reports)


def comparison_table(reports):
    """One COMPARISON_COLUMNS row per CommunicabilityReport, in the given order"""
    rows = [{key: report.as_dict()[key] for key in COMPARISON_COLUMNS} for report in reports]
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)
