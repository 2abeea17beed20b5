import logging
from enum import Enum

import numpy as np
import pandas as pd

from dtncomm.errors import DomainError
from dtncomm.graph.pair_stats import social_weight
from dtncomm.spectral.symmetric import SymmetricMatrix
from dtncomm.utils.node_index import NodeIndex

logger = logging.getLogger(__name__)


class GraphMode(str, Enum):
    UNWEIGHTED = "unweighted"
    WEIGHTED = "weighted"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(
                f'The graph mode must be "unweighted" or "weighted", got: "{value}"'
            ) from None


class ContactGraph:
    def __init__(
        self,
        node_index,
        rows,
        cols,
        weights,
        mode=GraphMode.WEIGHTED,
        threshold=0.0,
        observation_span=None,
        label=None,
    ):
        """
        Undirected contact graph without self-loops over dense node indices
        :param node_index: NodeIndex of the graph's nodes
        :param rows: edge endpoints with rows < cols (upper triangle)
        :param cols: the other endpoints
        :param weights: positive edge weights, all 1 in unweighted mode
        :param mode: GraphMode, unweighted (adjacency) or weighted (social weights)
        :param threshold: the weight threshold the graph was built with
        :param observation_span: T, seconds, None for synthetic graphs
        :param label: optional name used in comparison tables
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        weights = np.asarray(weights, dtype=float)
        self.mode = GraphMode.parse(mode)
        if not (rows.shape == cols.shape == weights.shape):
            raise DomainError("Edge rows, columns and weights must have the same length")
        if np.any(rows == cols):
            raise DomainError("Self-loops are not allowed in a contact graph")
        if np.any(rows > cols):
            raise DomainError("Edges must be given with row < col")
        if np.any(~np.isfinite(weights)) or np.any(weights <= 0):
            raise DomainError("Edge weights must be positive and finite")
        if self.mode is GraphMode.UNWEIGHTED and np.any(weights != 1):
            raise DomainError("Every edge weight of an unweighted graph must be 1")
        n = len(node_index)
        if rows.size and (cols.max() >= n or rows.min() < 0):
            raise DomainError(f"Edge endpoints out of the node index range [0, {n})")
        order = np.lexsort((cols, rows))
        rows, cols, weights = rows[order], cols[order], weights[order]
        if rows.size > 1 and np.any((np.diff(rows) == 0) & (np.diff(cols) == 0)):
            raise DomainError("Parallel edges are not allowed in a contact graph")

        self.node_index = node_index
        self._rows, self._cols, self._weights = rows, cols, weights
        self.threshold = threshold
        self.observation_span = observation_span
        self.label = label
        self._degree = None

    @classmethod
    def from_edges(cls, edges, mode=GraphMode.WEIGHTED, node_ids=None, **kwargs):
        """
        :param edges: iterable of (node_id, node_id, weight)
        :param node_ids: optional node universe, by default the edge endpoints
        """
        edges = list(edges)
        if node_ids is None:
            node_ids = {n for a, b, _ in edges for n in (a, b)}
        node_index = NodeIndex(node_ids)
        rows, cols, weights = [], [], []
        for a, b, w in edges:
            i, j = node_index[a], node_index[b]
            if i > j:
                i, j = j, i
            rows.append(i)
            cols.append(j)
            weights.append(w)
        return cls(node_index, rows, cols, weights, mode=mode, **kwargs)

    def __repr__(self):
        label = f", label={self.label!r}" if self.label is not None else ""
        return (
            f"ContactGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges}, "
            f"mode={self.mode.value}{label})"
        )

    @property
    def n_nodes(self):
        return len(self.node_index)

    @property
    def n_edges(self):
        return int(self._rows.size)

    @property
    def degree(self):
        """d_i = sum_k a_ik (weighted degree in weighted mode)"""
        if self._degree is None:
            n = self.n_nodes
            self._degree = np.bincount(
                self._rows, weights=self._weights, minlength=n
            ) + np.bincount(self._cols, weights=self._weights, minlength=n)
        return self._degree

    @property
    def unweighted_degree(self):
        """Number of distinct neighbors"""
        n = self.n_nodes
        return np.bincount(self._rows, minlength=n) + np.bincount(self._cols, minlength=n)

    @property
    def weights(self):
        return self._weights.copy()

    def upper_entries(self):
        return self._rows.copy(), self._cols.copy(), self._weights.copy()

    def edges(self):
        """Iterate (node_a, node_b, weight) in index order"""
        ids = self.node_index.ids
        for i, j, w in zip(self._rows, self._cols, self._weights):
            yield ids[i], ids[j], float(w)

    def adjacency(self):
        """Sparse symmetric adjacency (weighted in weighted mode)"""
        return SymmetricMatrix.from_upper_entries(
            self.n_nodes, self._rows, self._cols, self._weights
        )

    def isolated_nodes(self):
        return [self.node_index.node_id(i) for i in np.flatnonzero(self.unweighted_degree == 0)]

    def with_label(self, label):
        return ContactGraph(
            self.node_index,
            self._rows,
            self._cols,
            self._weights,
            mode=self.mode,
            threshold=self.threshold,
            observation_span=self.observation_span,
            label=label,
        )

    def scaled(self, factor):
        """Same graph with every weight multiplied by factor (weighted mode only)"""
        if self.mode is not GraphMode.WEIGHTED:
            raise DomainError("Only weighted graphs can be rescaled")
        if factor <= 0:
            raise DomainError(f"The scale factor must be positive, got: {factor}")
        return ContactGraph(
            self.node_index,
            self._rows,
            self._cols,
            self._weights * factor,
            mode=self.mode,
            threshold=self.threshold,
            observation_span=self.observation_span,
            label=self.label,
        )

    def header(self):
        """Metadata stored next to the edge list"""
        return {
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "mode": self.mode.value,
            "threshold": self.threshold,
            "observation_span": self.observation_span,
            "label": self.label,
            "node_ids": list(self.node_index.ids),
        }


def build_graph(stats, mode=GraphMode.WEIGHTED, threshold=0.0, observation_span=None, label=None):
    """
    Build a static contact graph from pair statistics
    Unweighted: an edge of weight 1 for every encountered pair (with W_ij > threshold when threshold > 0)
    Weighted: an edge of weight W_ij for every pair with W_ij > threshold
    Nodes left without edges are not part of the graph.
    :param stats: dict pair -> PairStats
    :param mode: GraphMode or its string value
    :param threshold: theta >= 0
    :param observation_span: T in seconds, needed for the social weights
    """
    mode = GraphMode.parse(mode)
    if threshold < 0:
        raise DomainError(f"The weight threshold must be >= 0, got: {threshold}")
    needs_weights = mode is GraphMode.WEIGHTED or threshold > 0
    if needs_weights and (observation_span is None or observation_span <= 0):
        raise DomainError(
            "A positive observation span is needed to compute social weights, "
            f"got: {observation_span}"
        )

    edges = []
    for (node_a, node_b), pair in sorted(stats.items()):
        if pair.n_encounters < 1:
            continue
        weight = social_weight(pair, observation_span) if needs_weights else 1.0
        if threshold > 0 and not weight > threshold:
            continue
        edges.append((node_a, node_b, weight if mode is GraphMode.WEIGHTED else 1.0))
    graph = ContactGraph.from_edges(
        edges,
        mode=mode,
        threshold=threshold,
        observation_span=observation_span,
        label=label,
    )
    logger.info(
        "Built %s graph: %d nodes, %d edges (threshold=%g)",
        mode.value,
        graph.n_nodes,
        graph.n_edges,
        threshold,
    )
    return graph


def distribution_ccdf(values, name="value"):
    """
    Exact empirical CCDF: for every distinct value v, the fraction of samples >= v
    :return: pandas.DataFrame with columns [name, 'count', 'ccdf'] sorted by value
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return pd.DataFrame({name: [], "count": [], "ccdf": []})
    distinct, counts = np.unique(values, return_counts=True)
    at_least = counts[::-1].cumsum()[::-1]
    return pd.DataFrame({name: distinct, "count": counts, "ccdf": at_least / values.size})


def degree_distribution(graph):
    """Histogram of the number of distinct neighbors with its CCDF: columns [degree, count, ccdf]"""
    table = distribution_ccdf(graph.unweighted_degree, name="degree")
    table["degree"] = table["degree"].astype(np.int64)
    table["count"] = table["count"].astype(np.int64)
    return table


def weight_distribution(graph):
    """Empirical CCDF of the social weights: columns [weight, count, ccdf]"""
    if graph.mode is not GraphMode.WEIGHTED:
        raise DomainError("The weight distribution is defined for weighted graphs only")
    return distribution_ccdf(graph.weights, name="weight")
