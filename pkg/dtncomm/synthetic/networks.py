"""
Synthetic baseline networks: Barabasi-Albert preferential attachment and Watts-Strogatz small world.
Node ids are zero-padded decimal strings so that their sorted order is the construction order.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import networkx as nx
import numpy as np

from dtncomm.errors import DomainError
from dtncomm.graph.contact_graph import ContactGraph, GraphMode
from dtncomm.utils.concurrency import map_ordered
from dtncomm.utils.node_index import NodeIndex

logger = logging.getLogger(__name__)


class SyntheticModel(str, Enum):
    PREFERENTIAL_ATTACHMENT = "ba"
    SMALL_WORLD = "ws"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {
            "ba": cls.PREFERENTIAL_ATTACHMENT,
            "barabasi-albert": cls.PREFERENTIAL_ATTACHMENT,
            "preferential-attachment": cls.PREFERENTIAL_ATTACHMENT,
            "ws": cls.SMALL_WORLD,
            "watts-strogatz": cls.SMALL_WORLD,
            "small-world": cls.SMALL_WORLD,
        }
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise DomainError(
                f'Unknown synthetic model: "{value}", use one of: {sorted(aliases)}'
            ) from None


@dataclass(frozen=True)
class SyntheticSpec:
    model: SyntheticModel
    n_nodes: int
    m: int = 2
    k: int = 2
    p: float = 0.0
    seed: Optional[int] = 0

    def __post_init__(self):
        object.__setattr__(self, "model", SyntheticModel.parse(self.model))
        self.validate()

    def validate(self):
        if self.model is SyntheticModel.PREFERENTIAL_ATTACHMENT:
            if not (isinstance(self.m, (int, np.integer)) and 1 <= self.m < self.n_nodes):
                raise DomainError(
                    f"Preferential attachment needs n_nodes > m >= 1, got: n_nodes={self.n_nodes}, m={self.m}"
                )
        else:
            if not (isinstance(self.k, (int, np.integer)) and 2 <= self.k < self.n_nodes):
                raise DomainError(
                    f"A small world needs n_nodes > k >= 2, got: n_nodes={self.n_nodes}, k={self.k}"
                )
            if self.k % 2:
                raise DomainError(f"The small world ring degree k must be even, got: {self.k}")
            if not 0 <= self.p <= 1:
                raise DomainError(f"The rewiring probability must lie in [0, 1], got: {self.p}")

    @property
    def nx_seed(self):
        return None if self.seed is None else int(self.seed)

    @property
    def label(self):
        if self.model is SyntheticModel.PREFERENTIAL_ATTACHMENT:
            return f"BA(n={self.n_nodes}, m={self.m})"
        return f"WS(n={self.n_nodes}, k={self.k}, p={self.p:g})"


def synthetic_node_ids(n_nodes):
    width = len(str(max(n_nodes - 1, 0)))
    return [f"{i:0{width}d}" for i in range(n_nodes)]


def _graph_from_networkx(g, label):
    n_nodes = g.number_of_nodes()
    pairs = np.array(sorted((min(u, v), max(u, v)) for u, v in g.edges()), dtype=np.int64).reshape(-1, 2)
    graph = ContactGraph(
        NodeIndex(synthetic_node_ids(n_nodes)),
        pairs[:, 0],
        pairs[:, 1],
        np.ones(len(pairs)),
        mode=GraphMode.UNWEIGHTED,
        label=label,
    )
    logger.info("Generated %r", graph)
    return graph


def barabasi_albert(spec):
    """
    Preferential attachment graph
    Starts from a clique on m + 1 nodes, every arriving node then links to m distinct existing nodes with
    probability proportional to their degree.
    :param spec: SyntheticSpec of the preferential attachment model
    :return: unweighted ContactGraph with m (m + 1) / 2 + m (n - m - 1) edges
    """
    if spec.model is not SyntheticModel.PREFERENTIAL_ATTACHMENT:
        raise DomainError(f"Expected a preferential attachment spec, got: {spec.model.value}")
    n, m = spec.n_nodes, int(spec.m)
    clique = nx.complete_graph(m + 1)
    if n == m + 1:
        g = clique
    else:
        g = nx.barabasi_albert_graph(n, m, seed=spec.nx_seed, initial_graph=clique)
    return _graph_from_networkx(g, spec.label)


def watts_strogatz(spec):
    """
    Small world graph: a ring lattice where each node links to its k / 2 nearest neighbours on either side, then
    every lattice edge is rewired with probability p to a uniformly chosen node that is not yet a neighbour.
    :param spec: SyntheticSpec of the small world model
    :return: unweighted ContactGraph with n k / 2 edges
    """
    if spec.model is not SyntheticModel.SMALL_WORLD:
        raise DomainError(f"Expected a small world spec, got: {spec.model.value}")
    g = nx.watts_strogatz_graph(spec.n_nodes, int(spec.k), spec.p, seed=spec.nx_seed)
    return _graph_from_networkx(g, spec.label)


def generate(spec):
    """Graph of a SyntheticSpec, dispatched on its model"""
    if spec.model is SyntheticModel.PREFERENTIAL_ATTACHMENT:
        return barabasi_albert(spec)
    return watts_strogatz(spec)


def generate_many(specs, threads=1):
    """Several synthetic graphs, generated concurrently, returned in the order of specs"""
    return map_ordered(generate, specs, threads)
