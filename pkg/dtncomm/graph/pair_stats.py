import logging
from collections import defaultdict
from dataclasses import dataclass

from dtncomm.errors import DomainError, EncounterOverlapError, NumericalError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairStats:
    """
    Encounter statistics of a node pair (node_a < node_b)
    :param ct_samples: contact durations, one per encounter
    :param ict_samples: inter-contact times between consecutive encounters, one fewer than ct_samples
    :param total_a: encounter count of node_a with all of its partners (N_i)
    :param total_b: encounter count of node_b with all of its partners (N_j)
    """

    node_a: str
    node_b: str
    ct_samples: tuple
    ict_samples: tuple
    total_a: int
    total_b: int

    def __post_init__(self):
        n = len(self.ct_samples)
        if len(self.ict_samples) != max(n - 1, 0):
            raise DomainError(
                f"A pair with {n} encounters has {max(n - 1, 0)} inter-contact times, "
                f"got: {len(self.ict_samples)}"
            )
        if any(ct <= 0 for ct in self.ct_samples):
            raise DomainError(f"Contact durations must be positive: {self.ct_samples}")
        if any(ict < 0 for ict in self.ict_samples):
            raise DomainError(f"Inter-contact times must be nonnegative: {self.ict_samples}")
        if n and (self.total_a < n or self.total_b < n):
            raise DomainError(
                f"Per-node totals ({self.total_a}, {self.total_b}) cannot be smaller than the pair count {n}"
            )

    @property
    def pair(self):
        return self.node_a, self.node_b

    @property
    def n_encounters(self):
        return len(self.ct_samples)

    @property
    def mean_ct(self):
        return sum(self.ct_samples) / self.n_encounters

    def mean_ict(self, observation_span):
        """Average inter-contact time, the observation span when there is a single encounter"""
        if self.n_encounters == 1:
            return observation_span
        return sum(self.ict_samples) / (self.n_encounters - 1)


def pair_statistics(events):
    """
    Per-pair encounter counts, contact durations and inter-contact times
    :param events: iterable of EncounterEvent
    :return: dict pair -> PairStats, pairs in sorted order
    """
    by_pair = defaultdict(list)
    for event in events:
        by_pair[event.pair].append((event.start, event.end))

    node_totals = defaultdict(int)
    for (node_a, node_b), bounds in by_pair.items():
        node_totals[node_a] += len(bounds)
        node_totals[node_b] += len(bounds)

    stats = {}
    for pair in sorted(by_pair):
        bounds = sorted(by_pair[pair])
        ct_samples = tuple(end - start for start, end in bounds)
        ict_samples = tuple(
            bounds[p + 1][0] - bounds[p][1] for p in range(len(bounds) - 1)
        )
        if any(ict < 0 for ict in ict_samples):
            raise EncounterOverlapError(
                f"Overlapping encounters of the pair {pair}: {bounds}. "
                "Encounters of the same pair must be merged before computing statistics."
            )
        node_a, node_b = pair
        stats[pair] = PairStats(
            node_a, node_b, ct_samples, ict_samples, node_totals[node_a], node_totals[node_b]
        )
    logger.info("Pair statistics of %d pairs over %d nodes", len(stats), len(node_totals))
    return stats


def social_weight(stats, observation_span):
    """
    Social tie strength of a pair:
    W_ij = (mean CT / mean ICT) * 2 n_ij / (N_i + N_j)
    with the observation span standing for the mean ICT of a single encounter.
    Evaluated as a single division of exact integer products, e.g. ct=[100, 200], ict=[400], N=(4, 6) -> 0.15
    :param stats: PairStats
    :param observation_span: T, seconds
    """
    n = stats.n_encounters
    if n == 0:
        raise DomainError(f"The pair {stats.pair} has no encounters")
    if observation_span <= 0:
        raise DomainError(f"The observation span must be positive, got: {observation_span}")
    totals = stats.total_a + stats.total_b
    sum_ct = sum(stats.ct_samples)
    if n == 1:
        # (sum_ct / 1) / T * 2 / totals
        return (2 * sum_ct) / (observation_span * totals)
    sum_ict = sum(stats.ict_samples)
    if sum_ict == 0:
        raise NumericalError(
            f"The mean inter-contact time of the pair {stats.pair} is 0 (back-to-back encounters)"
        )
    # (sum_ct / n) / (sum_ict / (n - 1)) * 2 n / totals
    return (2 * (n - 1) * sum_ct) / (sum_ict * totals)
