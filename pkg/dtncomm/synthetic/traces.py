"""
Synthetic encounter traces and association logs, used to exercise the temporal measures and the whole pipeline
without proprietary data.
"""
import logging

import numpy as np

from dtncomm.encounter.events import EncounterEvent
from dtncomm.encounter.sweep import merge_overlapping_pair_events
from dtncomm.errors import DomainError
from dtncomm.ingest.intervals import intervals_to_records
from dtncomm.ingest.records import AssociationInterval

logger = logging.getLogger(__name__)

DAY = 86_400


def _padded(prefix, count):
    width = len(str(max(count - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


def poisson_contact_trace(
    n_nodes,
    days,
    contacts_per_node_per_day=5.0,
    mean_duration=600.0,
    seed=0,
    n_pois=50,
    origin=0,
):
    """
    Random encounter trace: contacts arrive as a Poisson process, each between a uniform pair of distinct nodes at a
    uniform PoI, lasting an exponential duration (at least one second, clipped to the observation span).
    Overlapping contacts of the same pair are merged.
    :param n_nodes: number of nodes, >= 2
    :param days: length of the trace in days
    :param contacts_per_node_per_day: mean number of contacts a node takes part in per day
    :param mean_duration: mean contact duration in seconds
    :param seed: seed of the generator
    :param n_pois: number of points of interest
    :param origin: timestamp of the trace start
    :return: list of EncounterEvent sorted by (start, node_a, node_b, poi, end)
    """
    if n_nodes < 2:
        raise DomainError(f"A contact trace needs at least 2 nodes, got: {n_nodes}")
    if days <= 0 or contacts_per_node_per_day < 0 or mean_duration <= 0 or n_pois < 1:
        raise DomainError(
            "days, mean_duration and n_pois must be positive and contacts_per_node_per_day nonnegative, got: "
            f"days={days}, mean_duration={mean_duration}, n_pois={n_pois}, "
            f"contacts_per_node_per_day={contacts_per_node_per_day}"
        )
    rng = np.random.default_rng(seed)
    span = int(round(days * DAY))
    # every contact involves two nodes
    count = rng.poisson(n_nodes * days * contacts_per_node_per_day / 2)
    starts = rng.integers(0, span, size=count)
    durations = np.maximum(1, np.rint(rng.exponential(mean_duration, size=count))).astype(np.int64)
    ends = np.minimum(starts + durations, span)
    first = rng.integers(0, n_nodes, size=count)
    second = (first + rng.integers(1, n_nodes, size=count)) % n_nodes
    pois = rng.integers(0, n_pois, size=count)

    node_ids = _padded("n", n_nodes)
    poi_ids = _padded("poi", n_pois)
    events = [
        EncounterEvent.between(
            node_ids[a], node_ids[b], poi_ids[p], origin + int(s), origin + int(e)
        )
        for a, b, p, s, e in zip(first, second, pois, starts, ends)
    ]
    events = merge_overlapping_pair_events(events)
    logger.info(
        "Generated a Poisson contact trace: %d nodes, %d days, %d contacts (%d after merging)",
        n_nodes,
        days,
        count,
        len(events),
    )
    return events


def synthetic_intervals(
    n_nodes,
    n_aps,
    days,
    sessions_per_node_per_day=8.0,
    mean_session=1800.0,
    home_probability=0.6,
    seed=0,
    origin=0,
):
    """
    Random association intervals: each node alternates exponential idle gaps and exponential sessions, returning to
    its home AP with probability home_probability and visiting a uniform AP otherwise.
    :return: list of AssociationInterval sorted by (node, start, end, ap)
    """
    if n_nodes < 1 or n_aps < 1 or days <= 0 or mean_session <= 0 or sessions_per_node_per_day <= 0:
        raise DomainError(
            "n_nodes, n_aps, days, sessions_per_node_per_day and mean_session must be positive"
        )
    if not 0 <= home_probability <= 1:
        raise DomainError(f"home_probability must lie in [0, 1], got: {home_probability}")
    rng = np.random.default_rng(seed)
    span = int(round(days * DAY))
    mean_gap = max(DAY / sessions_per_node_per_day - mean_session, 1.0)
    node_ids = _padded("node", n_nodes)
    ap_ids = _padded("ap", n_aps)

    intervals = []
    for node_id in node_ids:
        home = int(rng.integers(n_aps))
        t = int(rng.integers(0, max(int(mean_gap), 1)))
        while t < span:
            duration = max(1, int(round(rng.exponential(mean_session))))
            end = min(t + duration, span)
            ap = home if rng.random() < home_probability else int(rng.integers(n_aps))
            if end > t:
                intervals.append(AssociationInterval(node_id, ap_ids[ap], origin + t, origin + end))
            t = end + max(1, int(round(rng.exponential(mean_gap))))
    intervals.sort(key=AssociationInterval.sort_key)
    return intervals


def synthetic_session_log(n_nodes, n_aps, days, seed=0, origin=0, **kwargs):
    """
    Random association log of Start/Stop records (see synthetic_intervals for the model and keyword arguments)
    :return: list of SessionRecord in log order
    """
    intervals = synthetic_intervals(n_nodes, n_aps, days, seed=seed, origin=origin, **kwargs)
    records = intervals_to_records(intervals)
    logger.info(
        "Generated a session log: %d nodes, %d APs, %d records", n_nodes, n_aps, len(records)
    )
    return records
