"""
Encounter extraction: two nodes are in an encounter while they are associated to the same AP over an overlapping
time interval. A sweep-line over the interval endpoints of every AP emits one event per overlap.
"""
import logging
from collections import defaultdict
from itertools import combinations

from dtncomm.encounter.events import EncounterEvent
from dtncomm.errors import DomainError
from dtncomm.utils.concurrency import map_ordered

logger = logging.getLogger(__name__)

# at equal timestamps ends are swept before starts: touching intervals do not overlap
_END, _START = 0, 1


def extract_encounters(intervals, threads=1):
    """
    Extract the encounter events of smoothed association intervals
    :param intervals: iterable of AssociationInterval, disjoint per (node, ap)
    :param threads: number of worker threads, APs are swept independently
    :return: list of EncounterEvent sorted by (start, node_a, node_b, poi_id)
    """
    by_ap = _group_by_ap(intervals)
    aps = sorted(by_ap)
    per_ap = map_ordered(lambda ap: _sweep_ap(ap, by_ap[ap]), aps, threads)
    events = [event for ap_events in per_ap for event in ap_events]
    n_raw = len(events)
    events = merge_overlapping_pair_events(events)
    logger.info(
        "Extracted %d encounters at %d APs (%d before merging simultaneous encounters)",
        len(events),
        len(aps),
        n_raw,
    )
    return events


def brute_force_encounters(intervals):
    """Reference O(P^2)-per-AP extractor, same output as extract_encounters"""
    events = []
    for ap, items in _group_by_ap(intervals).items():
        for (node_1, s1, e1), (node_2, s2, e2) in combinations(items, 2):
            start, end = max(s1, s2), min(e1, e2)
            if node_1 != node_2 and start < end:
                events.append(EncounterEvent.between(node_1, node_2, ap, start, end))
    return merge_overlapping_pair_events(events)


def _group_by_ap(intervals):
    by_ap = defaultdict(list)
    for interval in intervals:
        by_ap[interval.ap_id].append((interval.node_id, interval.start, interval.end))
    return by_ap


def _sweep_ap(ap_id, items):
    endpoints = []
    for node_id, start, end in items:
        endpoints.append((start, _START, node_id, start, end))
        endpoints.append((end, _END, node_id, start, end))
    endpoints.sort()

    active = {}
    events = []
    for _, kind, node_id, start, end in endpoints:
        key = (node_id, start, end)
        if kind == _END:
            active.pop(key, None)
            continue
        for other_id, other_end in active.values():
            if other_id != node_id:
                events.append(
                    EncounterEvent.between(
                        node_id, other_id, ap_id, start, min(end, other_end)
                    )
                )
        active[key] = (node_id, end)
    return events


def merge_overlapping_pair_events(events):
    """
    Merge encounters of the same pair that overlap or touch in time (at different APs): the pair was in contact
    without interruption. The merged event keeps the earliest start, the latest end and the PoI of the longest
    constituent. Consecutive encounters of a pair are then separated by a positive inter-contact time.
    """
    return _merge_pair_runs(events, lambda cur_end, start: start <= cur_end)


def merge_cross_ap_encounters(events, gap=0):
    """
    Merge consecutive encounters of the same pair separated by less than `gap` seconds, keeping the PoI of the
    longest constituent. gap=0 disables the pass.
    """
    if gap < 0:
        raise DomainError(f"The merge gap must be nonnegative, got: {gap}")
    if gap == 0:
        return sorted(events, key=EncounterEvent.sort_key)
    return _merge_pair_runs(events, lambda cur_end, start: start - cur_end < gap)


def _merge_pair_runs(events, should_merge):
    by_pair = defaultdict(list)
    for event in events:
        by_pair[event.pair].append(event)

    merged = []
    for (node_a, node_b), pair_events in by_pair.items():
        pair_events.sort(key=lambda ev: (ev.start, ev.end, ev.poi_id))
        first = pair_events[0]
        start, end, longest = first.start, first.end, first
        for event in pair_events[1:]:
            if should_merge(end, event.start):
                end = max(end, event.end)
                if event.duration > longest.duration:
                    longest = event
            else:
                merged.append(EncounterEvent(node_a, node_b, longest.poi_id, start, end))
                start, end, longest = event.start, event.end, event
        merged.append(EncounterEvent(node_a, node_b, longest.poi_id, start, end))
    merged.sort(key=EncounterEvent.sort_key)
    return merged
