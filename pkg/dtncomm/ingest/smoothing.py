"""
Ping-pong smoothing of association intervals.

Two rules, applied per node until nothing changes:
(a) intervals of the node at the same AP separated by less than `gap` seconds are merged
(b) an interval shorter than `flicker` seconds at AP_b is absorbed when it is
    - covered by a longer interval of the node at another AP, or
    - sandwiched between two intervals at the same AP_a, both surrounding gaps shorter than `gap`;
      the two AP_a intervals are merged
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, asdict

from dtncomm.errors import DomainError
from dtncomm.ingest.records import AssociationInterval
from dtncomm.utils.concurrency import map_ordered

logger = logging.getLogger(__name__)

DEFAULT_GAP = 60
DEFAULT_FLICKER = 30


@dataclass
class SmoothingReport:
    same_ap_merges: int = 0
    flickers_absorbed: int = 0
    passes: int = 0

    def as_dict(self):
        return asdict(self)


def smooth_ping_pong(
    intervals, gap=DEFAULT_GAP, flicker=DEFAULT_FLICKER, report=None, threads=1
):
    """
    Remove ping-pong artifacts from association intervals
    :param intervals: iterable of AssociationInterval
    :param gap: seconds, same-AP intervals closer than this are merged
    :param flicker: seconds, shorter intervals at another AP are absorbed (0 disables rule (b))
    :param report: optional SmoothingReport, updated in-place
    :param threads: number of worker threads, nodes are smoothed independently
    :return: list of AssociationInterval sorted by (node_id, start, end, ap_id)
    """
    if gap < 0 or flicker < 0:
        raise DomainError(
            f"The smoothing gap and flicker must be nonnegative, got: gap={gap}, flicker={flicker}"
        )
    by_node = defaultdict(list)
    for interval in intervals:
        by_node[interval.node_id].append((interval.start, interval.end, interval.ap_id))
    nodes = sorted(by_node)

    def smooth(node_id):
        return _smooth_node(by_node[node_id], gap, flicker)

    results = map_ordered(smooth, nodes, threads)

    if report is None:
        report = SmoothingReport()
    smoothed = []
    for node_id, (timeline, merges, absorbed, passes) in zip(nodes, results):
        report.same_ap_merges += merges
        report.flickers_absorbed += absorbed
        report.passes = max(report.passes, passes)
        smoothed.extend(AssociationInterval(node_id, ap, s, e) for s, e, ap in timeline)
    smoothed.sort(key=AssociationInterval.sort_key)
    logger.info("Smoothing (gap=%ds, flicker=%ds): %s", gap, flicker, report)
    return smoothed


def _smooth_node(timeline, gap, flicker):
    """Smooth the (start, end, ap) timeline of a single node to a fixed point"""
    merges = absorbed = passes = 0
    while True:
        passes += 1
        timeline, n_merged = _merge_same_ap(timeline, gap)
        timeline, n_absorbed = _absorb_flickers(timeline, gap, flicker)
        merges += n_merged
        absorbed += n_absorbed
        if not (n_merged or n_absorbed):
            return timeline, merges, absorbed, passes


def _merge_same_ap(timeline, gap):
    by_ap = defaultdict(list)
    for s, e, ap in timeline:
        by_ap[ap].append((s, e))
    merged = []
    n_merged = 0
    for ap, bounds in by_ap.items():
        bounds.sort()
        cur_s, cur_e = bounds[0]
        for s, e in bounds[1:]:
            if s - cur_e < gap:
                cur_e = max(cur_e, e)
                n_merged += 1
            else:
                merged.append((cur_s, cur_e, ap))
                cur_s, cur_e = s, e
        merged.append((cur_s, cur_e, ap))
    merged.sort()
    return merged, n_merged


def _is_covered(timeline, i):
    # strictly longer cover: identical intervals at different APs are both kept
    s, e, ap = timeline[i]
    return any(
        j != i and ap_j != ap and s_j <= s and e_j >= e and e_j - s_j > e - s
        for j, (s_j, e_j, ap_j) in enumerate(timeline)
    )


def _absorb_flickers(timeline, gap, flicker):
    if flicker <= 0:
        return timeline, 0
    out = []
    n_absorbed = 0
    i = 0
    while i < len(timeline):
        s, e, ap = timeline[i]
        if e - s < flicker:
            if _is_covered(timeline, i):
                n_absorbed += 1
                i += 1
                continue
            if out and i + 1 < len(timeline):
                prev_s, prev_e, prev_ap = out[-1]
                next_s, next_e, next_ap = timeline[i + 1]
                if (
                    prev_ap == next_ap != ap
                    and s - prev_e < gap
                    and next_s - e < gap
                ):
                    out[-1] = (prev_s, max(prev_e, next_e), prev_ap)
                    n_absorbed += 1
                    i += 2
                    continue
        out.append(timeline[i])
        i += 1
    return out, n_absorbed
