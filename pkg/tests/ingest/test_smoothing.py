import pytest

from dtncomm.encounter import extract_encounters
from dtncomm.errors import DomainError
from dtncomm.ingest import AssociationInterval, SmoothingReport, smooth_ping_pong
from dtncomm.synthetic.traces import synthetic_intervals


def timeline(*items, node="N1"):
    return [AssociationInterval(node, ap, s, e) for s, e, ap in items]


def bounds(intervals):
    return [(i.start, i.end, i.ap_id) for i in intervals]


def test_same_ap_gap_is_merged():
    smoothed = smooth_ping_pong(timeline((0, 100, "AP1"), (130, 300, "AP1")), gap=60)
    assert bounds(smoothed) == [(0, 300, "AP1")]


def test_distant_same_ap_intervals_are_kept():
    intervals = timeline((0, 100, "AP1"), (200, 300, "AP1"))
    assert smooth_ping_pong(intervals, gap=60) == intervals


def test_flicker_is_absorbed():
    report = SmoothingReport()
    intervals = timeline((0, 100, "AP1"), (110, 120, "AP2"), (130, 300, "AP1"))
    smoothed = smooth_ping_pong(intervals, gap=60, flicker=30, report=report)
    assert bounds(smoothed) == [(0, 300, "AP1")]
    assert report.same_ap_merges == 1
    assert report.flickers_absorbed == 1


def test_sandwiched_flicker_merges_the_neighbours():
    # the AP1 intervals are too far apart for rule (a) but both gaps around the flicker are short
    intervals = timeline((0, 100, "AP1"), (140, 160, "AP2"), (200, 300, "AP1"))
    smoothed = smooth_ping_pong(intervals, gap=60, flicker=30)
    assert bounds(smoothed) == [(0, 300, "AP1")]


def test_long_visit_is_not_a_flicker():
    intervals = timeline((0, 100, "AP1"), (140, 190, "AP2"), (200, 300, "AP1"))
    smoothed = smooth_ping_pong(intervals, gap=60, flicker=30)
    assert bounds(smoothed) == [(0, 100, "AP1"), (140, 190, "AP2"), (200, 300, "AP1")]


def test_covered_flicker_is_absorbed():
    intervals = timeline((0, 300, "AP1"), (100, 110, "AP2"))
    assert bounds(smooth_ping_pong(intervals, gap=60, flicker=30)) == [(0, 300, "AP1")]


def test_identical_short_intervals_at_two_aps_are_kept():
    intervals = timeline((0, 20, "AP1"), (0, 20, "AP2")) + timeline((0, 20, "AP1"), node="N2")
    smoothed = smooth_ping_pong(intervals, gap=60, flicker=30)
    assert smoothed == sorted(intervals, key=AssociationInterval.sort_key)
    events = extract_encounters(smoothed)
    assert [(e.node_a, e.node_b, e.poi_id, e.start, e.end) for e in events] == [("N1", "N2", "AP1", 0, 20)]


def test_zero_flicker_disables_absorption():
    intervals = timeline((0, 100, "AP1"), (140, 160, "AP2"), (200, 300, "AP1"))
    assert smooth_ping_pong(intervals, gap=60, flicker=0) == intervals


def test_nodes_are_independent():
    intervals = timeline((0, 100, "AP1"), node="N1") + timeline((130, 300, "AP1"), node="N2")
    assert smooth_ping_pong(intervals, gap=60) == intervals


@pytest.mark.parametrize("gap, flicker", [(-1, 30), (60, -1)])
def test_negative_parameters(gap, flicker):
    with pytest.raises(DomainError):
        smooth_ping_pong([], gap=gap, flicker=flicker)


@pytest.mark.parametrize("seed", range(5))
def test_idempotent(seed):
    intervals = synthetic_intervals(30, 3, 2, sessions_per_node_per_day=40, mean_session=120, seed=seed)
    once = smooth_ping_pong(intervals, gap=60, flicker=30)
    assert smooth_ping_pong(once, gap=60, flicker=30) == once


@pytest.mark.parametrize("seed", range(3))
def test_same_ap_intervals_disjoint_and_separated(seed):
    intervals = synthetic_intervals(30, 3, 2, sessions_per_node_per_day=40, mean_session=120, seed=seed)
    smoothed = smooth_ping_pong(intervals, gap=60, flicker=30)
    by_key = {}
    for interval in smoothed:
        by_key.setdefault((interval.node_id, interval.ap_id), []).append(interval)
    for items in by_key.values():
        for first, second in zip(items, items[1:]):
            assert second.start - first.end >= 60


def test_thread_count_does_not_change_the_result():
    intervals = synthetic_intervals(40, 4, 1, sessions_per_node_per_day=40, mean_session=120, seed=7)
    assert smooth_ping_pong(intervals, threads=1) == smooth_ping_pong(intervals, threads=8)
