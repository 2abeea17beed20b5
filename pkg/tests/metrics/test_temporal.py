import logging

import numpy as np
import pytest

from dtncomm.encounter import EncounterEvent
from dtncomm.errors import DomainError
from dtncomm.metrics import (
    SWEEP_COLUMNS,
    SnapshotSequence,
    dynamic_communicability,
    katz_gamma,
    snapshot_count,
    snapshot_sequence,
    static_temporal_gap,
    total_temporal_communicability,
    window_results,
    window_sweep,
)
from dtncomm.spectral import SymmetricMatrix
from dtncomm.synthetic import poisson_contact_trace
from dtncomm.utils.node_index import NodeIndex

HOUR, DAY, WEEK = 3600, 86400, 7 * 86400


def random_sequence(rng, n, m):
    snapshots = []
    for _ in range(m):
        upper = np.triu(rng.random((n, n)) < 0.3, k=1).astype(float)
        snapshots.append(SymmetricMatrix.from_dense(upper))
    if all(s.is_zero for s in snapshots):
        snapshots[0] = SymmetricMatrix.from_upper_entries(n, [0], [1], [1.0])
    ids = [f"v{i}" for i in range(n)]
    return SnapshotSequence(1, 0, m - 1, NodeIndex(ids), snapshots)


def test_snapshot_count():
    assert snapshot_count(100, 1000) == 1
    assert snapshot_count(100, 10) == 11
    assert snapshot_count(0, 10) == 1
    with pytest.raises(DomainError):
        snapshot_count(100, 0)
    with pytest.raises(DomainError):
        snapshot_count(-1, 10)


def test_snapshot_membership():
    events = [
        EncounterEvent("a", "b", "p", 0, 50),
        EncounterEvent("a", "c", "p", 40, 60),
        EncounterEvent("b", "c", "p", 100, 101),
    ]
    sequence = snapshot_sequence(events, 50, origin=0, span=149)
    assert sequence.count == 3
    assert sequence.node_index.ids == ("a", "b", "c")
    dense = [s.to_dense() for s in sequence.snapshots]
    assert dense[0][0, 1] == 1 and dense[0][0, 2] == 1
    assert dense[1][0, 1] == 0 and dense[1][0, 2] == 1
    assert dense[2][1, 2] == 1 and dense[2].sum() == 2
    assert sequence.window_bounds(2) == (100, 150)


def test_events_beyond_the_span_are_clipped(caplog):
    events = [EncounterEvent("a", "b", "p", 0, 500)]
    with caplog.at_level(logging.WARNING):
        sequence = snapshot_sequence(events, 100, origin=0, span=250)
    assert sequence.count == 3
    assert all(not s.is_zero for s in sequence.snapshots)
    assert "clipped" in caplog.text


def test_single_edge_single_snapshot():
    events = [EncounterEvent("a", "b", "p", 0, 100)]
    sequence = snapshot_sequence(events, 1000, origin=0, span=100)
    assert sequence.count == 1
    gamma = katz_gamma(sequence, 0.85)
    assert gamma == pytest.approx(0.85, rel=1e-8)
    result = dynamic_communicability(sequence, 0.85)
    totals = total_temporal_communicability(result)
    assert totals.total == pytest.approx(2 / 0.15, rel=1e-12)
    assert totals.per_node == pytest.approx(1 / 0.15, rel=1e-12)
    assert totals.average == pytest.approx(2 / 0.15, rel=1e-12)


def test_gamma_validation():
    sequence = snapshot_sequence([EncounterEvent("a", "b", "p", 0, 100)], 10, origin=0, span=100)
    assert sequence.count == 11
    with pytest.raises(DomainError):
        katz_gamma(sequence, 1.0)
    with pytest.raises(DomainError):
        katz_gamma(sequence, 0.0)
    with pytest.raises(DomainError):
        dynamic_communicability(sequence, 1.0)
    empty = snapshot_sequence([], 10, origin=0, span=30, nodes=["a", "b"])
    with pytest.raises(DomainError, match="empty"):
        katz_gamma(empty)


def test_matches_the_product_of_dense_inverses():
    rng = np.random.default_rng(17)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(1, 6))
        sequence = random_sequence(rng, n, m)
        gamma = katz_gamma(sequence, 0.85)
        expected = np.eye(n)
        for snapshot in sequence.snapshots:
            expected = expected @ np.linalg.inv(np.eye(n) - gamma * snapshot.to_dense())
        result = dynamic_communicability(sequence, gamma)
        np.testing.assert_allclose(result.matrix, expected, rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(result.broadcast, expected.sum(axis=1), rtol=1e-10)
        np.testing.assert_allclose(result.receive, expected.sum(axis=0), rtol=1e-10)


def test_empty_snapshots_leave_the_product_unchanged():
    rng = np.random.default_rng(2)
    sequence = random_sequence(rng, 6, 4)
    gamma = katz_gamma(sequence)
    snapshots = list(sequence.snapshots)
    padded = sequence.with_snapshots(
        [SymmetricMatrix.zeros(6)] + snapshots[:2] + [SymmetricMatrix.zeros(6)] * 3 + snapshots[2:]
    )
    assert padded.count == 8
    before = dynamic_communicability(sequence, gamma)
    after = dynamic_communicability(padded, gamma)
    np.testing.assert_array_equal(after.matrix, before.matrix)
    assert after.average == before.total / 8


def test_matrix_free_agrees_with_dense():
    events = poisson_contact_trace(80, 3, 6, seed=4)
    sequence = snapshot_sequence(events, DAY // 2)
    gamma = katz_gamma(sequence)
    dense = dynamic_communicability(sequence, gamma, trajectory=True)
    for threads in (1, 2):
        matrix_free = dynamic_communicability(
            sequence, gamma, dense_limit=0, trajectory=True, threads=threads
        )
        assert matrix_free.method == "matrix-free"
        assert matrix_free.matrix is None
        np.testing.assert_allclose(matrix_free.broadcast, dense.broadcast, rtol=1e-7)
        np.testing.assert_allclose(matrix_free.receive, dense.receive, rtol=1e-7)
        assert matrix_free.total == pytest.approx(dense.total, rel=1e-8)
        np.testing.assert_allclose(matrix_free.trajectory, dense.trajectory, rtol=1e-7)


def test_trajectory_and_totals():
    events = poisson_contact_trace(40, 2, 8, seed=9)
    sequence = snapshot_sequence(events, 4 * HOUR)
    result = dynamic_communicability(sequence, katz_gamma(sequence), trajectory=True)
    assert result.trajectory.shape == (sequence.count,)
    assert result.trajectory[-1] == pytest.approx(result.total, rel=1e-14)
    assert np.all(np.diff(result.trajectory) >= -1e-9 * result.trajectory[1:])
    assert result.total >= sequence.n_nodes
    assert result.broadcast.sum() == pytest.approx(result.receive.sum(), rel=1e-12)
    assert np.all(result.matrix >= -1e-12)


def test_all_empty_window():
    nodes = [f"n{i}" for i in range(5)]
    (only,) = window_results([], [10], origin=0, span=30, nodes=nodes)
    assert only.result is None
    window, m, gamma, total, per_node, average = only.row()
    assert (window, m, total, per_node, average) == (10, 4, 5.0, 1.0, 1.25)
    assert np.isnan(gamma)
    table = only.node_table()
    assert list(table["broadcast"]) == [1.0] * 5


def test_coarser_windows_lower_the_temporal_communicability():
    events = poisson_contact_trace(200, 30, 5, seed=0)
    sweep = window_sweep(events, [HOUR, DAY, WEEK], origin=0, span=30 * DAY, threads=3)
    assert list(sweep.columns) == SWEEP_COLUMNS
    assert list(sweep["M"]) == [721, 31, 5]
    totals = list(sweep["C_t"])
    assert totals[0] > totals[1] > totals[2]
    np.testing.assert_allclose(sweep["C_ave"], sweep["C_t"] / sweep["M"])


def test_window_sweep_is_deterministic_across_threads():
    events = poisson_contact_trace(30, 4, 6, seed=12)
    windows = [HOUR, 6 * HOUR, DAY]
    sequential = window_sweep(events, windows, threads=1)
    concurrent = window_sweep(events, windows, threads=3)
    np.testing.assert_array_equal(sequential.to_numpy(), concurrent.to_numpy())


def test_static_temporal_gap():
    events = poisson_contact_trace(30, 2, 6, seed=3)
    sweep = window_sweep(events, [HOUR, DAY])
    gap = static_temporal_gap(4.0, sweep)
    assert list(gap.columns) == ["window", "temporal_per_node", "static_per_node", "ratio"]
    np.testing.assert_allclose(gap["ratio"], sweep["C_t_per_node"] / 4.0)


def test_window_results_need_a_window():
    with pytest.raises(DomainError):
        window_results([], [])


@pytest.mark.slow
def test_large_sparse_sequence():
    events = poisson_contact_trace(15000, 2, 3, seed=1)
    results = window_results(events, [DAY], dense_limit=2000, threads=2)
    result = results[0].result
    assert result.method == "matrix-free"
    assert result.total >= 15000
    assert result.broadcast.sum() == pytest.approx(result.receive.sum(), rel=1e-8)


def two_step_path(order):
    # 3 nodes, one edge per snapshot
    edges = {"ab": ([0], [1], [1.0]), "bc": ([1], [2], [1.0])}
    snapshots = [SymmetricMatrix.from_upper_entries(3, *edges[key]) for key in order]
    return SnapshotSequence(1, 0, len(order) - 1, NodeIndex(["a", "b", "c"]), snapshots)


def test_snapshot_order_matters():
    gamma = 0.5
    forward = dynamic_communicability(two_step_path(["ab", "bc"]), gamma).matrix
    backward = dynamic_communicability(two_step_path(["bc", "ab"]), gamma).matrix
    step = gamma / (1 - gamma**2)
    assert forward[0, 2] == pytest.approx(step**2, rel=1e-12)
    assert forward[0, 2] == pytest.approx(4 / 9, rel=1e-12)
    assert backward[0, 2] == pytest.approx(0, abs=1e-14)
    assert forward[2, 0] == pytest.approx(0, abs=1e-14)
    assert backward[2, 0] == pytest.approx(4 / 9, rel=1e-12)


def test_communicability_grows_with_gamma():
    rng = np.random.default_rng(23)
    for _ in range(10):
        sequence = random_sequence(rng, int(rng.integers(3, 9)), int(rng.integers(1, 5)))
        matrices = [
            dynamic_communicability(sequence, katz_gamma(sequence, factor)).matrix
            for factor in (0.1, 0.4, 0.7, 0.95)
        ]
        for smaller, larger in zip(matrices, matrices[1:]):
            assert np.all(larger >= smaller - 1e-12)


def test_matrix_free_broadcast_and_receive_totals_agree(caplog):
    events = poisson_contact_trace(60, 3, 4, seed=21)
    sequence = snapshot_sequence(events, DAY // 4)
    gamma = katz_gamma(sequence)
    with caplog.at_level(logging.WARNING):
        result = dynamic_communicability(sequence, gamma, dense_limit=0)
    assert result.method == "matrix-free"
    assert result.broadcast.sum() == pytest.approx(result.receive.sum(), rel=1e-8)
    assert "disagree" not in caplog.text
    dense = dynamic_communicability(sequence, gamma)
    assert result.broadcast.sum() == pytest.approx(dense.matrix.sum(), rel=1e-8)
