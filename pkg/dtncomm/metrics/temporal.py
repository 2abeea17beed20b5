"""
Temporal communicability of snapshot sequences.
The dynamic communicability matrix is the ordered product of Katz resolvents
C^M = (I - gamma A[1])^-1 (I - gamma A[2])^-1 ... (I - gamma A[M])^-1
with gamma = factor / max_k rho(A[k]). Empty snapshots are identity factors: messages wait at nodes.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from dtncomm.errors import DomainError
from dtncomm.spectral.kernels import Resolvent, spectral_radius
from dtncomm.spectral.symmetric import SymmetricMatrix
from dtncomm.utils.concurrency import map_ordered
from dtncomm.utils.node_index import NodeIndex

logger = logging.getLogger(__name__)

DEFAULT_GAMMA_FACTOR = 0.85
TEMPORAL_DENSE_LIMIT = 2000


class SnapshotSequence:
    def __init__(self, window, origin, span, node_index, snapshots):
        """
        Ordered sequence of unweighted snapshot graphs over a fixed node universe
        :param window: snapshot length in seconds
        :param origin: start time of the first snapshot
        :param span: observation span T in seconds
        :param node_index: NodeIndex shared by every snapshot
        :param snapshots: list of M sparse SymmetricMatrix, snapshot k covers [origin + k window, origin + (k+1) window)
        """
        expected = snapshot_count(span, window)
        if len(snapshots) != expected:
            raise DomainError(
                f"A span of {span}s with {window}s windows has {expected} snapshots, got: {len(snapshots)}"
            )
        self.window = window
        self.origin = origin
        self.span = span
        self.node_index = node_index
        self.snapshots = snapshots
        self._radii = None

    def __repr__(self):
        return (
            f"SnapshotSequence(window={self.window}, count={self.count}, n_nodes={self.n_nodes}, "
            f"nonempty={self.nonempty_count})"
        )

    def __len__(self):
        return len(self.snapshots)

    @property
    def count(self):
        return len(self.snapshots)

    @property
    def n_nodes(self):
        return len(self.node_index)

    @property
    def nonempty_count(self):
        return sum(not snapshot.is_zero for snapshot in self.snapshots)

    def window_bounds(self, k):
        """[start, end) of snapshot k (0-based)"""
        start = self.origin + k * self.window
        return start, start + self.window

    def spectral_radii(self, threads=1, method="power"):
        """Spectral radius of every snapshot, cached"""
        if self._radii is None:
            self._radii = np.array(
                map_ordered(lambda s: spectral_radius(s, method=method), self.snapshots, threads)
            )
        return self._radii

    def with_snapshots(self, snapshots, span=None):
        """Same node universe and window, other snapshots (span adjusted to their count by default)"""
        if span is None:
            span = (len(snapshots) - 1) * self.window
        return SnapshotSequence(self.window, self.origin, span, self.node_index, snapshots)


def snapshot_count(span, window):
    """M = floor(T / dt) + 1"""
    if window <= 0:
        raise DomainError(f"The snapshot window must be positive, got: {window}")
    if span < 0:
        raise DomainError(f"The observation span must be nonnegative, got: {span}")
    return int(span // window) + 1


def snapshot_sequence(events, window, origin=None, span=None, nodes=None):
    """
    Aggregate encounters into snapshots of fixed length
    An edge (i, j) is in snapshot k when an encounter of the pair intersects the window of the snapshot.
    :param events: iterable of EncounterEvent
    :param window: dt in seconds
    :param origin: t_1, by default the first encounter start
    :param span: T, by default from origin to the last encounter end
    :param nodes: optional node universe, by default every node appearing in an encounter
    :return: SnapshotSequence
    """
    events = list(events)
    if window <= 0:
        raise DomainError(f"The snapshot window must be positive, got: {window}")
    if origin is None:
        origin = min((ev.start for ev in events), default=0)
    if span is None:
        span = max((ev.end for ev in events), default=origin) - origin
    if nodes is None:
        nodes = {n for ev in events for n in ev.pair}
    node_index = NodeIndex(nodes)
    count = snapshot_count(span, window)
    if window > span:
        logger.warning(
            "The window (%ds) is longer than the observation span (%ds): a single aggregated snapshot",
            window,
            span,
        )

    edges = [set() for _ in range(count)]
    clipped = 0
    for ev in events:
        first = (ev.start - origin) // window
        # half-open encounter [start, end): the last window is the one containing end - 1 second
        last = -((origin - ev.end) // window) - 1
        if first < 0 or last >= count:
            clipped += 1
        i, j = node_index[ev.node_a], node_index[ev.node_b]
        for k in range(max(first, 0), min(last, count - 1) + 1):
            edges[k].add((i, j))
    if clipped:
        logger.warning(
            "%d encounters extend beyond the observation span [%d, %d] and were clipped",
            clipped,
            origin,
            origin + span,
        )

    n = len(node_index)
    snapshots = []
    for pairs in edges:
        if pairs:
            rows, cols = np.array(sorted(pairs)).T
            snapshots.append(
                SymmetricMatrix.from_upper_entries(n, rows, cols, np.ones(len(pairs)))
            )
        else:
            snapshots.append(SymmetricMatrix.zeros(n))
    sequence = SnapshotSequence(window, origin, span, node_index, snapshots)
    logger.info("%r", sequence)
    return sequence


def katz_gamma(sequence, factor=DEFAULT_GAMMA_FACTOR, threads=1):
    """
    gamma = factor / max_k rho(A[k]), which keeps every resolvent a convergent power series
    :param sequence: SnapshotSequence with at least one nonempty snapshot
    :param factor: in (0, 1)
    """
    if not 0 < factor < 1:
        raise DomainError(
            f"The gamma factor must lie in (0, 1) to satisfy gamma < 1 / max spectral radius, got: {factor}"
        )
    radii = sequence.spectral_radii(threads)
    rho_max = float(radii.max()) if radii.size else 0.0
    if rho_max == 0:
        raise DomainError("Every snapshot is empty: gamma is undefined")
    return factor / rho_max


@dataclass(frozen=True)
class TemporalCommunicability:
    gamma: float
    n_nodes: int
    count: int
    broadcast: np.ndarray
    receive: np.ndarray
    total: float
    matrix: Optional[np.ndarray] = None
    trajectory: Optional[np.ndarray] = None
    method: str = "dense"

    @property
    def average(self):
        return self.total / self.count

    @property
    def per_node(self):
        return self.total / self.n_nodes if self.n_nodes else float("nan")


class TemporalTotals(NamedTuple):
    total: float
    average: float
    per_node: float


def dynamic_communicability(
    sequence, gamma, dense_limit=TEMPORAL_DENSE_LIMIT, trajectory=False, threads=1
):
    """
    Dynamic communicability of a snapshot sequence
    Up to dense_limit nodes C^M is accumulated explicitly, above it only the broadcast vector b = C^M 1 and the
    receive vector r = (C^M)^T 1 are propagated (concurrently) through the resolvent chain.
    :param sequence: SnapshotSequence
    :param gamma: Katz parameter with gamma * max_k rho(A[k]) < 1
    :param trajectory: also return C_t after every snapshot
    :return: TemporalCommunicability
    """
    radii = sequence.spectral_radii(threads)
    rho_max = float(radii.max()) if radii.size else 0.0
    if gamma < 0 or gamma * rho_max >= 1:
        raise DomainError(
            f"gamma={gamma:.6g} violates gamma * max spectral radius < 1 "
            f"(max spectral radius {rho_max:.6g})"
        )
    n = sequence.n_nodes

    def resolvents():
        for snapshot, rho in zip(sequence.snapshots, radii):
            yield None if snapshot.is_zero else Resolvent(snapshot, gamma, rho=rho, dense_limit=n)

    if n <= dense_limit:
        current = np.eye(n)
        totals = []
        for resolvent in resolvents():
            if resolvent is not None:
                # C R^-1 = (R^-1 C^T)^T, R symmetric
                current = resolvent.solve(current.T).T
            if trajectory:
                totals.append(current.sum())
        broadcast = current.sum(axis=1)
        receive = current.sum(axis=0)
        return TemporalCommunicability(
            gamma=gamma,
            n_nodes=n,
            count=sequence.count,
            broadcast=broadcast,
            receive=receive,
            total=float(current.sum()),
            matrix=current,
            trajectory=np.array(totals) if trajectory else None,
            method="dense",
        )

    def propagate(order):
        vector = np.ones(n)
        totals = []
        for k in order:
            snapshot = sequence.snapshots[k]
            if not snapshot.is_zero:
                vector = Resolvent(snapshot, gamma, rho=radii[k], dense_limit=0).solve(vector)
            totals.append(vector.sum())
        return vector, totals

    forward = range(sequence.count)
    backward = reversed(range(sequence.count))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=2) as executor:
            broadcast_job = executor.submit(propagate, backward)
            receive_job = executor.submit(propagate, forward)
            (broadcast, _), (receive, receive_totals) = (
                broadcast_job.result(),
                receive_job.result(),
            )
    else:
        broadcast, _ = propagate(backward)
        receive, receive_totals = propagate(forward)
    total = float(receive.sum())
    if not math.isclose(broadcast.sum(), total, rel_tol=1e-8):
        logger.warning(
            "Broadcast and receive totals disagree: %.17g vs %.17g", broadcast.sum(), total
        )
    return TemporalCommunicability(
        gamma=gamma,
        n_nodes=n,
        count=sequence.count,
        broadcast=broadcast,
        receive=receive,
        total=total,
        trajectory=np.array(receive_totals) if trajectory else None,
        method="matrix-free",
    )


def total_temporal_communicability(communicability):
    """
    C_t = sum_ij C^M_ij, C_ave = C_t / M and C_t / N
    :param communicability: TemporalCommunicability
    :return: TemporalTotals(total, average, per_node)
    """
    return TemporalTotals(
        communicability.total, communicability.average, communicability.per_node
    )


SWEEP_COLUMNS = ["window", "M", "gamma", "C_t", "C_t_per_node", "C_ave"]


@dataclass(frozen=True)
class WindowResult:
    """Temporal communicability of one snapshot window, result is None when every snapshot is empty"""

    window: int
    sequence: SnapshotSequence
    result: Optional[TemporalCommunicability]

    def row(self):
        if self.result is None:
            n, m = self.sequence.n_nodes, self.sequence.count
            return [self.window, m, float("nan"), float(n), 1.0, n / m]
        totals = total_temporal_communicability(self.result)
        return [
            self.window,
            self.result.count,
            self.result.gamma,
            totals.total,
            totals.per_node,
            totals.average,
        ]

    def node_table(self):
        """Per-node broadcast and receive communicability"""
        if self.result is None:
            broadcast = receive = np.ones(self.sequence.n_nodes)
        else:
            broadcast, receive = self.result.broadcast, self.result.receive
        return pd.DataFrame(
            {"node_id": list(self.sequence.node_index.ids), "broadcast": broadcast, "receive": receive}
        )


def window_results(
    events,
    windows,
    origin=None,
    span=None,
    nodes=None,
    factor=DEFAULT_GAMMA_FACTOR,
    dense_limit=TEMPORAL_DENSE_LIMIT,
    trajectory=False,
    threads=1,
):
    """
    Temporal communicability for several snapshot windows over a common origin, span and node universe
    :param events: list of EncounterEvent
    :param windows: list of window lengths in seconds
    :return: list of WindowResult in the order of windows
    """
    windows = list(windows)
    if not windows:
        raise DomainError("The window sweep needs at least one window")
    events = list(events)
    if origin is None:
        origin = min((ev.start for ev in events), default=0)
    if span is None:
        span = max((ev.end for ev in events), default=origin) - origin
    if nodes is None:
        nodes = {n for ev in events for n in ev.pair}

    def sweep_window(window):
        sequence = snapshot_sequence(events, window, origin, span, nodes)
        if sequence.nonempty_count == 0:
            logger.warning("Every %ds snapshot is empty, C^M is the identity", window)
            return WindowResult(window, sequence, None)
        gamma = katz_gamma(sequence, factor)
        result = dynamic_communicability(
            sequence, gamma, dense_limit=dense_limit, trajectory=trajectory
        )
        logger.info(
            "Window %ds: M=%d, gamma=%.6g, C_t=%.6g (%s)",
            window,
            sequence.count,
            gamma,
            result.total,
            result.method,
        )
        return WindowResult(window, sequence, result)

    return map_ordered(sweep_window, windows, threads)


def sweep_table(results):
    """One SWEEP_COLUMNS row per WindowResult"""
    return pd.DataFrame([r.row() for r in results], columns=SWEEP_COLUMNS)


def window_sweep(
    events,
    windows,
    origin=None,
    span=None,
    nodes=None,
    factor=DEFAULT_GAMMA_FACTOR,
    dense_limit=TEMPORAL_DENSE_LIMIT,
    threads=1,
):
    """
    Temporal communicability for several snapshot windows, one row per window
    An all-empty window reports gamma as NaN and C^M = I.
    :return: pandas.DataFrame with SWEEP_COLUMNS
    """
    return sweep_table(
        window_results(events, windows, origin, span, nodes, factor, dense_limit, threads=threads)
    )


def static_temporal_gap(static_report, sweep):
    """
    Compare the static (unweighted) communicability per node with the temporal one of every window
    :param static_report: CommunicabilityReport of the aggregated unweighted graph, or its per-node value
    :param sweep: DataFrame returned by window_sweep
    :return: DataFrame [window, temporal_per_node, static_per_node, ratio]
    """
    static_per_node = getattr(static_report, "per_node", static_report)
    return pd.DataFrame(
        {
            "window": sweep["window"],
            "temporal_per_node": sweep["C_t_per_node"],
            "static_per_node": static_per_node,
            "ratio": sweep["C_t_per_node"] / static_per_node,
        }
    )
