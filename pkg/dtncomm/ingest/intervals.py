"""
Pairing of Start/Stop session records into association intervals.

Rules, per (node, ap):
- a Start is matched with the next Stop
- a Start followed by another Start closes the first interval at the second Start's timestamp
- a Stop with no open Start is back-filled to [t - session_time, t] if session_time > 0, dropped otherwise
- Starts still open at the end of the stream are closed at the last observed timestamp
- zero-length intervals are dropped
"""
import logging
from dataclasses import dataclass, asdict

from dtncomm.ingest.records import AssociationInterval, SessionRecord, SessionStatus

logger = logging.getLogger(__name__)


@dataclass
class ReconciliationReport:
    paired: int = 0
    reassociations: int = 0
    backfilled_stops: int = 0
    dropped_stops: int = 0
    dangling_starts: int = 0
    zero_length: int = 0

    def as_dict(self):
        return asdict(self)


def build_intervals(records, report=None):
    """
    Pair Start/Stop records into association intervals
    :param records: iterable of SessionRecord, sorted or not
    :param report: optional ReconciliationReport, updated in-place
    :return: list of AssociationInterval sorted by (node_id, start, end, ap_id)
    """
    if report is None:
        report = ReconciliationReport()
    records = sorted(records, key=SessionRecord.sort_key)
    open_starts = {}
    bounds = []

    def close(key, start, end):
        if start < end:
            bounds.append((key[0], key[1], start, end))
        else:
            report.zero_length += 1

    for record in records:
        key = (record.node_id, record.ap_id)
        if record.status is SessionStatus.START:
            if key in open_starts:
                report.reassociations += 1
                close(key, open_starts[key], record.timestamp)
            open_starts[key] = record.timestamp
        elif key in open_starts:
            report.paired += 1
            close(key, open_starts.pop(key), record.timestamp)
        elif record.session_time > 0:
            report.backfilled_stops += 1
            close(key, record.timestamp - record.session_time, record.timestamp)
        else:
            report.dropped_stops += 1

    if open_starts:
        last_timestamp = records[-1].timestamp
        for key in sorted(open_starts):
            report.dangling_starts += 1
            close(key, open_starts[key], last_timestamp)

    intervals = [AssociationInterval(*b) for b in bounds]
    intervals.sort(key=AssociationInterval.sort_key)
    logger.info("Built %d intervals from %d records: %s", len(intervals), len(records), report)
    return intervals


def intervals_to_records(intervals):
    """
    Serialize intervals as a session log: a Start at the interval start and a Stop carrying the session time at its
    end. build_intervals on the returned records reproduces the intervals.
    """
    records = []
    for interval in intervals:
        records.append(
            SessionRecord(interval.start, interval.ap_id, interval.node_id, SessionStatus.START)
        )
        records.append(
            SessionRecord(
                interval.end,
                interval.ap_id,
                interval.node_id,
                SessionStatus.STOP,
                interval.duration,
            )
        )
    records.sort(key=SessionRecord.sort_key)
    return records
