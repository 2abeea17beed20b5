from dataclasses import dataclass
from enum import Enum
from typing import Optional

from dtncomm.errors import DataError


class SessionStatus(str, Enum):
    START = "Start"
    STOP = "Stop"

    @classmethod
    def parse(cls, value):
        """Case-insensitive parsing of the status column, None if it is not a valid status"""
        value = str(value).strip().lower()
        for status in cls:
            if status.value.lower() == value:
                return status
        return None


# sort rank of the status: Start before Stop at equal timestamps
STATUS_RANK = {SessionStatus.START: 0, SessionStatus.STOP: 1}


@dataclass(frozen=True)
class SessionRecord:
    """A single association (Start) or disassociation (Stop) log line"""

    timestamp: int
    ap_id: str
    node_id: str
    status: SessionStatus
    session_time: int = 0

    def __post_init__(self):
        if self.timestamp < 0:
            raise DataError(f"Negative timestamp: {self.timestamp}")
        if self.session_time < 0:
            raise DataError(f"Negative session time: {self.session_time}")
        if not isinstance(self.status, SessionStatus):
            raise DataError(f'Invalid session status: "{self.status}"')

    def sort_key(self):
        return self.timestamp, self.node_id, self.ap_id, STATUS_RANK[self.status]


@dataclass(frozen=True)
class AssociationInterval:
    """Presence of a node at an access point during [start, end)"""

    node_id: str
    ap_id: str
    start: int
    end: int

    def __post_init__(self):
        if not self.start < self.end:
            raise DataError(
                f'Empty association interval of node "{self.node_id}" at "{self.ap_id}": '
                f"[{self.start}, {self.end}]"
            )

    @property
    def duration(self):
        return self.end - self.start

    def sort_key(self):
        return self.node_id, self.start, self.end, self.ap_id


DEFAULT_COLUMNS = ("timestamp", "ap_id", "node_id", "session_time", "status")


@dataclass(frozen=True)
class SessionFormat:
    """
    Format descriptor of a delimited association log
    :param delimiter: the field separator, comma by default
    :param columns: the column order of the file
    :param header: True/False to force, None to detect (a non-numeric timestamp field on the first line)
    :param max_malformed_ratio: above this fraction of malformed lines the file is rejected
    """

    delimiter: str = ","
    columns: tuple = DEFAULT_COLUMNS
    header: Optional[bool] = None
    max_malformed_ratio: float = 0.5

    def __post_init__(self):
        if sorted(self.columns) != sorted(DEFAULT_COLUMNS):
            raise DataError(
                f"The columns must be a permutation of {DEFAULT_COLUMNS}, got: {self.columns}"
            )
        if len(self.delimiter) != 1:
            raise DataError(f'The delimiter must be a single character, got: "{self.delimiter}"')


@dataclass
class ParsedLog:
    records: list
    malformed_count: int = 0
    line_count: int = 0
    header_skipped: bool = False

    def __len__(self):
        return len(self.records)


@dataclass(frozen=True)
class DatasetSummary:
    n_nodes: int
    n_aps: int
    first_timestamp: Optional[int]
    last_timestamp: Optional[int]

    @property
    def span(self):
        if self.first_timestamp is None:
            return 0
        return self.last_timestamp - self.first_timestamp

    @property
    def span_days(self):
        return self.span / 86400


def dataset_summary(items):
    """
    Size of a dataset: distinct nodes and APs, first and last timestamps
    :param items: iterable of SessionRecord or AssociationInterval
    """
    nodes, aps = set(), set()
    first = last = None
    for item in items:
        nodes.add(item.node_id)
        aps.add(item.ap_id)
        if isinstance(item, SessionRecord):
            lo = hi = item.timestamp
        else:
            lo, hi = item.start, item.end
        first = lo if first is None else min(first, lo)
        last = hi if last is None else max(last, hi)
    return DatasetSummary(len(nodes), len(aps), first, last)
