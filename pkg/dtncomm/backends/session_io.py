import logging

import numpy as np
import pandas as pd

from dtncomm.errors import FormatMismatchError, LogReadError
from dtncomm.ingest.records import ParsedLog, SessionFormat, SessionRecord, SessionStatus

logger = logging.getLogger(__name__)


class SessionIO:
    @staticmethod
    def read_records(source, fmt=None):
        """
        Parse a delimited association log into session records.
        Malformed lines (wrong field count, non-integral or negative times, unknown status, empty ids) are counted and
        skipped, unless they exceed fmt.max_malformed_ratio of the lines.
        :param source: path-like or file object of the log
        :param fmt: SessionFormat, the default comma separated format if None
        :return: ParsedLog with the records in file order
        """
        fmt = fmt or SessionFormat()
        extra_fields = []

        def bad_line(fields):
            extra_fields.append(fields)
            return None

        try:
            table = pd.read_csv(
                source,
                sep=fmt.delimiter,
                header=None,
                names=list(fmt.columns),
                dtype=str,
                keep_default_na=False,
                skip_blank_lines=True,
                engine="python",
                on_bad_lines=bad_line,
            )
        except pd.errors.EmptyDataError:
            logger.warning("The session log %s is empty", SessionIO._describe(source))
            return ParsedLog([], 0, 0, False)
        except (OSError, UnicodeDecodeError, pd.errors.ParserError) as e:
            raise LogReadError(f"Cannot read the session log {SessionIO._describe(source)}: {e}") from e

        header_skipped = False
        if len(table) and SessionIO._is_header(table.iloc[0], fmt):
            table = table.iloc[1:]
            header_skipped = True

        line_count = len(table) + len(extra_fields)
        valid = SessionIO._valid_rows(table)
        malformed = len(extra_fields) + int((~valid).sum())
        if line_count and malformed / line_count > fmt.max_malformed_ratio:
            raise FormatMismatchError(
                f"{malformed} of {line_count} lines of {SessionIO._describe(source)} are malformed, check the "
                f'delimiter ("{fmt.delimiter}") and the column order {fmt.columns}'
            )
        if malformed:
            logger.warning("Skipped %d malformed lines of %d", malformed, line_count)

        table = table[valid]
        timestamps = pd.to_numeric(table["timestamp"]).astype(np.int64)
        session_times = SessionIO._session_times(table["session_time"]).astype(np.int64)
        records = [
            SessionRecord(int(t), ap.strip(), node.strip(), SessionStatus.parse(status), int(dur))
            for t, ap, node, status, dur in zip(
                timestamps, table["ap_id"], table["node_id"], table["status"], session_times
            )
        ]
        logger.info("Read %d session records from %s", len(records), SessionIO._describe(source))
        return ParsedLog(records, malformed, line_count, header_skipped)

    @staticmethod
    def save_records(filename, records, fmt=None):
        """
        Write session records in a delimited log format that read_records parses back
        :param filename: path-like output filename
        :param records: iterable of SessionRecord
        :param fmt: SessionFormat, a header line is written only if fmt.header is True
        """
        fmt = fmt or SessionFormat()
        table = pd.DataFrame(
            [
                {
                    "timestamp": r.timestamp,
                    "ap_id": r.ap_id,
                    "node_id": r.node_id,
                    "session_time": r.session_time,
                    "status": r.status.value,
                }
                for r in records
            ],
            columns=list(fmt.columns),
        )
        table.to_csv(
            filename, sep=fmt.delimiter, header=bool(fmt.header), index=False, lineterminator="\n"
        )

    @staticmethod
    def _describe(source):
        return f'"{source}"' if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__") else "stream"

    @staticmethod
    def _is_header(first_row, fmt):
        if fmt.header is not None:
            return fmt.header
        if any(value is None or (isinstance(value, float) and np.isnan(value)) for value in first_row):
            return False
        timestamp = str(first_row["timestamp"]).strip()
        try:
            float(timestamp)
        except ValueError:
            return True
        return False

    @staticmethod
    def _session_times(column):
        return pd.to_numeric(column.where(column.str.strip() != "", "0"), errors="coerce")

    @staticmethod
    def _valid_rows(table):
        """Boolean mask of the rows that make a valid SessionRecord"""
        if table.empty:
            return pd.Series([], dtype=bool, index=table.index)
        complete = table.notna().all(axis=1)
        table = table.fillna("")
        timestamps = pd.to_numeric(table["timestamp"], errors="coerce")
        session_times = SessionIO._session_times(table["session_time"])
        statuses = table["status"].map(SessionStatus.parse)
        return (
            complete
            & timestamps.notna()
            & (timestamps >= 0)
            & (timestamps == np.floor(timestamps))
            & session_times.notna()
            & (session_times >= 0)
            & (session_times == np.floor(session_times))
            & statuses.notna()
            & (table["ap_id"].str.strip() != "")
            & (table["node_id"].str.strip() != "")
        )

