import logging

import pandas as pd

from dtncomm.encounter.events import ENCOUNTER_COLUMNS, EncounterEvent
from dtncomm.errors import DataError, LogReadError
from dtncomm.ingest.records import AssociationInterval

logger = logging.getLogger(__name__)

INTERVAL_COLUMNS = ("node_id", "ap_id", "start", "end")
FLOAT_FORMAT = "%.17g"


class TableIO:
    """CSV tables of intervals and encounters, and the generic table writer of the reports"""

    @staticmethod
    def save_intervals(filename, intervals):
        rows = [(i.node_id, i.ap_id, i.start, i.end) for i in intervals]
        TableIO.save_table(filename, pd.DataFrame(rows, columns=list(INTERVAL_COLUMNS)))

    @staticmethod
    def read_intervals(filename):
        table = TableIO._read(filename, INTERVAL_COLUMNS, id_columns=("node_id", "ap_id"))
        return [
            AssociationInterval(node, ap, int(start), int(end))
            for node, ap, start, end in table.itertuples(index=False, name=None)
        ]

    @staticmethod
    def save_encounters(filename, events):
        rows = [(e.node_a, e.node_b, e.poi_id, e.start, e.end) for e in events]
        TableIO.save_table(filename, pd.DataFrame(rows, columns=list(ENCOUNTER_COLUMNS)))

    @staticmethod
    def read_encounters(filename):
        table = TableIO._read(filename, ENCOUNTER_COLUMNS, id_columns=ENCOUNTER_COLUMNS[:3])
        return [
            EncounterEvent(a, b, poi, int(start), int(end))
            for a, b, poi, start, end in table.itertuples(index=False, name=None)
        ]

    @staticmethod
    def save_table(filename, table):
        """Write a DataFrame as CSV: no index, '\\n' line endings, floats in round-trip precision"""
        table.to_csv(filename, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    @staticmethod
    def _read(filename, columns, id_columns):
        try:
            table = pd.read_csv(
                filename, dtype={c: str for c in id_columns}, keep_default_na=False
            )
        except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise LogReadError(f'Cannot read the table "{filename}": {e}') from e
        if tuple(table.columns) != tuple(columns):
            raise DataError(
                f'Unexpected columns in "{filename}": {list(table.columns)}, expected: {list(columns)}'
            )
        time_columns = [c for c in columns if c not in id_columns]
        for column in time_columns:
            if not pd.api.types.is_integer_dtype(table[column]):
                raise DataError(f'Column "{column}" of "{filename}" must hold integral seconds')
        logger.debug('Read %d rows from "%s"', len(table), filename)
        return table
