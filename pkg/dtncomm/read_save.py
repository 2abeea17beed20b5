import json
from pathlib import Path

from dtncomm.backends.graph_io import GraphIO
from dtncomm.backends.session_io import SessionIO
from dtncomm.backends.table_io import TableIO
from dtncomm.errors import DataError, LogReadError
from dtncomm.ingest.records import SessionFormat
from dtncomm.utils.files import is_csv, is_json


def read_sessions(input_path, delimiter=",", columns=None, header=None, fmt=None):
    """
    Read an association session log
    :param input_path: str or os.PathLike, or an open file object
    :param delimiter: the field separator, ignored if fmt is given
    :param columns: optional column order, by default timestamp, ap_id, node_id, session_time, status
    :param header: True/False to force a header line, None to detect it
    :param fmt: optional SessionFormat, overrides delimiter, columns and header
    :return: ParsedLog (records, malformed_count, line_count, header_skipped)
    """
    if fmt is None:
        kwargs = {"delimiter": delimiter, "header": header}
        if columns is not None:
            kwargs["columns"] = tuple(columns)
        fmt = SessionFormat(**kwargs)
    return SessionIO.read_records(input_path, fmt)


def save_sessions(filename, records, fmt=None, mkdir=False, parents=False):
    _prepare(filename, mkdir, parents)
    SessionIO.save_records(filename, records, fmt)


def read_intervals(input_path):
    _check_csv(input_path)
    return TableIO.read_intervals(input_path)


def save_intervals(filename, intervals, mkdir=False, parents=False):
    """
    Save association intervals as CSV node_id,ap_id,start,end
    :param mkdir: if True, creates the directory of `filename`
    :param parents: to be used with `mkdir=True`. If True, creates also the parent directories
    """
    _prepare(filename, mkdir, parents)
    TableIO.save_intervals(filename, intervals)


def read_encounters(input_path):
    _check_csv(input_path)
    return TableIO.read_encounters(input_path)


def save_encounters(filename, events, mkdir=False, parents=False):
    _prepare(filename, mkdir, parents)
    TableIO.save_encounters(filename, events)


def read_graph(input_path):
    """Read a contact graph: the edge list CSV and its JSON header with the same stem"""
    _check_csv(input_path)
    return GraphIO.read_graph(input_path)


def save_graph(filename, graph, mkdir=False, parents=False):
    """
    Save a contact graph as an edge list CSV and a JSON header next to it
    :param filename: the edge list filename, with a '.csv' suffix
    """
    _check_csv(filename, check_exist=False)
    _prepare(filename, mkdir, parents)
    GraphIO.save_graph(filename, graph)


def save_table(filename, table, mkdir=False, parents=False):
    """Save a pandas DataFrame report as CSV"""
    _prepare(filename, mkdir, parents)
    TableIO.save_table(filename, table)


def save_json(filename, data, mkdir=False, parents=False):
    """Save a JSON report with sorted keys"""
    if not is_json(filename, check_exist=False):
        raise DataError(f'A JSON report needs a ".json" suffix, got: "{filename}"')
    _prepare(filename, mkdir, parents)
    with open(filename, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def _prepare(filename, mkdir, parents):
    if mkdir:
        Path(filename).parent.mkdir(parents=parents, exist_ok=True)


def _check_csv(filename, check_exist=True):
    if not is_csv(filename, check_exist=False):
        raise DataError(f'Expected a ".csv" file, got: "{filename}"')
    if check_exist and not Path(filename).is_file():
        raise LogReadError(f'No such file: "{filename}"')
