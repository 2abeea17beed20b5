import json
import logging

import pandas as pd

from dtncomm.backends.table_io import FLOAT_FORMAT, TableIO
from dtncomm.errors import DataError, LogReadError
from dtncomm.graph.contact_graph import ContactGraph
from dtncomm.utils.files import sidecar_path

logger = logging.getLogger(__name__)

EDGE_COLUMNS = ("node_a", "node_b", "weight")


class GraphIO:
    """
    A contact graph is stored as an edge list CSV (node_a, node_b, weight) and a JSON header next to it, with the
    same stem. The header keeps the node order, so isolated nodes and the node indices survive the round trip.
    """

    @staticmethod
    def save_graph(filename, graph):
        ids = graph.node_index.ids
        rows, cols, weights = graph.upper_entries()
        table = pd.DataFrame(
            {
                "node_a": [ids[i] for i in rows],
                "node_b": [ids[j] for j in cols],
                "weight": weights,
            },
            columns=list(EDGE_COLUMNS),
        )
        table.to_csv(filename, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        GraphIO.save_header(sidecar_path(filename), graph.header())

    @staticmethod
    def read_graph(filename):
        header = GraphIO.read_header(sidecar_path(filename))
        try:
            table = pd.read_csv(
                filename, dtype={"node_a": str, "node_b": str}, keep_default_na=False
            )
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise LogReadError(f'Cannot read the edge list "{filename}": {e}') from e
        if tuple(table.columns) != EDGE_COLUMNS:
            raise DataError(
                f'Unexpected columns in "{filename}": {list(table.columns)}, expected: {list(EDGE_COLUMNS)}'
            )
        graph = ContactGraph.from_edges(
            table.itertuples(index=False, name=None),
            mode=header["mode"],
            node_ids=header["node_ids"],
            threshold=header.get("threshold", 0.0),
            observation_span=header.get("observation_span"),
            label=header.get("label"),
        )
        if graph.n_edges != header["n_edges"] or graph.n_nodes != header["n_nodes"]:
            raise DataError(
                f'The edge list "{filename}" has {graph.n_nodes} nodes and {graph.n_edges} edges, its header '
                f'declares {header["n_nodes"]} and {header["n_edges"]}'
            )
        return graph

    @staticmethod
    def save_header(filename, header):
        with open(filename, "w") as f:
            json.dump(header, f, indent=2, sort_keys=True)
            f.write("\n")

    @staticmethod
    def read_header(filename):
        try:
            with open(filename) as f:
                header = json.load(f)
        except OSError as e:
            raise LogReadError(f'Cannot read the graph header "{filename}": {e}') from e
        except json.JSONDecodeError as e:
            raise DataError(f'Invalid graph header "{filename}": {e}') from e
        missing = {"mode", "node_ids", "n_nodes", "n_edges"} - set(header)
        if missing:
            raise DataError(f'The graph header "{filename}" misses the keys: {sorted(missing)}')
        return header
