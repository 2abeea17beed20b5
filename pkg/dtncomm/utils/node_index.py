class NodeIndex:
    """
    Bijection between opaque node ids and dense indices 0..N-1.
    Ids are kept in sorted order, so the index of a node does not depend on the order in which it was seen:
    >>> index = NodeIndex(["N2", "N1"])
    >>> index["N1"], index.node_id(1)
    (0, 'N2')
    """

    def __init__(self, node_ids=()):
        self._ids = tuple(sorted(set(node_ids)))
        self._index = {node_id: i for i, node_id in enumerate(self._ids)}

    def __getitem__(self, node_id):
        try:
            return self._index[node_id]
        except KeyError:
            raise KeyError(f'Unknown node id: "{node_id}"') from None

    def __contains__(self, node_id):
        return node_id in self._index

    def __len__(self):
        return len(self._ids)

    def __iter__(self):
        return iter(self._ids)

    def __eq__(self, other):
        return isinstance(other, NodeIndex) and self._ids == other._ids

    def __repr__(self):
        return f"NodeIndex(n={len(self)})"

    @property
    def ids(self):
        return self._ids

    def node_id(self, index):
        return self._ids[index]
