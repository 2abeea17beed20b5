from dataclasses import dataclass

from dtncomm.errors import DataError

# the columns of the encounter record, in order
ENCOUNTER_COLUMNS = (
    "UserA",
    "UserB",
    "PoI Id",
    "Encounter Start Time",
    "Encounter End Time",
)


@dataclass(frozen=True)
class EncounterEvent:
    """Two nodes associated to the same point of interest (AP) during [start, end). node_a < node_b."""

    node_a: str
    node_b: str
    poi_id: str
    start: int
    end: int

    def __post_init__(self):
        if not self.node_a < self.node_b:
            raise DataError(
                f'Encounter pair must be ordered and distinct, got: ("{self.node_a}", "{self.node_b}")'
            )
        if not self.start < self.end:
            raise DataError(f"Empty encounter: [{self.start}, {self.end}]")

    @classmethod
    def between(cls, node_1, node_2, poi_id, start, end):
        """Construct with the canonical (sorted) pair orientation"""
        if node_2 < node_1:
            node_1, node_2 = node_2, node_1
        return cls(node_1, node_2, poi_id, start, end)

    @property
    def pair(self):
        return self.node_a, self.node_b

    @property
    def duration(self):
        return self.end - self.start

    def sort_key(self):
        return self.start, self.node_a, self.node_b, self.poi_id, self.end
