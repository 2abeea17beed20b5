from dtncomm.encounter.events import ENCOUNTER_COLUMNS, EncounterEvent
from dtncomm.encounter.sweep import (
    brute_force_encounters,
    extract_encounters,
    merge_cross_ap_encounters,
    merge_overlapping_pair_events,
)
