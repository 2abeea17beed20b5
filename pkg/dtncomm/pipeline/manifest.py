import json
import platform
from dataclasses import asdict, dataclass, field
from pathlib import Path

from dtncomm.utils.files import file_digest

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """
    Record of a pipeline run: the configuration echo, the digests of the inputs and of every emitted artifact, the
    record counts and the wall-clock time of every stage.
    """

    config: dict
    version: str
    inputs: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    wall_clock: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    python: str = field(default_factory=platform.python_version)

    def add_input(self, path):
        self.inputs[str(path)] = file_digest(path)

    def add_artifact(self, path, output_dir):
        self.artifacts[Path(path).relative_to(output_dir).as_posix()] = file_digest(path)

    def add_counts(self, stage, **counts):
        self.counts.setdefault(stage, {}).update(counts)

    def as_dict(self):
        return asdict(self)

    def save(self, filename):
        with open(filename, "w") as f:
            json.dump(self.as_dict(), f, indent=2, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, filename):
        with open(filename) as f:
            return cls(**json.load(f))
