"""Append-only run manifests, one JSON object per line."""
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from django.utils import timezone

import decolite

logger = logging.getLogger(__name__)


@dataclass
class RunManifest:
    command: str
    datasets: List[str] = field(default_factory=list)
    kind: Optional[str] = None
    size: Optional[int] = None
    seeds: List[int] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    version: str = decolite.__version__
    started_at: str = field(default_factory=lambda: timezone.now().isoformat())
    finished_at: Optional[str] = None
    wall_seconds: Optional[float] = None
    # per-model training wall time, kept here so result files stay reproducible
    timings: Dict[str, float] = field(default_factory=dict)

    def add(self, out_dir, *paths):
        out_dir = Path(out_dir)
        for path in paths:
            path = Path(path)
            try:
                relative = str(path.relative_to(out_dir))
            except ValueError:
                relative = str(path)
            if relative not in self.artifacts:
                self.artifacts.append(relative)

    def finish(self):
        finished = timezone.now()
        self.finished_at = finished.isoformat()
        started = datetime.fromisoformat(self.started_at)
        self.wall_seconds = (finished - started).total_seconds()


def append_manifest(out_dir, manifest: RunManifest) -> Path:
    path = Path(out_dir) / "manifest.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a") as output_file:
        output_file.write(json.dumps(asdict(manifest), sort_keys=True) + "\n")
    logger.debug("manifest entry for %s with %d artifacts", manifest.command, len(manifest.artifacts))
    return path


def read_manifests(out_dir) -> List[Dict[str, Any]]:
    path = Path(out_dir) / "manifest.jsonl"
    if not path.exists():
        return []
    with open(path, "r") as input_file:
        return [json.loads(line) for line in input_file if line.strip()]
