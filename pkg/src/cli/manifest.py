#!/usr/bin/env python3
"""
Run Manifest
One record per command: tool version, config echo, seed, timestamps and the
digests of every file the run wrote
"""

import hashlib
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.cli.output import write_json

logger = logging.getLogger(__name__)


def file_digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class RunManifest(BaseModel):
    version: str
    command: List[str]
    config: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    started: str = Field(default_factory=lambda: datetime.now().isoformat())
    finished: Optional[str] = None
    outputs: Dict[str, str] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)

    def record(self, path: Path) -> None:
        path = Path(path)
        self.outputs[path.name] = file_digest(path)

    def verify(self, directory: Path) -> bool:
        """True when every recorded digest matches the file on disk"""
        for name, digest in self.outputs.items():
            target = Path(directory) / name
            if not target.exists() or file_digest(target) != digest:
                logger.warning(f"Manifest digest mismatch for {target}")
                return False
        return True

    def write(self, directory: Path) -> Path:
        self.finished = datetime.now().isoformat()
        path = write_json(Path(directory) / "manifest.json", self.model_dump(mode="json"))
        logger.info(f"Manifest written to {path}")
        return path

    @classmethod
    def load(cls, path: Path) -> "RunManifest":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
