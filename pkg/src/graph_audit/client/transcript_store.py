"""
Transcript Store
Graph Hallucination Audit - LLM Graph Recall Benchmark

JSON-lines transcript file plus the run manifest, both under one store
directory. Appends are serialized through a lock.
"""

import hashlib
import json
import logging
import threading
from pathlib import Path
from typing import Dict, List, Optional, Union

from graph_audit.config import MANIFEST_FILENAME, TRANSCRIPTS_FILENAME
from graph_audit.models.records import RunManifest, Transcript

logger = logging.getLogger(__name__)


def cache_key(model_id: str, prompt: str) -> str:
    """SHA-256 digest of the exact (model, prompt) pair"""
    payload = json.dumps([model_id, prompt], ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class TranscriptStore:
    """Append-only transcript file keyed by (model, prompt)"""

    def __init__(self, root: Union[str, Path]):
        """
        Initialize the store

        Args:
            root: Store directory; created on first write
        """
        self.root = Path(root)
        self.transcripts_path = self.root / TRANSCRIPTS_FILENAME
        self.manifest_path = self.root / MANIFEST_FILENAME
        self._lock = threading.Lock()
        self._records: List[Transcript] = []
        self._index: Dict[str, Transcript] = {}
        self._load()

    def _load(self) -> None:
        if not self.transcripts_path.exists():
            return
        with open(self.transcripts_path, "r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = Transcript.model_validate_json(line)
                except ValueError as e:
                    logger.error(f"Skipping malformed transcript line {number} in {self.transcripts_path}: {e}")
                    continue
                self._records.append(record)
                self._index.setdefault(cache_key(record.model_id, record.prompt), record)
        logger.info(f"Loaded {len(self._records)} transcripts from {self.transcripts_path}")

    def __len__(self) -> int:
        return len(self._records)

    def get(self, key: str) -> Optional[Transcript]:
        """First stored transcript for a cache key"""
        return self._index.get(key)

    def append(self, key: str, transcript: Transcript) -> None:
        """Persist one transcript as a JSON line"""
        line = json.dumps(transcript.model_dump(mode="json"), ensure_ascii=False)
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            with open(self.transcripts_path, "a", encoding="utf-8", newline="\n") as f:
                f.write(line + "\n")
            self._records.append(transcript)
            self._index.setdefault(key, transcript)

    def transcripts(self) -> List[Transcript]:
        return list(self._records)

    def load_manifest(self) -> Optional[RunManifest]:
        if not self.manifest_path.exists():
            return None
        return RunManifest.model_validate_json(self.manifest_path.read_text(encoding="utf-8"))

    def save_manifest(self, manifest: RunManifest) -> None:
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            self.manifest_path.write_text(manifest.canonical_json(), encoding="utf-8")
        logger.info(f"Manifest written to {self.manifest_path} ({len(manifest.entries)} entries)")
