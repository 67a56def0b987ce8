"""Append-only JSON-lines result cache keyed by a command fingerprint."""
from __future__ import annotations

import hashlib
import json
import os
import time
from pathlib import Path

CACHE_ENV = "DIGEXT_CACHE"
CACHE_VERSION = "1"


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def fingerprint(command: str, params: dict, inputs: dict | None = None) -> str:
    """Stable key for a command, its canonical parameters and the digests of its input files."""
    payload = {"command": command, "params": params, "inputs": inputs or {}}
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def default_path() -> str | None:
    return os.environ.get(CACHE_ENV) or None


class ResultCache:
    """Lookups scan the file; the last entry for a key wins.  Nothing is ever rewritten."""

    def __init__(self, path, version: str = CACHE_VERSION):
        self.path = Path(path)
        self.version = version

    def get(self, key: str):
        if not self.path.exists():
            return None
        hit = None
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue  # a torn trailing write; ignore it
                if entry.get("key") == key and entry.get("meta", {}).get("version") == self.version:
                    hit = entry["value"]
        return hit

    def put(self, key: str, value, runtime: float = 0.0) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        entry = {
            "key": key,
            "value": value,
            "meta": {"version": self.version, "timestamp": time.time(), "runtime": runtime},
        }
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
