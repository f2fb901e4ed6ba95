"""Content-addressed JSON cache on disk.

Keys are arbitrary JSON-able objects; the file name is the SHA-256 of their
canonical serialisation.  Writes go to a temporary file that is then renamed
into place, so concurrent writers never leave a torn payload behind.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

ENV_VAR = "KUNNETH_CACHE_DIR"
VERSION = 1


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical(obj).encode("utf-8")).hexdigest()


class JsonCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    @classmethod
    def from_env(cls) -> "JsonCache | None":
        d = os.environ.get(ENV_VAR)
        return cls(d) if d else None

    def path(self, key) -> Path:
        h = digest({"v": VERSION, "key": key})
        return self.directory / h[:2] / f"{h}.json"

    def get(self, key):
        p = self.path(key)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        if data.get("key") != json.loads(canonical(key)):
            return None  # hash collision or foreign file
        return data.get("value")

    def put(self, key, value) -> None:
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"key": key, "value": value}, sort_keys=True, indent=1)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            os.replace(tmp, p)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
