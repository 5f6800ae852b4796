"""Content-addressed result cache.

Entries are JSON files named by the SHA-256 of a canonical key string,
written atomically (temp file then rename), so concurrent writers are
safe and a warm cache returns byte-identical payloads.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

_ENV_VAR = "PROPENDS_CACHE_DIR"


def default_cache_dir():
    env = os.environ.get(_ENV_VAR)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "propends")


class Cache:
    """Keyed JSON store; a None root disables caching entirely."""

    def __init__(self, root):
        self.root = root

    @staticmethod
    def key(*parts) -> str:
        canon = json.dumps(parts, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    def _path(self, key: str) -> str:
        return os.path.join(self.root, key[:2], key + ".json")

    def get(self, key: str):
        if self.root is None:
            return None
        try:
            with open(self._path(key), "r", encoding="utf-8") as fh:
                return json.load(fh)
        except (OSError, ValueError):
            return None

    def put(self, key: str, payload) -> None:
        if self.root is None:
            return
        path = self._path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(
            dir=os.path.dirname(path), suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def disabled() -> Cache:
    return Cache(None)
