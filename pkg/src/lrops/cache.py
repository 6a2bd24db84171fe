"""Content-addressed, write-once disk cache for matrices and Groebner bases.

Keys are sha256 hashes of a canonical description (ring names + canonical
polynomial strings + order tag).  Writers go through a temp file and an
atomic rename so concurrent workers cannot interleave partial entries; a
corrupt entry is recomputed and overwritten with a warning.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

from .groebner import ORDER_TAG
from .polyring import PolyRing, Polynomial, format_poly


class ResultCache:
    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    # -- generic payloads ---------------------------------------------------

    @staticmethod
    def digest(payload: str) -> str:
        return hashlib.sha256(payload.encode()).hexdigest()

    def _path(self, kind: str, key: str) -> Path:
        return self.dir / f"{kind}-{key}.json"

    def load(self, kind: str, key: str):
        path = self._path(kind, key)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
            if data.get("key") != key:
                raise ValueError("key mismatch")
            return data["value"]
        except (ValueError, KeyError, json.JSONDecodeError):
            print(f"warning: corrupt cache entry {path}, recomputing", file=sys.stderr)
            try:
                path.unlink()
            except OSError:
                pass
            return None

    def store(self, kind: str, key: str, value) -> None:
        path = self._path(kind, key)
        if path.exists():
            return
        blob = json.dumps({"key": key, "value": value}, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(blob)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    # -- Groebner bases -----------------------------------------------------

    @staticmethod
    def gb_key(ring: PolyRing, gens: list[Polynomial]) -> str:
        from .polyring import canonical_str

        payload = json.dumps(
            {
                "ring": list(ring.names),
                "order": ORDER_TAG,
                "gens": sorted(canonical_str(g) for g in gens),
            },
            sort_keys=True,
        )
        return ResultCache.digest(payload)

    def get_gb(self, ring: PolyRing, gens: list[Polynomial]):
        value = self.load("gb", self.gb_key(ring, gens))
        if value is None:
            return None
        return [ring.parse(s) for s in value["basis"]]

    def put_gb(self, ring: PolyRing, gens: list[Polynomial], basis: list[Polynomial]):
        self.store(
            "gb",
            self.gb_key(ring, gens),
            {"order": ORDER_TAG, "basis": [format_poly(g) for g in basis]},
        )

    # -- matrices -----------------------------------------------------------

    def get_matrix(self, name: str):
        from .exactla import PolyMatrix

        value = self.load("matrix", self.digest(name))
        if value is None:
            return None
        return PolyMatrix.from_json(value)

    def put_matrix(self, name: str, matrix) -> None:
        self.store("matrix", self.digest(name), matrix.to_json())
