"""Embedded transactional key-value store over sqlite3.

One file per deployment; values are canonical JSON (sorted keys, compact
separators) so persisted records compare byte-for-byte across restarts.
Mutations are serialized behind a lock; reads see committed state.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class KVStore:
    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        if self.path != ":memory:":
            Path(self.path).parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS kv ("
                "key TEXT PRIMARY KEY, value TEXT NOT NULL)"
            )
            self._conn.commit()

    def get(self, key: str) -> dict | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT value FROM kv WHERE key = ?", (key,)
            ).fetchone()
        return json.loads(row[0]) if row else None

    def get_raw(self, key: str) -> str | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT value FROM kv WHERE key = ?", (key,)
            ).fetchone()
        return row[0] if row else None

    def put(self, key: str, payload: dict) -> None:
        value = canonical_json(payload)
        with self._lock:
            self._conn.execute(
                "INSERT INTO kv (key, value) VALUES (?, ?) "
                "ON CONFLICT(key) DO UPDATE SET value = excluded.value",
                (key, value),
            )
            self._conn.commit()

    def put_new(self, key: str, payload: dict) -> bool:
        """Insert only; False when the key already exists."""
        value = canonical_json(payload)
        with self._lock:
            try:
                self._conn.execute(
                    "INSERT INTO kv (key, value) VALUES (?, ?)", (key, value)
                )
                self._conn.commit()
            except sqlite3.IntegrityError:
                return False
        return True

    def delete(self, key: str) -> bool:
        with self._lock:
            cursor = self._conn.execute("DELETE FROM kv WHERE key = ?", (key,))
            self._conn.commit()
        return cursor.rowcount > 0

    def scan(self, prefix: str) -> list[tuple[str, dict]]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT key, value FROM kv WHERE key >= ? AND key < ? ORDER BY key",
                (prefix, prefix + "￿"),
            ).fetchall()
        return [(key, json.loads(value)) for key, value in rows]

    def dump(self) -> list[tuple[str, str]]:
        """Every (key, canonical value) pair, for round-trip comparisons."""
        with self._lock:
            return self._conn.execute(
                "SELECT key, value FROM kv ORDER BY key"
            ).fetchall()

    def close(self) -> None:
        with self._lock:
            self._conn.close()
