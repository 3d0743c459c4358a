"""Disk-backed session store.

Snapshots are JSON files named by a random 128-bit hex id. Writes go
through a temp file with fsync and an atomic rename, so the snapshot is
durable before the id is handed out. Restoring re-verifies the snapshot
against a fresh replay and fails closed on any inconsistency.
"""

from __future__ import annotations

import json
import os
import secrets
from pathlib import Path

from .bank import QuestionBank
from .engine import Session, session_from_dict, session_to_dict
from .errors import SnapshotError, StoreError

_ID_LENGTH = 32  # 128 bits, hex


def _valid_id(session_id: str) -> bool:
    return (
        isinstance(session_id, str)
        and len(session_id) == _ID_LENGTH
        and all(c in "0123456789abcdef" for c in session_id)
    )


class SessionStore:
    def __init__(self, directory):
        self.directory = Path(directory)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreError(f"storage failure: cannot create {self.directory}: {exc}") from exc

    def _file(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.json"

    def ids(self) -> list[str]:
        found = []
        for entry in sorted(self.directory.glob("*.json")):
            if _valid_id(entry.stem):
                found.append(entry.stem)
        return found

    def exists(self, session_id: str) -> bool:
        return _valid_id(session_id) and self._file(session_id).exists()

    def save(self, session: Session, session_id: str | None = None) -> str:
        """Persist a snapshot; returns the session id once it is durable."""
        if session_id is None:
            session_id = secrets.token_hex(16)
        elif not _valid_id(session_id):
            raise StoreError(f"invalid session id {session_id!r}", code="unknown_session")
        payload = json.dumps(
            session_to_dict(session), ensure_ascii=False, sort_keys=True, indent=1
        ).encode("utf-8")
        target = self._file(session_id)
        tmp = target.with_suffix(".tmp")
        try:
            fd = os.open(tmp, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
            try:
                os.write(fd, payload)
                os.fsync(fd)
            finally:
                os.close(fd)
            os.replace(tmp, target)
        except OSError as exc:
            raise StoreError(f"storage failure: cannot write {target}: {exc}") from exc
        return session_id

    def restore(self, session_id: str, bank: QuestionBank) -> Session:
        """Load a snapshot and re-verify it by replay before returning."""
        if not _valid_id(session_id) or not self._file(session_id).exists():
            raise StoreError(f"unknown session id {session_id!r}", code="unknown_session")
        try:
            raw = self._file(session_id).read_bytes()
        except OSError as exc:
            raise StoreError(f"storage failure: cannot read snapshot: {exc}") from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise StoreError(
                f"corrupt snapshot {session_id}: {exc}", code="corrupt_snapshot"
            ) from exc
        try:
            return session_from_dict(bank, data, verify=True)
        except SnapshotError as exc:
            raise StoreError(
                f"corrupt snapshot {session_id}: {exc}", code="corrupt_snapshot"
            ) from exc

    def delete(self, session_id: str) -> None:
        if not _valid_id(session_id) or not self._file(session_id).exists():
            raise StoreError(f"unknown session id {session_id!r}", code="unknown_session")
        try:
            self._file(session_id).unlink()
        except OSError as exc:
            raise StoreError(f"storage failure: cannot delete snapshot: {exc}") from exc


def persist_session(store: SessionStore, session: Session, session_id: str | None = None) -> str:
    return store.save(session, session_id)


def restore_session(store: SessionStore, session_id: str, bank: QuestionBank) -> Session:
    return store.restore(session_id, bank)
