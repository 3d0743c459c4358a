from __future__ import annotations

import os

import pytest

from conftest import CLEAN_SEED_TRACE, run_trace
from policygen.engine import serialize_session, start_session, submit_answer
from policygen.errors import StoreError
from policygen.store import SessionStore, persist_session, restore_session


def test_save_returns_id_and_file_exists(tmp_path, seed_bank):
    store = SessionStore(tmp_path)
    session = start_session(seed_bank)
    session_id = persist_session(store, session)
    assert (tmp_path / f"{session_id}.json").exists()
    assert len(session_id) == 32


def test_save_restore_round_trip(tmp_path, seed_bank):
    store = SessionStore(tmp_path)
    session = run_trace(seed_bank, CLEAN_SEED_TRACE)
    session_id = store.save(session)
    restored = restore_session(store, session_id, seed_bank)
    assert serialize_session(restored) == serialize_session(session)


def test_second_save_reflects_mutation(tmp_path, seed_bank):
    store = SessionStore(tmp_path)
    session = start_session(seed_bank)
    session_id = store.save(session)
    submit_answer(seed_bank, session, "YES")
    store.save(session, session_id)
    restored = store.restore(session_id, seed_bank)
    assert restored.answers["Q104"].value == "YES"


def test_unknown_id_not_found(tmp_path, seed_bank):
    store = SessionStore(tmp_path)
    with pytest.raises(StoreError) as err:
        store.restore("0" * 32, seed_bank)
    assert err.value.code == "unknown_session"


def test_truncated_snapshot_fails_closed(tmp_path, seed_bank):
    store = SessionStore(tmp_path)
    session_id = store.save(start_session(seed_bank))
    path = tmp_path / f"{session_id}.json"
    path.write_bytes(path.read_bytes()[: len(path.read_bytes()) // 2])
    with pytest.raises(StoreError) as err:
        store.restore(session_id, seed_bank)
    assert err.value.code == "corrupt_snapshot"


def test_tampered_snapshot_fails_closed(tmp_path, seed_bank):
    import json

    store = SessionStore(tmp_path)
    session = run_trace(seed_bank, CLEAN_SEED_TRACE[:5])
    session_id = store.save(session)
    path = tmp_path / f"{session_id}.json"
    data = json.loads(path.read_text())
    data["cursor"] = "Q104"  # inconsistent with replay
    path.write_text(json.dumps(data))
    with pytest.raises(StoreError) as err:
        store.restore(session_id, seed_bank)
    assert err.value.code == "corrupt_snapshot"


def test_read_only_directory_is_storage_error(tmp_path, seed_bank):
    if os.geteuid() == 0:
        pytest.skip("permission bits do not apply to root")
    store = SessionStore(tmp_path)
    os.chmod(tmp_path, 0o500)
    try:
        with pytest.raises(StoreError):
            store.save(start_session(seed_bank))
    finally:
        os.chmod(tmp_path, 0o700)


def test_write_failure_raises_storage_error(tmp_path, seed_bank, monkeypatch):
    store = SessionStore(tmp_path)

    def boom(*args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(StoreError, match="storage failure"):
        store.save(start_session(seed_bank))


def test_delete_and_ids(tmp_path, seed_bank):
    store = SessionStore(tmp_path)
    first = store.save(start_session(seed_bank))
    second = store.save(start_session(seed_bank))
    assert set(store.ids()) == {first, second}
    store.delete(first)
    assert store.ids() == [second]
    with pytest.raises(StoreError):
        store.delete(first)


def test_ids_are_unique_and_random(tmp_path, seed_bank):
    store = SessionStore(tmp_path)
    ids = {store.save(start_session(seed_bank)) for _ in range(20)}
    assert len(ids) == 20
