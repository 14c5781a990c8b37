"""Log-structured single-directory persistence.

Layout:

    <dir>/journal.jsonl    append-only commit log, one JSON object per line
    <dir>/snapshot.json    periodic full-state snapshot with its commit seq

A commit is one line ``{"seq": N, "ops": [...]}`` written, flushed and
fsynced before the call returns; a torn trailing line (process died
mid-write) is discarded on load. Snapshots are written to a temp file and
renamed into place, after which the journal is truncated; every crash
window leaves either the old or the new snapshot plus a journal that
replays to the same state.

``kill_hook`` exists for crash-safety tests: it is invoked at named points
in the write path and may raise to simulate the process dying there.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Callable

JOURNAL_NAME = "journal.jsonl"
SNAPSHOT_NAME = "snapshot.json"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


class Journal:
    def __init__(
        self,
        directory: str | Path,
        snapshot_every: int = 500,
        kill_hook: Callable[[str, bytes | None], None] | None = None,
    ):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.journal_path = self.directory / JOURNAL_NAME
        self.snapshot_path = self.directory / SNAPSHOT_NAME
        self.snapshot_every = snapshot_every
        self.kill_hook = kill_hook
        self.last_seq = 0
        self._since_snapshot = 0
        self._fh = None
        self._valid_journal_bytes: int | None = None

    # -- loading ---------------------------------------------------------

    def load(self) -> tuple[dict[str, Any] | None, list[dict[str, Any]]]:
        """Return (snapshot state or None, committed transactions to replay)."""
        state = None
        snapshot_seq = 0
        if self.snapshot_path.exists():
            with open(self.snapshot_path, encoding="utf-8") as fh:
                snap = json.load(fh)
            state = snap["state"]
            snapshot_seq = snap["seq"]
        self.last_seq = snapshot_seq

        transactions: list[dict[str, Any]] = []
        self._valid_journal_bytes = 0
        if self.journal_path.exists():
            with open(self.journal_path, "rb") as fh:
                content = fh.read()
            # everything after the last newline is a torn write: the commit
            # was never acknowledged, so it is discarded (and truncated away
            # before the next append)
            self._valid_journal_bytes = content.rfind(b"\n") + 1
            for raw in content[: self._valid_journal_bytes].split(b"\n")[:-1]:
                tx = json.loads(raw.decode("utf-8"))
                if tx["seq"] <= snapshot_seq:
                    continue
                transactions.append(tx)
                self.last_seq = tx["seq"]
        return state, transactions

    # -- writing ---------------------------------------------------------

    def _file(self):
        if self._fh is None:
            if self._valid_journal_bytes is not None and self.journal_path.exists():
                if self.journal_path.stat().st_size > self._valid_journal_bytes:
                    with open(self.journal_path, "r+b") as fh:
                        fh.truncate(self._valid_journal_bytes)
            self._fh = open(self.journal_path, "ab")
            self._valid_journal_bytes = None
        return self._fh

    def _kill_point(self, stage: str, payload: bytes | None = None) -> None:
        if self.kill_hook is not None:
            self.kill_hook(stage, payload)

    def append(self, ops: list[dict[str, Any]]) -> int:
        """Durably append one transaction; returns its sequence number."""
        seq = self.last_seq + 1
        line = (canonical_json({"ops": ops, "seq": seq}) + "\n").encode("utf-8")
        fh = self._file()
        self._kill_point("append", line)
        fh.write(line)
        fh.flush()
        os.fsync(fh.fileno())
        self.last_seq = seq
        self._since_snapshot += 1
        return seq

    def should_snapshot(self) -> bool:
        return self._since_snapshot >= self.snapshot_every

    def write_snapshot(self, state: dict[str, Any]) -> None:
        """Atomically replace the snapshot, then truncate the journal."""
        payload = canonical_json({"seq": self.last_seq, "state": state}).encode("utf-8")
        tmp = self.snapshot_path.with_suffix(".tmp")
        self._kill_point("snapshot_tmp", payload)
        with open(tmp, "wb") as fh:
            fh.write(payload)
            fh.flush()
            os.fsync(fh.fileno())
        self._kill_point("snapshot_rename", None)
        os.replace(tmp, self.snapshot_path)
        self._kill_point("journal_truncate", None)
        if self._fh is not None:
            self._fh.close()
            self._fh = None
        with open(self.journal_path, "wb") as fh:
            fh.flush()
            os.fsync(fh.fileno())
        self._since_snapshot = 0

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None
