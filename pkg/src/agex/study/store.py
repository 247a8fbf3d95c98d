"""Crash-safe persistence: one append-only JSON-lines event log per study,
with periodic snapshot compaction.

Every mutation is one event appended with flush+fsync before the caller
sees an acknowledgment, so state rebuilds exactly after a hard kill.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..utils import atomic_write_text
from .schema import RankResponse, Session, StudyDefinition

SNAPSHOT_FILE = "snapshot.json"
EVENTS_FILE = "events.jsonl"
COMPACT_EVERY = 500


@dataclass
class StudyState:
    definition: StudyDefinition
    sessions: dict[str, Session] = field(default_factory=dict)
    responses: list[RankResponse] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "definition": self.definition.to_dict(),
            "sessions": [s.to_dict() for s in self.sessions.values()],
            "responses": [r.to_dict() for r in self.responses],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StudyState":
        state = cls(definition=StudyDefinition.from_dict(d["definition"]))
        for s in d.get("sessions", []):
            sess = Session.from_dict(s)
            state.sessions[sess.session_id] = sess
        state.responses = [RankResponse.from_dict(r) for r in d.get("responses", [])]
        return state


class StudyStore:
    """Holds all studies under `root`; one directory per study."""

    def __init__(self, root: str | Path, compact_every: int = COMPACT_EVERY):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.compact_every = compact_every
        self._lock = threading.RLock()
        self._states: dict[str, StudyState] = {}
        self._events_since_compact: dict[str, int] = {}
        for study_dir in sorted(self.root.iterdir()):
            if (study_dir / EVENTS_FILE).exists() or (study_dir / SNAPSHOT_FILE).exists():
                self._load(study_dir.name)

    # -- event application ------------------------------------------------

    def _apply(self, state: StudyState | None, event: dict) -> StudyState:
        kind = event["event"]
        if kind == "study_created":
            return StudyState(definition=StudyDefinition.from_dict(event["definition"]))
        if state is None:
            raise ValueError("event log does not start with study_created")
        if kind == "session_started":
            sess = Session.from_dict(event["session"])
            state.sessions[sess.session_id] = sess
        elif kind == "response_recorded":
            resp = RankResponse.from_dict(event["response"])
            sess = state.sessions[resp.session_id]
            sess.responded.add(resp.pair_id)
            sess.cursor += 1
            state.responses.append(resp)
        else:
            raise ValueError(f"unknown event type {kind!r}")
        return state

    def _load(self, study_id: str) -> None:
        study_dir = self.root / study_id
        state: StudyState | None = None
        snap = study_dir / SNAPSHOT_FILE
        if snap.exists():
            state = StudyState.from_dict(json.loads(snap.read_text()))
        events = study_dir / EVENTS_FILE
        n = 0
        if events.exists():
            with open(events, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    state = self._apply(state, json.loads(line))
                    n += 1
        if state is None:
            raise ValueError(f"study {study_id} has no snapshot and no events")
        self._states[study_id] = state
        self._events_since_compact[study_id] = n

    def _append(self, study_id: str, event: dict) -> None:
        path = self.root / study_id / EVENTS_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        count = self._events_since_compact.get(study_id, 0) + 1
        self._events_since_compact[study_id] = count
        if count >= self.compact_every:
            self.compact(study_id)

    def compact(self, study_id: str) -> None:
        """Fold the event log into a snapshot and truncate it."""
        with self._lock:
            state = self._states[study_id]
            atomic_write_text(self.root / study_id / SNAPSHOT_FILE,
                              json.dumps(state.to_dict()))
            atomic_write_text(self.root / study_id / EVENTS_FILE, "")
            self._events_since_compact[study_id] = 0

    # -- public mutations --------------------------------------------------

    def create_study(self, definition: StudyDefinition) -> None:
        with self._lock:
            if definition.study_id in self._states:
                raise ValueError(f"study {definition.study_id} already exists")
            event = {"event": "study_created", "definition": definition.to_dict()}
            self._states[definition.study_id] = self._apply(None, event)
            self._append(definition.study_id, event)

    def add_session(self, session: Session) -> None:
        with self._lock:
            state = self.state(session.study_id)
            if session.session_id in state.sessions:
                raise ValueError(f"session {session.session_id} already exists")
            event = {"event": "session_started", "session": session.to_dict()}
            self._apply(state, event)
            self._append(session.study_id, event)

    def add_response(self, study_id: str, response: RankResponse) -> None:
        with self._lock:
            state = self.state(study_id)
            event = {"event": "response_recorded", "response": response.to_dict()}
            self._apply(state, event)
            self._append(study_id, event)

    # -- reads ---------------------------------------------------------------

    def state(self, study_id: str) -> StudyState:
        with self._lock:
            if study_id not in self._states:
                raise KeyError(f"unknown study {study_id!r}")
            return self._states[study_id]

    def study_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._states)

    def find_session(self, session_id: str) -> tuple[str, Session]:
        with self._lock:
            for study_id, state in self._states.items():
                if session_id in state.sessions:
                    return study_id, state.sessions[session_id]
            raise KeyError(f"unknown session {session_id!r}")
