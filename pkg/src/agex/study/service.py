"""Study service: sessions, blinded pair serving, response recording, exports.

Participants see only opaque image ids; ground-truth ages live in the
study definition and leave the service solely through the admin truths
export.
"""

from __future__ import annotations

import csv
import io
import threading
import uuid
from pathlib import Path

import numpy as np

from ..phantom.dataset import image_array, to_png_bytes
from ..phantom.manifest import ManifestRecord, read_manifest
from .create import create_study
from .schema import RankResponse, Session, StudyDefinition, StudyPair
from .store import StudyStore

RESPONSES_COLUMNS = ["session_id", "participant_id", "pair_id", "choice",
                     "age_estimate_years", "estimated_image", "elapsed_ms"]
TRUTHS_COLUMNS = ["pair_id", "image_a_id", "image_b_id", "true_age_a", "true_age_b",
                  "separation_years", "separation_bucket"]


class ConflictError(Exception):
    """Duplicate or out-of-order submission."""


class StudyService:
    def __init__(self, data_dir: str | Path, store_dir: str | Path | None = None):
        self.data_dir = Path(data_dir)
        manifest_path = self.data_dir / "manifest.csv"
        if not manifest_path.exists():
            raise FileNotFoundError(f"no manifest.csv under {self.data_dir}")
        self.manifest = read_manifest(manifest_path)
        self._records = {r.image_id: r for r in self.manifest}
        self.store = StudyStore(store_dir or (self.data_dir / "studies"))
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- studies --------------------------------------------------------------

    def create_study(self, pairs_per_bucket: int = 40, bucket_width_years: float = 2.0,
                     n_buckets: int = 5, seed: int = 0,
                     study_id: str | None = None) -> StudyDefinition:
        definition = create_study(self.manifest, pairs_per_bucket=pairs_per_bucket,
                                  bucket_width_years=bucket_width_years,
                                  n_buckets=n_buckets, seed=seed, study_id=study_id)
        self.store.create_study(definition)
        return definition

    def study(self, study_id: str) -> StudyDefinition:
        return self.store.state(study_id).definition

    # -- sessions ---------------------------------------------------------------

    def start_session(self, study_id: str, participant_id: str,
                      seed: int | None = None) -> Session:
        definition = self.study(study_id)  # raises KeyError for unknown study
        if seed is None:
            seed = int(uuid.uuid4().int % (2 ** 63))
        rng = np.random.default_rng(seed)
        pair_ids = [p.pair_id for p in definition.pairs]
        order = [pair_ids[i] for i in rng.permutation(len(pair_ids))]
        session = Session(
            session_id=f"sess-{uuid.uuid4().hex[:12]}",
            study_id=study_id,
            participant_id=participant_id,
            pair_order=order,
            left_is_a={pid: bool(rng.random() < 0.5) for pid in order},
            estimate_on_a={pid: bool(rng.random() < 0.5) for pid in order},
        )
        self.store.add_session(session)
        return session

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._session_locks.setdefault(session_id, threading.Lock())

    def next_pair(self, session_id: str) -> dict:
        """Presentation payload for the pair at the cursor; never contains ages."""
        study_id, session = self.store.find_session(session_id)
        definition = self.study(study_id)
        with self._session_lock(session_id):
            if session.cursor >= len(session.pair_order):
                return {"done": True, "responses": len(session.responded),
                        "total": len(session.pair_order)}
            pair = definition.pair(session.pair_order[session.cursor])
            left_is_a = session.left_is_a[pair.pair_id]
            left = pair.image_a_id if left_is_a else pair.image_b_id
            right = pair.image_b_id if left_is_a else pair.image_a_id
            estimate_on_a = session.estimate_on_a[pair.pair_id]
            estimate_side = "left" if estimate_on_a == left_is_a else "right"
            return {
                "done": False,
                "pair_id": pair.pair_id,
                "left_image_id": left,
                "right_image_id": right,
                "estimate_side": estimate_side,
                "index": session.cursor,
                "total": len(session.pair_order),
            }

    def submit_response(self, session_id: str, pair_id: str, choice: str,
                        age_estimate_years: float | None = None,
                        elapsed_ms: int = 0) -> dict:
        """Record one judgment. `choice` is presentation-relative
        (left / right / not_sure) and is stored canonically."""
        study_id, session = self.store.find_session(session_id)
        definition = self.study(study_id)
        with self._session_lock(session_id):
            if pair_id in session.responded:
                raise ConflictError(f"pair {pair_id} already answered in this session")
            if session.cursor >= len(session.pair_order) \
                    or session.pair_order[session.cursor] != pair_id:
                expected = (session.pair_order[session.cursor]
                            if session.cursor < len(session.pair_order) else None)
                raise ConflictError(f"out-of-order submission for {pair_id}; "
                                    f"session cursor is at {expected}")
            definition.pair(pair_id)  # KeyError for foreign pair ids
            left_is_a = session.left_is_a[pair_id]
            if choice == "not_sure":
                canonical = "not_sure"
            elif choice in ("left", "right"):
                chose_a = (choice == "left") == left_is_a
                canonical = "first_older" if chose_a else "second_older"
            else:
                raise ValueError(f"choice must be left/right/not_sure, got {choice!r}")
            estimated_image = None
            if age_estimate_years is not None:
                estimated_image = "first" if session.estimate_on_a[pair_id] else "second"
            response = RankResponse(session_id=session_id, pair_id=pair_id,
                                    choice=canonical,
                                    age_estimate_years=age_estimate_years,
                                    estimated_image=estimated_image,
                                    elapsed_ms=elapsed_ms)
            self.store.add_response(study_id, response)
            return {"ok": True, "cursor": session.cursor,
                    "remaining": len(session.pair_order) - session.cursor}

    # -- images -------------------------------------------------------------------

    def image_png(self, image_id: str, resolution: int | None = None) -> bytes:
        if image_id not in self._records:
            raise KeyError(f"unknown image {image_id!r}")
        record = self._records[image_id]
        path = Path(self.data_dir) / record.file_path if record.file_path else None
        if path is not None and path.exists():
            return path.read_bytes()
        # manifest without materialized files: re-render on the fly
        return to_png_bytes(image_array(record, resolution or 64, self.data_dir))

    # -- exports ----------------------------------------------------------------

    def export_responses_csv(self, study_id: str) -> str:
        state = self.store.state(study_id)
        participants = {s.session_id: s.participant_id for s in state.sessions.values()}
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RESPONSES_COLUMNS)
        for r in state.responses:
            writer.writerow([
                r.session_id, participants.get(r.session_id, ""), r.pair_id, r.choice,
                "" if r.age_estimate_years is None else f"{r.age_estimate_years:g}",
                r.estimated_image or "", r.elapsed_ms,
            ])
        return buf.getvalue()

    def truths_csv(self, study_id: str) -> str:
        definition = self.study(study_id)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRUTHS_COLUMNS)
        for p in definition.pairs:
            writer.writerow([p.pair_id, p.image_a_id, p.image_b_id,
                             f"{p.true_age_a:.4f}", f"{p.true_age_b:.4f}",
                             f"{p.separation_years:.4f}", p.separation_bucket])
        return buf.getvalue()

    def responses(self, study_id: str) -> list[RankResponse]:
        return list(self.store.state(study_id).responses)

    def truths(self, study_id: str) -> dict[str, StudyPair]:
        return {p.pair_id: p for p in self.study(study_id).pairs}

    def record(self, image_id: str) -> ManifestRecord:
        return self._records[image_id]
