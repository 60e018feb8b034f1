"""Session and job storage, optionally persisted to a directory.

The store is the only stateful part of the service. With a directory
configured, every session and job document is written through on mutation,
so a restarted server answers all GET requests exactly as before. Jobs that
were mid-run at shutdown stay marked Running; re-submitting the fit is the
recovery path.

A single re-entrant lock guards the maps; per-session single-writer
semantics come from the active-job rule (at most one non-terminal job per
session, enforced in :meth:`Store.begin_job`).
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..dataio import session_from_doc, session_to_doc
from ..pes import PesSession

_STATUS_ORDER = {"Queued": 0, "Running": 1, "Done": 2, "Failed": 2}


@dataclass
class Job:
    job_id: str
    kind: str
    session_id: str
    status: str = "Queued"
    progress: float = 0.0
    error: str | None = None
    result: dict | None = None
    created_at: float = field(default_factory=time.time)

    def advance(self, status: str) -> None:
        if _STATUS_ORDER[status] < _STATUS_ORDER[self.status]:
            raise ValueError(f"job status may not go {self.status} -> {status}")
        self.status = status

    def to_doc(self) -> dict:
        return {
            "kind": "job",
            "job_id": self.job_id,
            "job_kind": self.kind,
            "session_id": self.session_id,
            "status": self.status,
            "progress": self.progress,
            "error": self.error,
            "result": self.result,
            "created_at": self.created_at,
        }

    @staticmethod
    def from_doc(doc: dict) -> "Job":
        return Job(
            job_id=doc["job_id"],
            kind=doc["job_kind"],
            session_id=doc["session_id"],
            status=doc["status"],
            progress=float(doc["progress"]),
            error=doc.get("error"),
            result=doc.get("result"),
            created_at=float(doc.get("created_at", 0.0)),
        )


class Store:
    def __init__(self, directory: str | Path | None = None):
        self.lock = threading.RLock()
        self._sessions: dict[str, PesSession] = {}
        self._jobs: dict[str, Job] = {}
        self._active: dict[str, str] = {}  # session_id -> running/queued job id
        self._dir = Path(directory) if directory else None
        if self._dir:
            (self._dir / "sessions").mkdir(parents=True, exist_ok=True)
            (self._dir / "jobs").mkdir(parents=True, exist_ok=True)
            self._load()

    def _load(self) -> None:
        for p in sorted((self._dir / "sessions").glob("*.json")):
            doc = json.loads(p.read_text(encoding="utf-8"))
            session = session_from_doc(doc)
            self._sessions[session.session_id] = session
        for p in sorted((self._dir / "jobs").glob("*.json")):
            job = Job.from_doc(json.loads(p.read_text(encoding="utf-8")))
            self._jobs[job.job_id] = job

    # -- sessions ----------------------------------------------------------

    def add_session(self, session: PesSession) -> None:
        with self.lock:
            self._sessions[session.session_id] = session
            self.persist_session(session.session_id)

    def get_session(self, session_id: str) -> PesSession | None:
        with self.lock:
            return self._sessions.get(session_id)

    def session_doc(self, session_id: str) -> dict | None:
        with self.lock:
            session = self._sessions.get(session_id)
            return session_to_doc(session) if session else None

    def persist_session(self, session_id: str) -> None:
        if not self._dir:
            return
        with self.lock:
            session = self._sessions[session_id]
            path = self._dir / "sessions" / f"{session_id}.json"
            path.write_text(
                json.dumps(session_to_doc(session), sort_keys=True),
                encoding="utf-8",
            )

    # -- jobs --------------------------------------------------------------

    def begin_job(self, session_id: str, kind: str) -> Job | None:
        """Create a Queued job unless the session already has one in flight."""
        with self.lock:
            active_id = self._active.get(session_id)
            if active_id is not None:
                active = self._jobs.get(active_id)
                if active and active.status in ("Queued", "Running"):
                    return None
            job = Job(job_id=uuid.uuid4().hex, kind=kind, session_id=session_id)
            self._jobs[job.job_id] = job
            self._active[session_id] = job.job_id
            self.persist_job(job.job_id)
            return job

    def get_job(self, job_id: str) -> Job | None:
        with self.lock:
            return self._jobs.get(job_id)

    def has_active_job(self, session_id: str) -> bool:
        with self.lock:
            active_id = self._active.get(session_id)
            if active_id is None:
                return False
            job = self._jobs.get(active_id)
            return bool(job and job.status in ("Queued", "Running"))

    def finish_job(self, job_id: str, *, result: dict | None, error: str | None) -> None:
        with self.lock:
            job = self._jobs[job_id]
            if error is None:
                job.result = result
                job.progress = 1.0
                job.advance("Done")
            else:
                job.error = error
                job.advance("Failed")
            self._active.pop(job.session_id, None)
            self.persist_job(job_id)

    def persist_job(self, job_id: str) -> None:
        if not self._dir:
            return
        with self.lock:
            job = self._jobs[job_id]
            path = self._dir / "jobs" / f"{job_id}.json"
            path.write_text(json.dumps(job.to_doc(), sort_keys=True), encoding="utf-8")
