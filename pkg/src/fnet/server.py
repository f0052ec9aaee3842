"""HTTP service over a loaded knowledge base and partition.

The server is read-only with respect to the knowledge base; all mutable
state lives in the session registry.  Session ids are unguessable, idle
sessions are evicted, and each session processes at most one mutation at a
time: a mutation arriving while another is in flight is refused rather than
queued, so concurrent rejects cannot double-advance a dialog.
"""

from __future__ import annotations

import threading
import time
from collections import OrderedDict
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .errors import FnetError
from .model import KIND_GOALS, KIND_OBJECTS, KnowledgeBase
from .partition import Partition
from .session import MODES, MODE_ROUTED, Session, SessionLog, start_session
from .similarity import UnmatchedPolicy, sim_entities
from .store import (
    ValidationError,
    entity_document,
    parse_query,
    partition_to_document,
    round_score,
)


class UnknownSessionError(FnetError):
    code = "unknown-session"


class SessionGoneError(FnetError):
    code = "session-gone"


class SessionBusyError(FnetError):
    code = "session-busy"


class MalformedBodyError(FnetError):
    code = "malformed-body"


_STATUS_BY_CODE = {
    "unknown-entity": 404,
    "unknown-session": 404,
    "session-gone": 404,
    "partition-not-found": 404,
    "unknown-pivot": 404,
    "session-not-active": 409,
    "session-busy": 409,
}


class PartitionNotFoundError(FnetError):
    code = "partition-not-found"


@dataclass
class _Entry:
    session: Session
    lock: threading.Lock
    deadline: float


class SessionRegistry:
    """Holds live sessions, enforces per-session mutual exclusion and idle eviction."""

    def __init__(self, timeout: float = 1800.0, max_tombstones: int = 4096):
        self.timeout = timeout
        self._entries: dict[str, _Entry] = {}
        self._gone: OrderedDict[str, None] = OrderedDict()
        self._max_tombstones = max_tombstones
        self._lock = threading.Lock()

    def _now(self) -> float:
        return time.monotonic()

    def _bury(self, session_id: str) -> None:
        self._entries.pop(session_id, None)
        self._gone[session_id] = None
        while len(self._gone) > self._max_tombstones:
            self._gone.popitem(last=False)

    def _sweep(self) -> None:
        now = self._now()
        for session_id in [sid for sid, entry in self._entries.items() if entry.deadline <= now]:
            self._bury(session_id)

    def add(self, session: Session) -> None:
        with self._lock:
            self._sweep()
            self._entries[session.id] = _Entry(
                session=session, lock=threading.Lock(), deadline=self._now() + self.timeout
            )

    def _entry(self, session_id: str) -> _Entry:
        entry = self._entries.get(session_id)
        if entry is None or entry.deadline <= self._now():
            if entry is not None:
                self._bury(session_id)
            if session_id in self._gone:
                raise SessionGoneError(f"session {session_id!r} was evicted or deleted")
            raise UnknownSessionError(f"no session {session_id!r}")
        return entry

    def peek(self, session_id: str) -> tuple[Session, threading.Lock]:
        """Look up a session for reading; the caller takes the lock briefly."""
        with self._lock:
            entry = self._entry(session_id)
            entry.deadline = self._now() + self.timeout
            return entry.session, entry.lock

    def claim(self, session_id: str) -> tuple[Session, threading.Lock]:
        """Look up a session for mutation and take its lock without waiting.

        Raises SessionBusyError when another mutation holds the lock.
        """
        with self._lock:
            entry = self._entry(session_id)
            if not entry.lock.acquire(blocking=False):
                raise SessionBusyError(f"session {session_id!r} is processing another request")
            entry.deadline = self._now() + self.timeout
            return entry.session, entry.lock

    def evict(self, session_id: str) -> None:
        with self._lock:
            self._entry(session_id)
            self._bury(session_id)


# ---------------------------------------------------------------------------
# payload shaping
# ---------------------------------------------------------------------------


def _candidate_document(candidate) -> dict:
    return {"name": candidate.name, "score": round_score(candidate.score), "level": candidate.level}


def _session_document(session: Session) -> dict:
    doc = {
        "session_id": session.id,
        "state": session.state,
        "mode": session.mode,
        "kind": session.query.kind,
        "label": session.query.label,
        "route": list(session.route),
        "visited_levels": list(session.visited_levels),
        "evaluations": session.evaluations,
        "presented": [_candidate_document(c) for c in session.presented],
        "incomparable": list(session.incomparable),
        "accepted": None if session.accepted is None else _candidate_document(session.accepted),
    }
    current = session.current
    doc["candidate"] = None if current is None else _candidate_document(current)
    return doc


def _step_document(candidate) -> dict:
    if candidate is None:
        return {"exhausted": True}
    return {"candidate": _candidate_document(candidate)}


# ---------------------------------------------------------------------------
# application factory
# ---------------------------------------------------------------------------


def create_app(
    kb: KnowledgeBase,
    partition: Partition,
    *,
    cors_origin: str | None = None,
    session_timeout: float = 1800.0,
    logger: SessionLog | None = None,
) -> FastAPI:
    app = FastAPI(title="fnet", docs_url=None, redoc_url=None, openapi_url=None)
    registry = SessionRegistry(timeout=session_timeout)
    app.state.kb = kb
    app.state.partition = partition
    app.state.registry = registry

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.middleware("http")
    async def stamp_fingerprint(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-KB-Fingerprint"] = kb.fingerprint
        return response

    @app.exception_handler(FnetError)
    async def handle_domain_error(request: Request, exc: FnetError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content=exc.to_document())

    @app.exception_handler(RequestValidationError)
    async def handle_malformed(request: Request, exc: RequestValidationError):
        error = MalformedBodyError("request body is not a JSON object of the expected shape")
        return JSONResponse(status_code=400, content=error.to_document())

    # -- knowledge base ------------------------------------------------------

    @app.get("/v1/kb")
    def get_kb():
        return {
            "name": kb.name,
            "version": kb.version,
            "fingerprint": kb.fingerprint,
            "counts": {
                "objects": len(kb.objects),
                "goals": len(kb.goals),
                "instances": len(kb.instances),
            },
        }

    @app.get("/v1/kb/objects")
    def list_objects():
        return [entity_document(e) for e in kb.objects]

    @app.get("/v1/kb/goals")
    def list_goals():
        return [entity_document(e) for e in kb.goals]

    @app.get("/v1/kb/instances")
    def list_instances():
        return [entity_document(e) for e in kb.instances]

    @app.get("/v1/kb/objects/{name}")
    def get_object(name: str):
        return entity_document(kb.entity(KIND_OBJECTS, name))

    @app.get("/v1/kb/goals/{name}")
    def get_goal(name: str):
        return entity_document(kb.entity(KIND_GOALS, name))

    # -- similarity and partition -------------------------------------------

    @app.get("/v1/similarity")
    def get_similarity(kind: str, left: str, right: str, policy: str = UnmatchedPolicy.ZERO.value):
        try:
            chosen = UnmatchedPolicy(policy)
        except ValueError:
            raise MalformedBodyError(f"unknown policy {policy!r}") from None
        score = sim_entities(kb.entity(kind, left), kb.entity(kind, right), chosen)
        return {"kind": kind, "left": left, "right": right, "policy": chosen.value, "score": round_score(score)}

    @app.get("/v1/partition")
    def get_partition(kind: str | None = None):
        if kind is not None and kind != partition.kind:
            raise PartitionNotFoundError(f"server holds a {partition.kind!r} partition, not {kind!r}")
        return partition_to_document(partition)

    # -- sessions ------------------------------------------------------------

    @app.post("/v1/sessions", status_code=201)
    def create_session(payload: dict):
        if not isinstance(payload, dict):
            raise MalformedBodyError("request body must be a JSON object")
        mode = payload.get("mode", MODE_ROUTED)
        if mode not in MODES:
            raise MalformedBodyError(f"mode must be one of {MODES}, got {mode!r}")
        query_doc = {key: payload[key] for key in ("kind", "label", "description") if key in payload}
        try:
            query = parse_query(query_doc)
        except ValidationError as exc:
            raise MalformedBodyError(exc.message, detail=exc.detail) from None
        session, candidate = start_session(kb, partition, query, mode, logger)
        registry.add(session)
        doc = {"session_id": session.id, "evaluations": session.evaluations}
        doc.update(_step_document(candidate))
        return doc

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        session, lock = registry.peek(session_id)
        with lock:
            return _session_document(session)

    @app.post("/v1/sessions/{session_id}/reject")
    def reject_candidate(session_id: str):
        session, lock = registry.claim(session_id)
        try:
            candidate = session.reject()
            doc = _step_document(candidate)
            doc["evaluations"] = session.evaluations
            return doc
        finally:
            lock.release()

    @app.post("/v1/sessions/{session_id}/accept")
    def accept_candidate(session_id: str):
        session, lock = registry.claim(session_id)
        try:
            record = session.accept()
            return {
                "query_label": record.query_label,
                "entity": record.entity,
                "score": round_score(record.score),
                "rejections": record.rejections,
                "evaluations": record.evaluations,
            }
        finally:
            lock.release()

    @app.delete("/v1/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        registry.evict(session_id)

    return app
