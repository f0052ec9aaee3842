"""Interactive query resolution over a partitioned knowledge base.

A session takes a partial description (the query) and presents candidate
entities one at a time, best first, until the user accepts one or the
candidate pool runs dry.  Routed mode scores the query against the four
class references, then walks the classes in that order, ranking one class
at a time; classes the user never reaches are never evaluated.  Exhaustive
mode ranks the whole knowledge base up front.

Queries are partial, so candidate ranking always ignores parts the query
does not mention.
"""

from __future__ import annotations

import logging
import secrets
from dataclasses import dataclass, field

from .core import DEGREE_DECIMALS, normalize_label
from .errors import (
    ComparisonError,
    EmptyPartitionError,
    FingerprintMismatchError,
    NoCurrentCandidateError,
    QueryKindMismatchError,
    SessionNotActiveError,
)
from .model import KIND_GOALS, KIND_OBJECTS, FuzzyObject, Goal, KnowledgeBase
from .partition import Partition
from .similarity import UnmatchedPolicy, sim_entities

log = logging.getLogger(__name__)

MODE_ROUTED = "routed"
MODE_EXHAUSTIVE = "exhaustive"
MODES = (MODE_ROUTED, MODE_EXHAUSTIVE)

STATE_ACTIVE = "active"
STATE_ACCEPTED = "accepted"
STATE_EXHAUSTED = "exhausted"

QUERY_KINDS = (KIND_OBJECTS, KIND_GOALS)


@dataclass(frozen=True)
class Query:
    """A partial description to resolve: object-shaped or goal-shaped.

    The description carries possible degrees only; at least one attribute
    or facet must be present.
    """

    kind: str
    description: FuzzyObject | Goal
    label: str = "query"

    def __post_init__(self):
        if self.kind not in QUERY_KINDS:
            raise ValueError(f"query kind must be one of {QUERY_KINDS}, got {self.kind!r}")
        if self.kind == KIND_GOALS:
            if not isinstance(self.description, Goal):
                raise ValueError("a goals query needs a goal-shaped description")
            bad = any(f.has_necessary() for f in self.description.facets.values())
        else:
            if not isinstance(self.description, FuzzyObject):
                raise ValueError("an objects query needs an object-shaped description")
            bad = any(
                v.has_necessary()
                for attr in self.description.attributes.values()
                for v in attr.iter_values()
            )
        if bad:
            raise ValueError("a query description must not carry necessary degrees")
        object.__setattr__(self, "label", normalize_label(self.label))


@dataclass(frozen=True)
class Candidate:
    """One presented entity: its name, score against the query, class level."""

    name: str
    score: float
    level: int | None = None


@dataclass(frozen=True)
class ResolutionRecord:
    """The outcome of an accepted session."""

    query_label: str
    entity: str
    score: float
    rejections: int
    evaluations: int


def _rank(scored: list[Candidate]) -> list[Candidate]:
    return sorted(scored, key=lambda c: (-c.score, c.name))


class SessionLog:
    """Line-delimited JSON event sink for session activity."""

    def __init__(self, stream):
        self._stream = stream

    def emit(self, event: str, payload: dict) -> None:
        import json
        from datetime import datetime, timezone

        record = {"ts": datetime.now(timezone.utc).isoformat(), "event": event}
        record.update(payload)
        self._stream.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
        self._stream.flush()


@dataclass
class Session:
    """State of one resolution dialog.

    Active until accepted or exhausted; every presented candidate is unique
    and, in routed mode, classes are evaluated only when reached.
    """

    id: str
    query: Query
    mode: str
    kb: KnowledgeBase = field(repr=False)
    partition: Partition = field(repr=False)
    route: tuple[int, ...] = ()
    state: str = STATE_ACTIVE
    presented: list[Candidate] = field(default_factory=list)
    accepted: Candidate | None = None
    evaluations: int = 0
    incomparable: list[str] = field(default_factory=list)
    visited_levels: list[int] = field(default_factory=list)
    logger: SessionLog | None = field(default=None, repr=False)
    _queue: list[Candidate] = field(default_factory=list, repr=False)
    _queue_pos: int = 0
    _route_pos: int = 0

    # -- read access ---------------------------------------------------------

    @property
    def current(self) -> Candidate | None:
        if self.state == STATE_EXHAUSTED:
            return None
        return self.presented[-1] if self.presented else None

    @property
    def rejections(self) -> int:
        return max(len(self.presented) - 1, 0) if self.state != STATE_EXHAUSTED else len(self.presented)

    # -- internals -----------------------------------------------------------

    def _emit(self, event: str, payload: dict) -> None:
        if self.logger is not None:
            record = {"session": self.id, "label": self.query.label}
            record.update(payload)
            self.logger.emit(event, record)

    def _score_entity(self, entity) -> float | None:
        self.evaluations += 1
        try:
            return sim_entities(self.query.description, entity, UnmatchedPolicy.IGNORE)
        except ComparisonError:
            self.incomparable.append(entity.name)
            return None

    def _load_class(self, level: int) -> None:
        self.visited_levels.append(level)
        scored: list[Candidate] = []
        for name, _ in self.partition.class_at(level).members:
            entity = self.kb.entity(self.partition.kind, name)
            score = self._score_entity(entity)
            if score is not None:
                scored.append(Candidate(name=name, score=score, level=level))
        self._queue = _rank(scored)
        self._queue_pos = 0

    def _next_candidate(self) -> Candidate | None:
        while True:
            if self._queue_pos < len(self._queue):
                candidate = self._queue[self._queue_pos]
                self._queue_pos += 1
                return candidate
            if self._route_pos >= len(self.route):
                return None
            level = self.route[self._route_pos]
            self._route_pos += 1
            self._load_class(level)

    def _present_or_exhaust(self) -> Candidate | None:
        candidate = self._next_candidate()
        if candidate is None:
            self.state = STATE_EXHAUSTED
            self._emit("exhausted", {"evaluations": self.evaluations})
            return None
        self.presented.append(candidate)
        self._emit(
            "presented",
            {"entity": candidate.name, "score": round(candidate.score, DEGREE_DECIMALS), "level": candidate.level},
        )
        return candidate

    # -- transitions ---------------------------------------------------------

    def reject(self) -> Candidate | None:
        """Turn down the current candidate and present the next best one."""
        if self.state != STATE_ACTIVE:
            raise SessionNotActiveError(f"session is {self.state}")
        rejected = self.current
        if rejected is not None:
            self._emit("rejected", {"entity": rejected.name})
        return self._present_or_exhaust()

    def accept(self) -> ResolutionRecord:
        """Accept the current candidate and close the session."""
        if self.state != STATE_ACTIVE:
            raise SessionNotActiveError(f"session is {self.state}")
        candidate = self.current
        if candidate is None:
            raise NoCurrentCandidateError("session has no candidate on offer")
        self.state = STATE_ACCEPTED
        self.accepted = candidate
        record = ResolutionRecord(
            query_label=self.query.label,
            entity=candidate.name,
            score=candidate.score,
            rejections=len(self.presented) - 1,
            evaluations=self.evaluations,
        )
        self._emit(
            "accepted",
            {
                "entity": record.entity,
                "score": round(record.score, DEGREE_DECIMALS),
                "rejections": record.rejections,
                "evaluations": record.evaluations,
            },
        )
        return record


def _routed_route(session: Session) -> tuple[int, ...]:
    """Order classes by the query's similarity to each class reference.

    Each reference comparison counts as one evaluation.  References the
    query cannot be compared to sort last; ties go to the higher level.
    """
    scored: list[tuple[int, float, int]] = []
    for cls in session.partition.classes:
        session.evaluations += 1
        try:
            score = sim_entities(session.query.description, cls.reference.entity, UnmatchedPolicy.IGNORE)
            scored.append((0, score, cls.level))
        except ComparisonError:
            scored.append((1, 0.0, cls.level))
    ordered = sorted(scored, key=lambda item: (item[0], -item[1], -item[2]))
    return tuple(level for _, _, level in ordered)


def start_session(
    kb: KnowledgeBase,
    partition: Partition,
    query: Query,
    mode: str = MODE_ROUTED,
    logger: SessionLog | None = None,
) -> tuple[Session, Candidate | None]:
    """Open a session and present the first candidate.

    Returns the session plus the first candidate, or None when the pool is
    empty from the start (the session is then already exhausted).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if partition.kb_fingerprint != kb.fingerprint:
        raise FingerprintMismatchError(
            "partition was built from a different knowledge base",
            detail={"partition": partition.kb_fingerprint, "kb": kb.fingerprint},
        )
    if query.kind != partition.kind:
        raise QueryKindMismatchError(f"query kind {query.kind!r} does not match partition kind {partition.kind!r}")
    if partition.size() == 0:
        raise EmptyPartitionError("partition holds no entities")

    session = Session(
        id=secrets.token_urlsafe(16),
        query=query,
        mode=mode,
        kb=kb,
        partition=partition,
        logger=logger,
    )
    if mode == MODE_ROUTED:
        session.route = _routed_route(session)
    else:
        scored: list[Candidate] = []
        for entity in kb.entities(query.kind):
            score = session._score_entity(entity)
            if score is not None:
                scored.append(
                    Candidate(name=entity.name, score=score, level=partition.assignment.get(entity.name))
                )
        session._queue = _rank(scored)
        session.route = ()
    session._emit(
        "started",
        {"kind": query.kind, "mode": mode, "route": list(session.route), "kb_fingerprint": kb.fingerprint},
    )
    first = session._present_or_exhaust()
    log.debug("session %s started: mode=%s first=%s", session.id, mode, first)
    return session, first


def exhaustive_resolve(
    kb: KnowledgeBase,
    query: Query,
    policy: UnmatchedPolicy = UnmatchedPolicy.IGNORE,
) -> list[Candidate]:
    """Score every comparable entity of the query's kind, best first.

    Entities that admit no comparison with the query are left out.  Ties
    break by entity name ascending.  Candidates carry no class level since
    no partition is involved.
    """
    scored: list[Candidate] = []
    for entity in kb.entities(query.kind):
        try:
            score = sim_entities(query.description, entity, policy)
        except ComparisonError:
            continue
        scored.append(Candidate(name=entity.name, score=score))
    return _rank(scored)
