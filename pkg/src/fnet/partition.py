"""Similarity classes: banded partitioning of a knowledge base.

The unit interval splits into four similarity bands.  For each band a
reference entity is synthesized over the union schema of the knowledge base,
with every degree equal to the band midpoint; an entity joins the class
whose reference it resembles at a degree inside that class's band.  An
alternative partitioning measures every entity against a chosen pivot entity
and bins the scores by band directly.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .core import DEGREE_DECIMALS, FuzzySet
from .errors import EmptyKindError, SchemaConflictError, UnknownEntityError, UnknownPivotError
from .model import (
    COMPOSITE,
    KIND_GOALS,
    KIND_INSTANCES,
    SIMPLE,
    Attribute,
    FuzzyInstance,
    FuzzyObject,
    FuzzyValue,
    Goal,
    KnowledgeBase,
    ORIGIN_SYSTEM,
)
from .similarity import UnmatchedPolicy, sim_entities

LEVELS = (1, 2, 3, 4)


@dataclass(frozen=True)
class SimilarityBand:
    """One slice of the unit interval; only the top band includes its upper bound."""

    level: int
    lo: float
    hi: float
    hi_inclusive: bool = False

    def contains(self, score: float) -> bool:
        if score < self.lo:
            return False
        if score < self.hi:
            return True
        return self.hi_inclusive and score <= self.hi

    def distance(self, score: float) -> float:
        """Distance from a score to the band interval, 0 inside."""
        if score < self.lo:
            return self.lo - score
        if score > self.hi:
            return score - self.hi
        return 0.0

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2.0


def standard_bands() -> tuple[SimilarityBand, ...]:
    """The four standard bands covering [0, 1] without gaps or overlaps."""
    return (
        SimilarityBand(1, 0.0, 0.25),
        SimilarityBand(2, 0.25, 0.5),
        SimilarityBand(3, 0.5, 0.75),
        SimilarityBand(4, 0.75, 1.0, hi_inclusive=True),
    )


@dataclass(frozen=True)
class ReferenceEntity:
    """A synthetic prototype for one band: every degree equals the band midpoint."""

    level: int
    entity: FuzzyObject | Goal


# ---------------------------------------------------------------------------
# union schema and reference construction
# ---------------------------------------------------------------------------


def _object_schema(entities: Sequence[FuzzyObject]) -> dict[str, tuple[str, object]]:
    """Merge attribute structure across entities: name -> (kind, labels).

    Simple attributes map to the set of observed value labels, composite
    ones to a map of value label -> set of observed labels.
    """
    schema: dict[str, tuple[str, object]] = {}
    for entity in entities:
        for attr in entity.attributes.values():
            held = schema.get(attr.name)
            if held is None:
                held = (attr.kind, set() if attr.kind == SIMPLE else {})
                schema[attr.name] = held
            if held[0] != attr.kind:
                raise SchemaConflictError(
                    f"attribute {attr.name!r} is {held[0]} in one entity and {attr.kind} in another"
                )
            if attr.kind == SIMPLE:
                held[1].update(attr.value.possible.support())
            else:
                for label, sub in attr.values.items():
                    held[1].setdefault(label, set()).update(sub.possible.support())
    return schema


def _goal_schema(entities: Sequence[Goal]) -> dict[str, set[str]]:
    schema: dict[str, set[str]] = {}
    for goal in entities:
        for label, facet in goal.facets.items():
            schema.setdefault(label, set()).update(facet.possible.support())
    return schema


def _flat(labels, degree: float) -> FuzzySet:
    return FuzzySet({label: degree for label in sorted(labels)})


def build_reference_entity(kb: KnowledgeBase, kind: str, band: SimilarityBand) -> ReferenceEntity:
    """Build the band's prototype over the union schema of one kind.

    The prototype carries possible degrees only, all equal to the band
    midpoint, so similarity against it always runs on possible parts.
    """
    entities = kb.entities(kind)
    if not entities:
        raise EmptyKindError(f"knowledge base has no {kind}")
    midpoint = round(band.midpoint, DEGREE_DECIMALS)
    name = f"reference-level-{band.level}"
    if kind == KIND_GOALS:
        facets = {
            label: FuzzyValue(_flat(labels, midpoint))
            for label, labels in sorted(_goal_schema(entities).items())
        }
        return ReferenceEntity(band.level, Goal(name=name, origin=ORIGIN_SYSTEM, facets=facets))
    attributes = []
    for attr_name, (attr_kind, labels) in sorted(_object_schema(entities).items()):
        if attr_kind == SIMPLE:
            attributes.append(Attribute(name=attr_name, kind=SIMPLE, value=FuzzyValue(_flat(labels, midpoint))))
        else:
            values = {
                label: FuzzyValue(_flat(sub_labels, midpoint))
                for label, sub_labels in sorted(labels.items())
            }
            attributes.append(Attribute(name=attr_name, kind=COMPOSITE, values=values))
    cls = FuzzyInstance if kind == KIND_INSTANCES else FuzzyObject
    return ReferenceEntity(band.level, cls(name=name, attributes=attributes))


# ---------------------------------------------------------------------------
# class assignment
# ---------------------------------------------------------------------------


def reference_scores(
    entity,
    references: Sequence[ReferenceEntity],
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
) -> dict[int, float]:
    """Similarity of one entity against every band reference."""
    return {ref.level: sim_entities(ref.entity, entity, policy) for ref in references}


def choose_level(scores: Mapping[int, float], bands: Sequence[SimilarityBand]) -> int:
    """Pick a level from per-band scores.

    Bands whose own score falls inside them qualify; the qualifying band
    with the largest score wins, ties going to the higher level.  When no
    band qualifies, the band nearest its own score wins, same tie rule.
    """
    by_level = {band.level: band for band in bands}
    qualifying = [level for level, score in scores.items() if by_level[level].contains(score)]
    if qualifying:
        return max(qualifying, key=lambda level: (scores[level], level))
    return min(scores, key=lambda level: (by_level[level].distance(scores[level]), -level))


def assign_class(
    entity,
    references: Sequence[ReferenceEntity],
    bands: Sequence[SimilarityBand] | None = None,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
) -> int:
    """Assign an entity to a similarity class. Comparison errors propagate."""
    bands = standard_bands() if bands is None else tuple(bands)
    return choose_level(reference_scores(entity, references, policy), bands)


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimilarityClass:
    """One class of a partition: its band reference and scored members.

    Member scores are non-increasing, ties broken by entity name ascending.
    """

    level: int
    reference: ReferenceEntity
    members: tuple[tuple[str, float], ...]

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.members)


@dataclass(frozen=True)
class Partition:
    """A total, disjoint assignment of one kind's entities to the four classes."""

    kind: str
    classes: tuple[SimilarityClass, ...]
    assignment: Mapping[str, int]
    policy: UnmatchedPolicy
    kb_fingerprint: str
    pivot: str | None = None

    def class_at(self, level: int) -> SimilarityClass:
        for cls in self.classes:
            if cls.level == level:
                return cls
        raise ValueError(f"no class at level {level}")

    def size(self) -> int:
        return len(self.assignment)


def _sorted_members(scored: list[tuple[str, float]]) -> tuple[tuple[str, float], ...]:
    ordered = sorted(scored, key=lambda item: (-item[1], item[0]))
    return tuple((name, round(score, DEGREE_DECIMALS)) for name, score in ordered)


def _build_partition(
    kb: KnowledgeBase,
    kind: str,
    references: Sequence[ReferenceEntity],
    levels: Mapping[str, int],
    scores: Mapping[str, float],
    policy: UnmatchedPolicy,
    pivot: str | None = None,
) -> Partition:
    grouped: dict[int, list[tuple[str, float]]] = {level: [] for level in LEVELS}
    for entity in kb.entities(kind):
        grouped[levels[entity.name]].append((entity.name, scores[entity.name]))
    classes = tuple(
        SimilarityClass(level=ref.level, reference=ref, members=_sorted_members(grouped[ref.level]))
        for ref in references
    )
    assignment = {entity.name: levels[entity.name] for entity in kb.entities(kind)}
    return Partition(
        kind=kind,
        classes=classes,
        assignment=assignment,
        policy=policy,
        kb_fingerprint=kb.fingerprint,
        pivot=pivot,
    )


def partition_kb(
    kb: KnowledgeBase,
    kind: str,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
) -> Partition:
    """Partition one kind against the four standard band references.

    Every entity lands in exactly one class; the member score recorded is
    the entity's similarity to its own class reference.
    """
    bands = standard_bands()
    references = [build_reference_entity(kb, kind, band) for band in bands]
    levels: dict[str, int] = {}
    scores: dict[str, float] = {}
    for entity in kb.entities(kind):
        per_band = reference_scores(entity, references, policy)
        level = choose_level(per_band, bands)
        levels[entity.name] = level
        scores[entity.name] = per_band[level]
    return _build_partition(kb, kind, references, levels, scores, policy)


def partition_by_pivot(
    kb: KnowledgeBase,
    kind: str,
    pivot: str,
    bands: Sequence[SimilarityBand] | None = None,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
) -> Partition:
    """Partition one kind by similarity to a pivot entity, binned by band.

    The pivot itself scores 1 against itself and lands in the top class.
    Class references remain the standard band prototypes; recorded member
    scores are similarities to the pivot.
    """
    bands = standard_bands() if bands is None else tuple(bands)
    try:
        pivot_entity = kb.entity(kind, pivot)
    except UnknownEntityError as exc:
        raise UnknownPivotError(f"no {kind} entity named {pivot!r} to pivot on") from exc
    references = [build_reference_entity(kb, kind, band) for band in bands]
    levels: dict[str, int] = {}
    scores: dict[str, float] = {}
    for entity in kb.entities(kind):
        score = sim_entities(pivot_entity, entity, policy)
        for band in bands:
            if band.contains(score):
                levels[entity.name] = band.level
                break
        scores[entity.name] = score
    return _build_partition(kb, kind, references, levels, scores, policy, pivot=pivot_entity.name)


def class_visit_order(start: int) -> tuple[int, ...]:
    """Order all four levels by band-midpoint distance from the start level.

    The start level comes first; ties go to the higher level.
    """
    if start not in LEVELS:
        raise ValueError(f"start level must be one of {LEVELS}, got {start!r}")
    midpoints = {band.level: band.midpoint for band in standard_bands()}
    return tuple(sorted(LEVELS, key=lambda level: (abs(midpoints[level] - midpoints[start]), -level)))
