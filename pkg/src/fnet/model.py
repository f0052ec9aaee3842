"""Domain records held in a knowledge base.

Objects, instances and goals are all bundles of named fuzzy values.  A value
always carries a set of possible degrees and may additionally carry a set of
necessary degrees, bounded above pointwise by the possible ones.  User-origin
goals are partial descriptions and never carry necessary degrees.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from .core import FuzzySet, normalize_label
from .errors import UnknownEntityError

KIND_OBJECTS = "objects"
KIND_GOALS = "goals"
KIND_INSTANCES = "instances"
KINDS = (KIND_OBJECTS, KIND_GOALS, KIND_INSTANCES)

ORIGIN_SYSTEM = "system"
ORIGIN_USER = "user"
ORIGINS = (ORIGIN_SYSTEM, ORIGIN_USER)

SIMPLE = "simple"
COMPOSITE = "composite"


def _coerce_set(value) -> FuzzySet:
    if isinstance(value, FuzzySet):
        return value
    return FuzzySet(value)


@dataclass(frozen=True)
class FuzzyValue:
    """A possible fuzzy set plus an optional necessary one.

    An empty necessary part is treated as absent.  Every necessary degree
    must stay at or below the possible degree of the same label.
    """

    possible: FuzzySet
    necessary: FuzzySet | None = None

    def __post_init__(self):
        object.__setattr__(self, "possible", _coerce_set(self.possible))
        if self.possible.is_empty():
            raise ValueError("possible part must be non-empty")
        if self.necessary is not None:
            necessary = _coerce_set(self.necessary)
            object.__setattr__(self, "necessary", None if necessary.is_empty() else necessary)
        if self.necessary is not None:
            for label, degree in self.necessary.items():
                if degree > self.possible.degree(label):
                    raise ValueError(f"necessary degree exceeds possible degree at label {label!r}")

    def has_necessary(self) -> bool:
        return self.necessary is not None

    def possible_only(self) -> "FuzzyValue":
        return self if self.necessary is None else FuzzyValue(self.possible)


@dataclass(frozen=True)
class Attribute:
    """A named attribute, either simple (one value) or composite (value per label)."""

    name: str
    kind: str
    value: FuzzyValue | None = None
    values: Mapping[str, FuzzyValue] | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_label(self.name))
        if self.kind == SIMPLE:
            if self.value is None or self.values is not None:
                raise ValueError(f"simple attribute {self.name!r} takes exactly one value")
        elif self.kind == COMPOSITE:
            if self.values is None or self.value is not None:
                raise ValueError(f"composite attribute {self.name!r} takes a non-empty value map")
            coerced = {}
            for raw_label, sub in self.values.items():
                label = normalize_label(raw_label)
                if label in coerced:
                    raise ValueError(f"duplicate value label {label!r} in attribute {self.name!r}")
                coerced[label] = sub if isinstance(sub, FuzzyValue) else FuzzyValue(sub)
            if not coerced:
                raise ValueError(f"composite attribute {self.name!r} has no values")
            object.__setattr__(self, "values", coerced)
        else:
            raise ValueError(f"unknown attribute kind {self.kind!r}")

    def iter_values(self) -> Iterable[FuzzyValue]:
        if self.kind == SIMPLE:
            yield self.value
        else:
            yield from self.values.values()


def simple_attribute(name: str, possible, necessary=None) -> Attribute:
    return Attribute(name=name, kind=SIMPLE, value=FuzzyValue(_coerce_set(possible), None if necessary is None else _coerce_set(necessary)))


def composite_attribute(name: str, values: Mapping) -> Attribute:
    coerced = {label: sub if isinstance(sub, FuzzyValue) else FuzzyValue(sub) for label, sub in values.items()}
    return Attribute(name=name, kind=COMPOSITE, values=coerced)


def _coerce_attributes(attributes) -> dict[str, Attribute]:
    if isinstance(attributes, Mapping):
        attrs = list(attributes.values())
    else:
        attrs = list(attributes)
    out: dict[str, Attribute] = {}
    for attr in attrs:
        if not isinstance(attr, Attribute):
            raise TypeError(f"expected Attribute, got {type(attr).__name__}")
        if attr.name in out:
            raise ValueError(f"duplicate attribute name {attr.name!r}")
        out[attr.name] = attr
    if not out:
        raise ValueError("an entity needs at least one attribute")
    return out


@dataclass(frozen=True)
class FuzzyObject:
    """A class-level description: a name plus one or more attributes."""

    name: str
    attributes: Mapping[str, Attribute]

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_label(self.name))
        object.__setattr__(self, "attributes", _coerce_attributes(self.attributes))


class FuzzyInstance(FuzzyObject):
    """An occurrence-level description; same shape as FuzzyObject, distinct type."""


@dataclass(frozen=True)
class Goal:
    """A goal description: named facets, each a fuzzy value.

    System goals may carry necessary degrees; user goals never do.
    """

    name: str
    origin: str
    facets: Mapping[str, FuzzyValue]

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_label(self.name))
        if self.origin not in ORIGINS:
            raise ValueError(f"unknown goal origin {self.origin!r}")
        coerced: dict[str, FuzzyValue] = {}
        for raw_label, facet in self.facets.items():
            label = normalize_label(raw_label)
            if label in coerced:
                raise ValueError(f"duplicate facet label {label!r} in goal {self.name!r}")
            coerced[label] = facet if isinstance(facet, FuzzyValue) else FuzzyValue(facet)
        if not coerced:
            raise ValueError(f"goal {self.name!r} has no facets")
        if self.origin == ORIGIN_USER and any(f.has_necessary() for f in coerced.values()):
            raise ValueError(f"user goal {self.name!r} must not carry necessary degrees")
        object.__setattr__(self, "facets", coerced)


Entity = FuzzyObject | Goal


@dataclass
class KnowledgeBase:
    """A named, versioned collection of objects, goals and instances.

    Treated as immutable after construction; entity names are unique within
    each kind and entity order is the declaration order of the source.
    """

    name: str
    objects: list[FuzzyObject] = field(default_factory=list)
    goals: list[Goal] = field(default_factory=list)
    instances: list[FuzzyInstance] = field(default_factory=list)
    version: int = 1
    display_names: dict[str, str] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for kind in KINDS:
            seen = set()
            for entity in self.entities(kind):
                if entity.name in seen:
                    raise ValueError(f"duplicate {kind} name {entity.name!r}")
                seen.add(entity.name)

    def entities(self, kind: str) -> list:
        if kind == KIND_OBJECTS:
            return self.objects
        if kind == KIND_GOALS:
            return self.goals
        if kind == KIND_INSTANCES:
            return self.instances
        raise ValueError(f"unknown kind {kind!r}")

    def entity(self, kind: str, name: str):
        wanted = normalize_label(name)
        for candidate in self.entities(kind):
            if candidate.name == wanted:
                return candidate
        raise UnknownEntityError(f"no {kind} entity named {wanted!r}")

    def has_entity(self, kind: str, name: str) -> bool:
        try:
            self.entity(kind, name)
            return True
        except UnknownEntityError:
            return False

    @cached_property
    def fingerprint(self) -> str:
        from . import store

        return store.kb_fingerprint(self)
