"""Graded similarity measures over fuzzy descriptions.

The base measure on two sets is the height of their pointwise-min
intersection divided by the height of their pointwise-max union.  It is 1 on
identical sets, 0 exactly when the supports are disjoint, and undefined only
when both sets are empty.

Structured descriptions aggregate by minimum over parts paired by name:
sub-values pair by value label, attributes pair by attribute name, facets
pair by facet label.  Pairing by name rather than by position keeps the
measure independent of declaration order.  A paired value whose two sides
both carry necessary degrees scores the average of the necessary-part and
possible-part measures; any side without necessary degrees drops the
comparison to possible parts only.

Parts present on one side only are governed by the unmatched policy:
``ignore`` skips them (right for partial user descriptions), ``zero`` counts
each as similarity 0 (right for comparing two complete records, where a
missing part is a real difference).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import FuzzySet
from .errors import (
    BothEmptyError,
    ComparisonError,
    EmptyKindError,
    KindMismatchError,
    NoPairedAttributesError,
    NoPairedFacetsError,
    NoPairedValuesError,
)
from .model import (
    COMPOSITE,
    SIMPLE,
    Attribute,
    FuzzyObject,
    FuzzyValue,
    Goal,
    KnowledgeBase,
)


class UnmatchedPolicy(str, Enum):
    """How parts present on only one side enter a min-aggregation."""

    IGNORE = "ignore"
    ZERO = "zero"


def _warn(warnings: list[str] | None, message: str) -> None:
    if warnings is not None:
        warnings.append(message)


def sim_sets(a: FuzzySet, b: FuzzySet) -> float:
    """Similarity of two fuzzy sets: height of intersection over height of union."""
    if a.is_empty() and b.is_empty():
        raise BothEmptyError("similarity of two empty sets is undefined")
    return a.intersect(b).height() / a.union(b).height()


def sim_value(a: FuzzyValue, b: FuzzyValue, warnings: list[str] | None = None) -> float:
    """Similarity of two fuzzy values.

    When both sides carry necessary degrees the score is the mean of the
    necessary-part and possible-part set similarities; otherwise only the
    possible parts are compared.  A pair where exactly one side carries a
    necessary part degrades to possible-only and emits a warning.
    """
    if a.has_necessary() and b.has_necessary():
        return (sim_sets(a.necessary, b.necessary) + sim_sets(a.possible, b.possible)) / 2.0
    if a.has_necessary() != b.has_necessary():
        _warn(warnings, "mixed-necessity: one side has no necessary degrees, compared possible parts only")
    return sim_sets(a.possible, b.possible)


def sim_composite_attribute(
    a: Attribute,
    b: Attribute,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
    warnings: list[str] | None = None,
) -> float:
    """Minimum of sim_value over sub-values paired by value label."""
    if a.kind != COMPOSITE or b.kind != COMPOSITE:
        raise KindMismatchError(f"attributes {a.name!r} and {b.name!r} are not both composite")
    shared = sorted(a.values.keys() & b.values.keys())
    scores = [sim_value(a.values[label], b.values[label], warnings) for label in shared]
    if policy is UnmatchedPolicy.ZERO and (a.values.keys() ^ b.values.keys()):
        scores.append(0.0)
    if not scores:
        raise NoPairedValuesError(f"attributes {a.name!r} and {b.name!r} share no value labels")
    return min(scores)


def sim_attribute(
    a: Attribute,
    b: Attribute,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
    warnings: list[str] | None = None,
) -> float:
    """Similarity of two attributes of the same kind."""
    if a.kind != b.kind:
        raise KindMismatchError(f"attribute {a.name!r} is {a.kind}, attribute {b.name!r} is {b.kind}")
    if a.kind == SIMPLE:
        return sim_value(a.value, b.value, warnings)
    return sim_composite_attribute(a, b, policy, warnings)


def _sim_attribute_bundle(
    a: FuzzyObject,
    b: FuzzyObject,
    policy: UnmatchedPolicy,
    warnings: list[str] | None,
) -> float:
    shared = sorted(a.attributes.keys() & b.attributes.keys())
    scores = [sim_attribute(a.attributes[name], b.attributes[name], policy, warnings) for name in shared]
    if policy is UnmatchedPolicy.ZERO and (a.attributes.keys() ^ b.attributes.keys()):
        scores.append(0.0)
    if not scores:
        raise NoPairedAttributesError(f"{a.name!r} and {b.name!r} share no attribute names")
    return min(scores)


def sim_object(
    a: FuzzyObject,
    b: FuzzyObject,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
    warnings: list[str] | None = None,
) -> float:
    """Minimum of sim_attribute over attributes paired by name."""
    return _sim_attribute_bundle(a, b, policy, warnings)


def sim_instance(
    a: FuzzyObject,
    b: FuzzyObject,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
    warnings: list[str] | None = None,
) -> float:
    """Same aggregation as sim_object, applied to occurrence-level records."""
    return _sim_attribute_bundle(a, b, policy, warnings)


def sim_goal(
    a: Goal,
    b: Goal,
    policy: UnmatchedPolicy = UnmatchedPolicy.IGNORE,
    warnings: list[str] | None = None,
) -> float:
    """Minimum of sim_value over facets paired by facet label.

    Defaults to the ignore policy: goal descriptions are routinely partial,
    so a facet on one side only is not evidence of difference.  A pair
    involving a user goal compares possible parts only, which follows from
    user goals never carrying necessary degrees.
    """
    shared = sorted(a.facets.keys() & b.facets.keys())
    scores = [sim_value(a.facets[label], b.facets[label], warnings) for label in shared]
    if policy is UnmatchedPolicy.ZERO and (a.facets.keys() ^ b.facets.keys()):
        scores.append(0.0)
    if not scores:
        raise NoPairedFacetsError(f"goals {a.name!r} and {b.name!r} share no facet labels")
    return min(scores)


def sim_entities(
    a,
    b,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
    warnings: list[str] | None = None,
) -> float:
    """Dispatch on entity type: goals to sim_goal, object-shaped to sim_object."""
    if isinstance(a, Goal) and isinstance(b, Goal):
        return sim_goal(a, b, policy, warnings)
    if isinstance(a, FuzzyObject) and isinstance(b, FuzzyObject):
        return _sim_attribute_bundle(a, b, policy, warnings)
    raise KindMismatchError(
        f"cannot compare {type(a).__name__} with {type(b).__name__}"
    )


# ---------------------------------------------------------------------------
# pairwise matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric pairwise similarity over one kind of a knowledge base.

    ``failed`` holds (row, col) cells whose pair admitted no score; those
    cells carry 0.0.  ``notes`` collects human-readable diagnostics for
    failed cells and degraded comparisons.
    """

    kind: str
    names: tuple[str, ...]
    scores: tuple[tuple[float, ...], ...]
    failed: frozenset[tuple[int, int]]
    notes: tuple[str, ...]

    def score(self, left: str, right: str) -> float:
        return self.scores[self.names.index(left)][self.names.index(right)]


def similarity_matrix(
    kb: KnowledgeBase,
    kind: str,
    policy: UnmatchedPolicy = UnmatchedPolicy.ZERO,
) -> SimilarityMatrix:
    """Pairwise similarity of every entity pair of one kind, in declaration order."""
    entities = kb.entities(kind)
    if not entities:
        raise EmptyKindError(f"knowledge base has no {kind}")
    n = len(entities)
    names = tuple(e.name for e in entities)
    scores = [[0.0] * n for _ in range(n)]
    failed: set[tuple[int, int]] = set()
    notes: list[str] = []
    for i in range(n):
        for j in range(i, n):
            cell_warnings: list[str] = []
            try:
                value = sim_entities(entities[i], entities[j], policy, cell_warnings)
            except ComparisonError as exc:
                value = 0.0
                failed.add((i, j))
                failed.add((j, i))
                notes.append(f"{names[i]} vs {names[j]}: {exc.message}")
            scores[i][j] = value
            scores[j][i] = value
            for message in cell_warnings:
                notes.append(f"{names[i]} vs {names[j]}: {message}")
    return SimilarityMatrix(
        kind=kind,
        names=names,
        scores=tuple(tuple(row) for row in scores),
        failed=frozenset(failed),
        notes=tuple(notes),
    )
