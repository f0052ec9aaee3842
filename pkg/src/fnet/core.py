"""Labels and discrete fuzzy sets.

A fuzzy set here is a finite map from normalized text labels to membership
degrees in (0, 1].  Labels absent from the map have degree 0 by convention,
which keeps pointwise min and max well defined over any pair of sets without
declaring a universe up front: the effective universe of a comparison is the
union of the two supports.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping

from .errors import EmptyLabelError

_WHITESPACE_RUN = re.compile(r"\s+")

# Stored degrees are quantized to 9 decimals so a set survives a
# serialize/parse cycle without drift.
DEGREE_DECIMALS = 9
DEGREE_TOLERANCE = 1e-9


def normalize_label(raw: str) -> str:
    """Normalize a label: trim, collapse inner whitespace runs, lowercase.

    Hyphens are preserved, so "The-signs" and "the-signs" collapse to the
    same label while "the-sign" stays distinct.  Raises EmptyLabelError for
    empty or whitespace-only input.
    """
    text = _WHITESPACE_RUN.sub(" ", str(raw).strip()).lower()
    if not text:
        raise EmptyLabelError("label is empty or whitespace-only")
    return text


class FuzzySet(Mapping[str, float]):
    """Immutable discrete fuzzy set: normalized label -> degree in (0, 1].

    Entries with degree 0 are not stored; degrees outside [0, 1] are
    rejected at construction.  Iteration order is sorted by label.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[str, float] | Iterable[tuple[str, float]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        cleaned: dict[str, float] = {}
        for raw_label, raw_degree in items:
            label = normalize_label(raw_label)
            degree = round(float(raw_degree), DEGREE_DECIMALS)
            if not 0.0 <= degree <= 1.0:
                raise ValueError(f"degree {raw_degree!r} for label {label!r} outside [0, 1]")
            if degree == 0.0:
                continue
            if label in cleaned:
                raise ValueError(f"duplicate label {label!r} after normalization")
            cleaned[label] = degree
        object.__setattr__(self, "_entries", dict(sorted(cleaned.items())))

    # -- Mapping interface --------------------------------------------------

    def __getitem__(self, label: str) -> float:
        return self._entries[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    # -- fuzzy set operations ----------------------------------------------

    def degree(self, label: str) -> float:
        """Membership degree of a label, 0.0 when absent."""
        return self._entries.get(normalize_label(label), 0.0)

    def is_empty(self) -> bool:
        return not self._entries

    def height(self) -> float:
        """Largest membership degree, 0.0 for the empty set."""
        return max(self._entries.values(), default=0.0)

    def support(self) -> frozenset[str]:
        """Labels with strictly positive degree."""
        return frozenset(self._entries)

    def intersect(self, other: "FuzzySet") -> "FuzzySet":
        """Pointwise minimum; labels on one side only fall to degree 0."""
        shared = self._entries.keys() & other._entries.keys()
        return FuzzySet({label: min(self._entries[label], other._entries[label]) for label in shared})

    def union(self, other: "FuzzySet") -> "FuzzySet":
        """Pointwise maximum over the union of both supports."""
        merged = dict(self._entries)
        for label, degree in other._entries.items():
            held = merged.get(label, 0.0)
            if degree > held:
                merged[label] = degree
        return FuzzySet(merged)

    def __and__(self, other: "FuzzySet") -> "FuzzySet":
        return self.intersect(other)

    def __or__(self, other: "FuzzySet") -> "FuzzySet":
        return self.union(other)

    def pointwise_leq(self, other: "FuzzySet") -> bool:
        """True when self(label) <= other(label) for every label in either support."""
        for label, degree in self._entries.items():
            if degree > other._entries.get(label, 0.0):
                return False
        return True

    def scale(self, factor: float) -> "FuzzySet":
        """Multiply every degree by a factor in [0, 1]."""
        if not 0.0 <= factor <= 1.0:
            raise ValueError(f"scale factor {factor!r} outside [0, 1]")
        return FuzzySet({label: degree * factor for label, degree in self._entries.items()})

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FuzzySet):
            return self._entries == other._entries
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"FuzzySet({self._entries!r})"
