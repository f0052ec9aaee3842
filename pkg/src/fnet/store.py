"""Loading, validation and canonical serialization of engine documents.

Knowledge bases and partitions persist as UTF-8 JSON.  Serialization is
canonical: map keys sorted, attribute lists ordered by name, entity lists
in declaration order, numbers printed as decimals with at most nine
fractional digits and no trailing zeros.  Equal canonical bytes and equal
content fingerprints coincide by construction.

Validation is total: any parsed document, whatever its shape, yields a
report of coded errors and warnings rather than an exception.
"""

from __future__ import annotations

import hashlib
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from .core import FuzzySet, normalize_label
from .errors import EmptyLabelError, ParseError, ValidationError
from .model import (
    COMPOSITE,
    KIND_GOALS,
    KIND_INSTANCES,
    KIND_OBJECTS,
    KINDS,
    ORIGIN_USER,
    ORIGINS,
    SIMPLE,
    Attribute,
    FuzzyInstance,
    FuzzyObject,
    FuzzyValue,
    Goal,
    KnowledgeBase,
)
from .partition import LEVELS, Partition, ReferenceEntity, SimilarityClass
from .session import Query
from .similarity import UnmatchedPolicy

SCORE_DECIMALS = 9

_TOP_FIELDS = {"version", "name", "objects", "goals", "instances"}
_OBJECT_FIELDS = {"name", "attributes"}
_SIMPLE_FIELDS = {"name", "kind", "possible", "necessary"}
_COMPOSITE_FIELDS = {"name", "kind", "values"}
_VALUE_FIELDS = {"possible", "necessary"}
_GOAL_FIELDS = {"name", "origin", "facets"}
_QUERY_FIELDS = {"kind", "label", "description"}


# ===========================================================================
# canonical JSON
# ===========================================================================


def format_number(value: float) -> str:
    """Canonical decimal text for a number: nine fractional digits at most,
    trailing zeros stripped, integers printed bare."""
    rounded = round(float(value), SCORE_DECIMALS)
    if rounded == int(rounded):
        return str(int(rounded))
    return f"{rounded:.9f}".rstrip("0").rstrip(".")


def round_score(value: float) -> float:
    """Half-even rounding applied to scores at serialization boundaries."""
    return round(float(value), SCORE_DECIMALS)


def _emit(value, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, str):
        parts.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, int):
        parts.append(str(value))
    elif isinstance(value, float):
        parts.append(format_number(value))
    elif isinstance(value, Mapping):
        parts.append("{")
        first = True
        for key in sorted(value):
            if not isinstance(key, str):
                raise TypeError(f"cannot serialize non-string key {key!r}")
            if not first:
                parts.append(",")
            first = False
            parts.append(json.dumps(key, ensure_ascii=False))
            parts.append(":")
            _emit(value[key], parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for index, item in enumerate(value):
            if index:
                parts.append(",")
            _emit(item, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_json(value) -> str:
    parts: list[str] = []
    _emit(value, parts)
    return "".join(parts)


def canonical_bytes(value) -> bytes:
    return (canonical_json(value) + "\n").encode("utf-8")


# ===========================================================================
# validation report
# ===========================================================================


@dataclass(frozen=True)
class Issue:
    path: str
    code: str
    message: str

    def to_document(self) -> dict:
        return {"path": self.path, "code": self.code, "message": self.message}


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, path: str, code: str, message: str) -> None:
        self.errors.append(Issue(path, code, message))

    def warn(self, path: str, code: str, message: str) -> None:
        self.warnings.append(Issue(path, code, message))

    def to_document(self) -> dict:
        return {
            "errors": [issue.to_document() for issue in self.errors],
            "warnings": [issue.to_document() for issue in self.warnings],
        }


# ===========================================================================
# document checks (total: collect issues, never raise)
# ===========================================================================


def _warn_unknown_fields(doc: dict, allowed: set[str], path: str, report: ValidationReport) -> None:
    for key in doc:
        if key not in allowed:
            report.warn(f"{path}.{key}", "unknown-field", f"field {key!r} is not part of the format")


def _check_fuzzy_set(doc, path: str, report: ValidationReport) -> dict[str, float] | None:
    """Validate a label -> degree map; return the kept normalized entries."""
    if not isinstance(doc, dict):
        report.error(path, "invalid-type", "a fuzzy set must be a JSON object of label to degree")
        return None
    kept: dict[str, float] = {}
    for raw_label, raw_degree in doc.items():
        entry_path = f"{path}[{raw_label!r}]"
        try:
            label = normalize_label(raw_label)
        except EmptyLabelError:
            report.error(entry_path, "empty-label", "label is empty or whitespace-only")
            continue
        if isinstance(raw_degree, bool) or not isinstance(raw_degree, (int, float)):
            report.error(entry_path, "invalid-type", f"degree must be a number, got {raw_degree!r}")
            continue
        degree = float(raw_degree)
        if not 0.0 <= degree <= 1.0:
            report.error(entry_path, "degree-out-of-range", f"degree {degree} is outside [0, 1]")
            continue
        if round(degree, SCORE_DECIMALS) == 0.0:
            report.warn(entry_path, "zero-degree-dropped", "entries with degree 0 are not stored")
            continue
        if label in kept:
            report.error(entry_path, "duplicate-label", f"label {label!r} appears twice after normalization")
            continue
        kept[label] = degree
    if not kept and not doc:
        report.error(path, "empty-fuzzy-set", "a stored fuzzy set must have at least one positive degree")
    elif not kept:
        report.error(path, "empty-fuzzy-set", "no entries with a positive degree remain")
    for label in sorted(kept):
        if label + "s" in kept:
            report.warn(
                path,
                "near-duplicate-labels",
                f"labels {label!r} and {label + 's'!r} differ only by a trailing 's'",
            )
    return kept or None


def _check_value(
    doc,
    path: str,
    report: ValidationReport,
    necessity_flags: list[bool],
    forbid_necessary_code: str | None = None,
) -> None:
    """Validate a {possible, necessary?} payload already known to be a dict."""
    if "possible" not in doc:
        report.error(path, "missing-field", "a value needs a 'possible' fuzzy set")
        possible = None
    else:
        possible = _check_fuzzy_set(doc["possible"], f"{path}.possible", report)
    necessary = None
    if doc.get("necessary") is not None:
        necessary = _check_fuzzy_set(doc["necessary"], f"{path}.necessary", report)
    if necessary:
        if forbid_necessary_code is not None:
            report.error(f"{path}.necessary", forbid_necessary_code, "necessary degrees are not allowed here")
        elif possible is not None:
            for label, degree in necessary.items():
                if degree > possible.get(label, 0.0):
                    report.error(
                        f"{path}.necessary[{label!r}]",
                        "necessity-exceeds-possibility",
                        f"necessary degree {degree} exceeds possible degree {possible.get(label, 0.0)}",
                    )
    necessity_flags.append(bool(necessary))


def _check_attribute(
    doc,
    path: str,
    report: ValidationReport,
    necessity_flags: list[bool],
    forbid_necessary_code: str | None = None,
) -> str | None:
    if not isinstance(doc, dict):
        report.error(path, "invalid-type", "an attribute must be a JSON object")
        return None
    name = doc.get("name")
    normalized = None
    if not isinstance(name, str):
        report.error(f"{path}.name", "missing-field", "an attribute needs a string 'name'")
    else:
        try:
            normalized = normalize_label(name)
        except EmptyLabelError:
            report.error(f"{path}.name", "empty-label", "attribute name is empty")
    kind = doc.get("kind")
    if kind == SIMPLE:
        _warn_unknown_fields(doc, _SIMPLE_FIELDS, path, report)
        _check_value(doc, path, report, necessity_flags, forbid_necessary_code)
    elif kind == COMPOSITE:
        _warn_unknown_fields(doc, _COMPOSITE_FIELDS, path, report)
        values = doc.get("values")
        if not isinstance(values, dict) or not values:
            report.error(f"{path}.values", "missing-field", "a composite attribute needs a non-empty 'values' map")
        else:
            seen: set[str] = set()
            for raw_label, sub in values.items():
                sub_path = f"{path}.values[{raw_label!r}]"
                try:
                    label = normalize_label(raw_label)
                except EmptyLabelError:
                    report.error(sub_path, "empty-label", "value label is empty")
                    continue
                if label in seen:
                    report.error(sub_path, "duplicate-label", f"value label {label!r} appears twice")
                    continue
                seen.add(label)
                if not isinstance(sub, dict):
                    report.error(sub_path, "invalid-type", "a value must be a JSON object")
                    continue
                _warn_unknown_fields(sub, _VALUE_FIELDS, sub_path, report)
                _check_value(sub, sub_path, report, necessity_flags, forbid_necessary_code)
    else:
        report.error(f"{path}.kind", "invalid-kind", f"attribute kind must be 'simple' or 'composite', got {kind!r}")
    return normalized


def _check_object(
    doc,
    path: str,
    report: ValidationReport,
    forbid_necessary_code: str | None = None,
    require_name: bool = True,
) -> str | None:
    if not isinstance(doc, dict):
        report.error(path, "invalid-type", "an entity must be a JSON object")
        return None
    _warn_unknown_fields(doc, _OBJECT_FIELDS, path, report)
    normalized = None
    name = doc.get("name")
    if isinstance(name, str):
        try:
            normalized = normalize_label(name)
        except EmptyLabelError:
            report.error(f"{path}.name", "empty-label", "entity name is empty")
    elif require_name:
        report.error(f"{path}.name", "missing-field", "an entity needs a string 'name'")
    attributes = doc.get("attributes")
    necessity_flags: list[bool] = []
    if not isinstance(attributes, list) or not attributes:
        report.error(f"{path}.attributes", "missing-field", "an entity needs a non-empty 'attributes' list")
    else:
        seen: set[str] = set()
        for index, attr in enumerate(attributes):
            attr_name = _check_attribute(attr, f"{path}.attributes[{index}]", report, necessity_flags, forbid_necessary_code)
            if attr_name is not None:
                if attr_name in seen:
                    report.error(
                        f"{path}.attributes[{index}].name",
                        "duplicate-label",
                        f"attribute name {attr_name!r} appears twice",
                    )
                seen.add(attr_name)
    if any(necessity_flags) and not all(necessity_flags):
        report.warn(
            path,
            "mixed-necessity",
            "some values carry necessary degrees and some do not; comparisons degrade to possible parts",
        )
    return normalized


def _check_goal(
    doc,
    path: str,
    report: ValidationReport,
    forbid_necessary_code: str | None = None,
    require_name: bool = True,
    require_origin: bool = True,
) -> str | None:
    if not isinstance(doc, dict):
        report.error(path, "invalid-type", "a goal must be a JSON object")
        return None
    _warn_unknown_fields(doc, _GOAL_FIELDS, path, report)
    normalized = None
    name = doc.get("name")
    if isinstance(name, str):
        try:
            normalized = normalize_label(name)
        except EmptyLabelError:
            report.error(f"{path}.name", "empty-label", "goal name is empty")
    elif require_name:
        report.error(f"{path}.name", "missing-field", "a goal needs a string 'name'")
    origin = doc.get("origin")
    forbid = forbid_necessary_code
    if origin is None and not require_origin:
        origin = ORIGIN_USER
    if origin not in ORIGINS:
        report.error(f"{path}.origin", "invalid-origin", f"goal origin must be 'system' or 'user', got {origin!r}")
    elif origin == ORIGIN_USER and forbid is None:
        forbid = "user-goal-has-necessary"
    facets = doc.get("facets")
    necessity_flags: list[bool] = []
    if not isinstance(facets, dict) or not facets:
        report.error(f"{path}.facets", "missing-field", "a goal needs a non-empty 'facets' map")
    else:
        seen: set[str] = set()
        for raw_label, facet in facets.items():
            facet_path = f"{path}.facets[{raw_label!r}]"
            try:
                label = normalize_label(raw_label)
            except EmptyLabelError:
                report.error(facet_path, "empty-label", "facet label is empty")
                continue
            if label in seen:
                report.error(facet_path, "duplicate-label", f"facet label {label!r} appears twice")
                continue
            seen.add(label)
            if not isinstance(facet, dict):
                report.error(facet_path, "invalid-type", "a facet must be a JSON object")
                continue
            _warn_unknown_fields(facet, _VALUE_FIELDS, facet_path, report)
            _check_value(facet, facet_path, report, necessity_flags, forbid)
    if any(necessity_flags) and not all(necessity_flags):
        report.warn(
            path,
            "mixed-necessity",
            "some facets carry necessary degrees and some do not; comparisons degrade to possible parts",
        )
    return normalized


def validate_kb(document) -> ValidationReport:
    """Validate a parsed knowledge base document of any shape.

    Total: always returns a report, never raises.
    """
    report = ValidationReport()
    if not isinstance(document, dict):
        report.error("$", "invalid-type", "a knowledge base must be a JSON object")
        return report
    _warn_unknown_fields(document, _TOP_FIELDS, "$", report)
    version = document.get("version")
    if version is None:
        report.error("$.version", "missing-field", "a knowledge base needs a 'version' field")
    elif not isinstance(version, int) or isinstance(version, bool) or version != 1:
        report.error("$.version", "unsupported-version", f"only version 1 is supported, got {version!r}")
    name = document.get("name")
    if not isinstance(name, str) or not name.strip():
        report.error("$.name", "missing-field", "a knowledge base needs a non-empty string 'name'")
    for kind in KINDS:
        entries = document.get(kind, [])
        if entries is None:
            entries = []
        if not isinstance(entries, list):
            report.error(f"$.{kind}", "invalid-type", f"{kind!r} must be a list")
            continue
        seen: set[str] = set()
        for index, entry in enumerate(entries):
            path = f"$.{kind}[{index}]"
            if kind == KIND_GOALS:
                entity_name = _check_goal(entry, path, report)
            else:
                entity_name = _check_object(entry, path, report)
            if entity_name is not None:
                if entity_name in seen:
                    report.error(f"{path}.name", "duplicate-entity-name", f"{kind} name {entity_name!r} appears twice")
                seen.add(entity_name)
    return report


# ===========================================================================
# building model values from validated documents
# ===========================================================================


def _remember_display(display: dict[str, str], raw: str, normalized: str) -> None:
    if raw != normalized and normalized not in display:
        display[normalized] = raw


def _build_set(doc: dict, display: dict[str, str]) -> FuzzySet:
    entries: dict[str, float] = {}
    for raw_label, degree in doc.items():
        normalized = normalize_label(raw_label)
        if round(float(degree), SCORE_DECIMALS) == 0.0:
            continue
        _remember_display(display, raw_label, normalized)
        entries[normalized] = float(degree)
    return FuzzySet(entries)


def _build_value(doc: dict, display: dict[str, str]) -> FuzzyValue:
    necessary = doc.get("necessary")
    return FuzzyValue(
        possible=_build_set(doc["possible"], display),
        necessary=None if not necessary else _build_set(necessary, display),
    )


def _build_attribute(doc: dict, display: dict[str, str]) -> Attribute:
    name = normalize_label(doc["name"])
    _remember_display(display, doc["name"], name)
    if doc["kind"] == SIMPLE:
        return Attribute(name=name, kind=SIMPLE, value=_build_value(doc, display))
    values = {}
    for raw_label, sub in doc["values"].items():
        label = normalize_label(raw_label)
        _remember_display(display, raw_label, label)
        values[label] = _build_value(sub, display)
    return Attribute(name=name, kind=COMPOSITE, values=values)


def _build_object(doc: dict, display: dict[str, str], cls=FuzzyObject, fallback_name: str = "query"):
    raw_name = doc.get("name", fallback_name)
    name = normalize_label(raw_name)
    _remember_display(display, raw_name, name)
    return cls(name=name, attributes=[_build_attribute(a, display) for a in doc["attributes"]])


def _build_goal(doc: dict, display: dict[str, str], fallback_name: str = "query", fallback_origin: str | None = None) -> Goal:
    raw_name = doc.get("name", fallback_name)
    name = normalize_label(raw_name)
    _remember_display(display, raw_name, name)
    facets = {}
    for raw_label, facet in doc["facets"].items():
        label = normalize_label(raw_label)
        _remember_display(display, raw_label, label)
        facets[label] = _build_value(facet, display)
    origin = doc.get("origin", fallback_origin)
    return Goal(name=name, origin=origin, facets=facets)


# ===========================================================================
# knowledge base load and save
# ===========================================================================


def loads_kb(data: bytes | str) -> KnowledgeBase:
    """Parse, validate and build a knowledge base from JSON text or bytes."""
    try:
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        document = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not valid UTF-8 JSON: {exc}") from exc
    report = validate_kb(document)
    if not report.ok:
        raise ValidationError(
            f"knowledge base failed validation with {len(report.errors)} error(s)",
            detail=report.to_document(),
        )
    display: dict[str, str] = {}
    return KnowledgeBase(
        name=document["name"],
        objects=[_build_object(doc, display) for doc in document.get("objects") or []],
        goals=[_build_goal(doc, display) for doc in document.get("goals") or []],
        instances=[_build_object(doc, display, cls=FuzzyInstance) for doc in document.get("instances") or []],
        version=document["version"],
        display_names=display,
    )


def load_kb(path: str | Path) -> KnowledgeBase:
    return loads_kb(Path(path).read_bytes())


def fuzzy_set_document(fs: FuzzySet) -> dict:
    return {label: degree for label, degree in fs.items()}


def _value_fields(value: FuzzyValue) -> dict:
    doc: dict = {"possible": fuzzy_set_document(value.possible)}
    if value.necessary is not None:
        doc["necessary"] = fuzzy_set_document(value.necessary)
    return doc


def attribute_document(attr: Attribute) -> dict:
    if attr.kind == SIMPLE:
        doc = {"name": attr.name, "kind": SIMPLE}
        doc.update(_value_fields(attr.value))
        return doc
    return {
        "name": attr.name,
        "kind": COMPOSITE,
        "values": {label: _value_fields(sub) for label, sub in attr.values.items()},
    }


def object_document(entity: FuzzyObject) -> dict:
    return {
        "name": entity.name,
        "attributes": [attribute_document(entity.attributes[name]) for name in sorted(entity.attributes)],
    }


def goal_document(goal: Goal) -> dict:
    return {
        "name": goal.name,
        "origin": goal.origin,
        "facets": {label: _value_fields(facet) for label, facet in goal.facets.items()},
    }


def entity_document(entity) -> dict:
    return goal_document(entity) if isinstance(entity, Goal) else object_document(entity)


def kb_to_document(kb: KnowledgeBase) -> dict:
    return {
        "version": kb.version,
        "name": kb.name,
        "objects": [object_document(o) for o in kb.objects],
        "goals": [goal_document(g) for g in kb.goals],
        "instances": [object_document(i) for i in kb.instances],
    }


def dumps_kb(kb: KnowledgeBase) -> bytes:
    return canonical_bytes(kb_to_document(kb))


def save_kb(kb: KnowledgeBase, path: str | Path) -> None:
    Path(path).write_bytes(dumps_kb(kb))


def kb_fingerprint(kb: KnowledgeBase) -> str:
    """Hex digest of the canonical bytes; changes iff content changes."""
    return hashlib.sha256(dumps_kb(kb)).hexdigest()


# ===========================================================================
# partition load and save
# ===========================================================================


def _partition_error(message: str) -> ValidationError:
    report = ValidationReport()
    report.error("$", "invalid-partition", message)
    return ValidationError(message, detail=report.to_document())


def partition_to_document(partition: Partition) -> dict:
    doc: dict = {
        "kind": partition.kind,
        "kb_fingerprint": partition.kb_fingerprint,
        "policy": partition.policy.value,
        "classes": [
            {
                "level": cls.level,
                "reference": entity_document(cls.reference.entity),
                "members": [{"name": name, "score": round_score(score)} for name, score in cls.members],
            }
            for cls in partition.classes
        ],
        "assignment": {name: level for name, level in partition.assignment.items()},
    }
    if partition.pivot is not None:
        doc["pivot"] = partition.pivot
    return doc


def dumps_partition(partition: Partition) -> bytes:
    return canonical_bytes(partition_to_document(partition))


def save_partition(partition: Partition, path: str | Path) -> None:
    Path(path).write_bytes(dumps_partition(partition))


def _parse_reference_entity(doc, kind: str, level: int):
    report = ValidationReport()
    if kind == KIND_GOALS:
        _check_goal(doc, f"$.classes[{level}].reference", report)
    else:
        _check_object(doc, f"$.classes[{level}].reference", report)
    if not report.ok:
        raise ValidationError(
            f"reference entity of level {level} is invalid",
            detail=report.to_document(),
        )
    display: dict[str, str] = {}
    if kind == KIND_GOALS:
        return _build_goal(doc, display)
    cls = FuzzyInstance if kind == KIND_INSTANCES else FuzzyObject
    return _build_object(doc, display, cls=cls)


def loads_partition(data: bytes | str) -> Partition:
    try:
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        document = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not valid UTF-8 JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise _partition_error("a partition must be a JSON object")
    kind = document.get("kind")
    if kind not in KINDS:
        raise _partition_error(f"partition kind must be one of {KINDS}, got {kind!r}")
    fingerprint = document.get("kb_fingerprint")
    if not isinstance(fingerprint, str) or not fingerprint:
        raise _partition_error("partition needs a 'kb_fingerprint' string")
    try:
        policy = UnmatchedPolicy(document.get("policy"))
    except ValueError:
        raise _partition_error(f"unknown policy {document.get('policy')!r}") from None
    classes_doc = document.get("classes")
    if not isinstance(classes_doc, list) or len(classes_doc) != len(LEVELS):
        raise _partition_error(f"partition needs exactly {len(LEVELS)} classes")
    classes = []
    for entry in classes_doc:
        if not isinstance(entry, dict):
            raise _partition_error("each class must be a JSON object")
        level = entry.get("level")
        if level not in LEVELS:
            raise _partition_error(f"class level must be one of {LEVELS}, got {level!r}")
        reference = _parse_reference_entity(entry.get("reference"), kind, level)
        members_doc = entry.get("members")
        if not isinstance(members_doc, list):
            raise _partition_error(f"class {level} needs a 'members' list")
        members = []
        for member in members_doc:
            if (
                not isinstance(member, dict)
                or not isinstance(member.get("name"), str)
                or isinstance(member.get("score"), bool)
                or not isinstance(member.get("score"), (int, float))
            ):
                raise _partition_error(f"class {level} members need a string 'name' and numeric 'score'")
            members.append((normalize_label(member["name"]), float(member["score"])))
        classes.append(SimilarityClass(level=level, reference=ReferenceEntity(level, reference), members=tuple(members)))
    if sorted(cls.level for cls in classes) != list(LEVELS):
        raise _partition_error("classes must cover levels 1 to 4 exactly once")
    classes.sort(key=lambda cls: cls.level)
    assignment_doc = document.get("assignment")
    if not isinstance(assignment_doc, dict):
        raise _partition_error("partition needs an 'assignment' map")
    assignment = {}
    for raw_name, level in assignment_doc.items():
        if level not in LEVELS:
            raise _partition_error(f"assignment level for {raw_name!r} must be one of {LEVELS}")
        assignment[normalize_label(raw_name)] = level
    for cls in classes:
        for name, _ in cls.members:
            if assignment.get(name) != cls.level:
                raise _partition_error(f"member {name!r} of class {cls.level} disagrees with the assignment map")
    if sum(len(cls.members) for cls in classes) != len(assignment):
        raise _partition_error("assignment map and class members disagree")
    pivot = document.get("pivot")
    if pivot is not None and not isinstance(pivot, str):
        raise _partition_error("'pivot' must be a string when present")
    return Partition(
        kind=kind,
        classes=tuple(classes),
        assignment=assignment,
        policy=policy,
        kb_fingerprint=fingerprint,
        pivot=None if pivot is None else normalize_label(pivot),
    )


def load_partition(path: str | Path) -> Partition:
    return loads_partition(Path(path).read_bytes())


# ===========================================================================
# query documents
# ===========================================================================


def parse_query(document) -> Query:
    """Build a query from a parsed document.

    Shape: {"kind": "objects"|"goals", "label"?: str, "description": {...}}
    with an 'attributes' list for objects and a 'facets' map for goals.
    The description must carry possible degrees only.
    """
    report = ValidationReport()
    if not isinstance(document, dict):
        report.error("$", "invalid-type", "a query must be a JSON object")
        raise ValidationError("query failed validation", detail=report.to_document())
    _warn_unknown_fields(document, _QUERY_FIELDS, "$", report)
    kind = document.get("kind")
    if kind not in (KIND_OBJECTS, KIND_GOALS):
        report.error("$.kind", "invalid-kind", f"query kind must be 'objects' or 'goals', got {kind!r}")
    label = document.get("label", "query")
    if not isinstance(label, str) or not label.strip():
        report.error("$.label", "invalid-type", "query label must be a non-empty string")
    description = document.get("description")
    if kind == KIND_GOALS:
        _check_goal(
            description,
            "$.description",
            report,
            forbid_necessary_code="query-has-necessary",
            require_name=False,
            require_origin=False,
        )
    elif kind == KIND_OBJECTS:
        _check_object(
            description,
            "$.description",
            report,
            forbid_necessary_code="query-has-necessary",
            require_name=False,
        )
    if not report.ok:
        raise ValidationError(
            f"query failed validation with {len(report.errors)} error(s)",
            detail=report.to_document(),
        )
    display: dict[str, str] = {}
    if kind == KIND_GOALS:
        built = _build_goal(description, display, fallback_name=label, fallback_origin=ORIGIN_USER)
    else:
        built = _build_object(description, display, fallback_name=label)
    return Query(kind=kind, description=built, label=label)


def loads_query(data: bytes | str) -> Query:
    try:
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        document = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not valid UTF-8 JSON: {exc}") from exc
    return parse_query(document)


def load_query(path: str | Path) -> Query:
    return loads_query(Path(path).read_bytes())
