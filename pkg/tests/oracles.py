"""Independent brute-force reference implementations for the tests.

Everything here works on plain dicts and recomputes scores from first
principles: explicit max/min scans over the union of supports, explicit
min-aggregation over name-paired parts.  None of it calls the library's
arithmetic, so agreement between the two is meaningful.
"""

from __future__ import annotations


def oracle_sim_sets(a: dict[str, float], b: dict[str, float]) -> float:
    labels = set(a) | set(b)
    if not labels:
        raise AssertionError("oracle needs at least one non-empty set")
    intersection_height = max(min(a.get(label, 0.0), b.get(label, 0.0)) for label in labels)
    union_height = max(max(a.get(label, 0.0), b.get(label, 0.0)) for label in labels)
    return intersection_height / union_height


def oracle_sim_value(a: dict, b: dict) -> float:
    # a value is {"possible": {...}, "necessary": {...} or None}
    a_nec, b_nec = a.get("necessary"), b.get("necessary")
    if a_nec and b_nec:
        return (oracle_sim_sets(a_nec, b_nec) + oracle_sim_sets(a["possible"], b["possible"])) / 2.0
    return oracle_sim_sets(a["possible"], b["possible"])


def _aggregate(scores: list[float], unmatched: bool, policy: str, empty_error: str) -> float:
    if policy == "zero" and unmatched:
        scores = scores + [0.0]
    if not scores:
        raise AssertionError(empty_error)
    return min(scores)


def oracle_sim_composite(a: dict[str, dict], b: dict[str, dict], policy: str) -> float:
    shared = sorted(set(a) & set(b))
    scores = [oracle_sim_value(a[label], b[label]) for label in shared]
    return _aggregate(scores, set(a) != set(b), policy, "no shared value labels")


def oracle_sim_object(a: dict, b: dict, policy: str) -> float:
    # an object is {attr_name: ("simple", value) or ("composite", {label: value})}
    scores = []
    for name in sorted(set(a) & set(b)):
        kind_a, payload_a = a[name]
        kind_b, payload_b = b[name]
        if kind_a != kind_b:
            raise AssertionError(f"kind mismatch on {name}")
        if kind_a == "simple":
            scores.append(oracle_sim_value(payload_a, payload_b))
        else:
            scores.append(oracle_sim_composite(payload_a, payload_b, policy))
    return _aggregate(scores, set(a) != set(b), policy, "no shared attribute names")


def oracle_sim_goal(a: dict[str, dict], b: dict[str, dict], policy: str) -> float:
    # a goal is {facet_label: value}
    shared = sorted(set(a) & set(b))
    scores = [oracle_sim_value(a[label], b[label]) for label in shared]
    return _aggregate(scores, set(a) != set(b), policy, "no shared facet labels")


def oracle_band_of(score: float) -> int:
    # the four standard bands; only the top one includes its upper bound
    if score < 0.25:
        return 1
    if score < 0.5:
        return 2
    if score < 0.75:
        return 3
    return 4


# ---------------------------------------------------------------------------
# converters from model values to plain dicts (data extraction only; the
# oracle arithmetic above never touches library code)
# ---------------------------------------------------------------------------


def set_as_dict(fuzzy_set) -> dict[str, float]:
    return {label: degree for label, degree in fuzzy_set.items()}


def value_as_dict(value) -> dict:
    return {
        "possible": set_as_dict(value.possible),
        "necessary": None if value.necessary is None else set_as_dict(value.necessary),
    }


def object_as_dict(entity) -> dict:
    out = {}
    for name, attr in entity.attributes.items():
        if attr.kind == "simple":
            out[name] = ("simple", value_as_dict(attr.value))
        else:
            out[name] = ("composite", {label: value_as_dict(sub) for label, sub in attr.values.items()})
    return out


def goal_as_dict(goal) -> dict:
    return {label: value_as_dict(facet) for label, facet in goal.facets.items()}


def oracle_sim_entities(a, b, policy: str) -> float:
    from fnet import Goal

    if isinstance(a, Goal):
        return oracle_sim_goal(goal_as_dict(a), goal_as_dict(b), policy)
    return oracle_sim_object(object_as_dict(a), object_as_dict(b), policy)
