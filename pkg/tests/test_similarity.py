import random

import pytest
from hypothesis import given, strategies as st

from fnet import (
    BothEmptyError,
    FuzzyObject,
    FuzzySet,
    FuzzyValue,
    Goal,
    KindMismatchError,
    KnowledgeBase,
    NoPairedAttributesError,
    NoPairedFacetsError,
    NoPairedValuesError,
    EmptyKindError,
    UnmatchedPolicy,
    composite_attribute,
    sim_attribute,
    sim_goal,
    sim_instance,
    sim_object,
    sim_sets,
    sim_value,
    similarity_matrix,
    simple_attribute,
)
from fnet.model import FuzzyInstance

from genkb import make_kb
from oracles import oracle_sim_entities, oracle_sim_sets, set_as_dict

TOL = 1e-9

# Two descriptions of one editing procedure bundle, kept verbatim as the
# canonical worked example for label-paired set similarity.
PROCEDURES_A = {"cutwithmenu": 0.8, "erasewithkey": 1.0, "select": 0.5}
PROCEDURES_B = {"erasewithmenu": 1.0, "erasewithkey": 0.7, "select": 0.5}


def test_worked_example_set_similarity_is_07():
    assert sim_sets(FuzzySet(PROCEDURES_A), FuzzySet(PROCEDURES_B)) == pytest.approx(0.7, abs=TOL)


def test_worked_example_agrees_with_brute_force_oracle():
    assert oracle_sim_sets(PROCEDURES_A, PROCEDURES_B) == pytest.approx(0.7, abs=TOL)


def test_label_pairing_differs_from_positional_pairing():
    # Pairing entries by their list position instead of by label would score
    # this pair 0.8: position 1 would match cutwithmenu against erasewithmenu
    # (min 0.8) even though they name different procedures.  Label pairing is
    # the normative rule precisely because it is order-independent; the 0.8
    # figure is recorded here as the documented alternative.
    a, b = list(PROCEDURES_A.items()), list(PROCEDURES_B.items())
    positional_inter = max(min(da, db) for (_, da), (_, db) in zip(a, b))
    positional_union = max(max(da, db) for (_, da), (_, db) in zip(a, b))
    assert positional_inter / positional_union == pytest.approx(0.8, abs=TOL)
    assert sim_sets(FuzzySet(PROCEDURES_A), FuzzySet(PROCEDURES_B)) == pytest.approx(0.7, abs=TOL)


def test_identical_sets_score_one():
    fs = FuzzySet({"a": 0.4, "b": 0.9})
    assert sim_sets(fs, fs) == 1.0


def test_disjoint_supports_score_zero():
    assert sim_sets(FuzzySet({"a": 0.4}), FuzzySet({"b": 0.9})) == 0.0


def test_one_empty_side_scores_zero():
    assert sim_sets(FuzzySet(), FuzzySet({"b": 0.9})) == 0.0


def test_both_empty_is_an_error():
    with pytest.raises(BothEmptyError):
        sim_sets(FuzzySet(), FuzzySet())


# ---------------------------------------------------------------------------
# values: possible and necessary parts
# ---------------------------------------------------------------------------


def test_possible_only_identical_values_score_one():
    value = FuzzyValue({"a": 0.3, "b": 0.8})
    assert sim_value(value, value) == 1.0


def test_necessary_and_possible_average():
    # necessary parts score 0.5, possible parts 1.0, mean 0.75
    a = FuzzyValue({"p": 1.0}, {"p": 0.5})
    b = FuzzyValue({"p": 1.0}, {"p": 1.0})
    assert sim_value(a, b) == pytest.approx(0.75, abs=TOL)


def test_single_sided_necessary_degrades_to_possible_with_warning():
    a = FuzzyValue({"p": 1.0}, {"p": 0.5})
    b = FuzzyValue({"p": 1.0})
    warnings: list[str] = []
    assert sim_value(a, b, warnings) == 1.0
    assert len(warnings) == 1 and "mixed-necessity" in warnings[0]


def test_value_invariant_rejects_necessary_above_possible():
    with pytest.raises(ValueError):
        FuzzyValue({"p": 0.5}, {"p": 0.6})
    with pytest.raises(ValueError):
        FuzzyValue({"p": 0.5}, {"q": 0.1})


def test_empty_necessary_is_treated_as_absent():
    value = FuzzyValue({"p": 0.5}, {})
    assert value.necessary is None


# ---------------------------------------------------------------------------
# attributes
# ---------------------------------------------------------------------------


SUBSTANTIVE_GOALS = {
    "to-delete": {"erasewithmenu": 1.0, "erasewithkey": 0.8},
    "to-cut": {"erasewithkey": 0.7, "erasewithmenu": 1.0},
}
SIGNS_GOALS = {
    "to-delete": {"erasewithmenu": 1.0, "erasewithkey": 0.9},
    "to-cut": {"cutwithmenu": 0.8, "erasewithkey": 1.0},
}


def test_composite_attribute_takes_min_over_label_paired_values():
    a = composite_attribute("goals", SUBSTANTIVE_GOALS)
    b = composite_attribute("goals", SIGNS_GOALS)
    assert sim_attribute(a, b) == pytest.approx(0.7, abs=TOL)
    # the to-delete facet matches at 1.0; to-cut is the minimizer at 0.7
    to_delete = sim_value(a.values["to-delete"], b.values["to-delete"])
    to_cut = sim_value(a.values["to-cut"], b.values["to-cut"])
    assert to_delete == pytest.approx(1.0, abs=TOL)
    assert to_cut == pytest.approx(0.7, abs=TOL)


def test_composite_to_cut_value_under_positional_pairing_would_be_one():
    # By position the to-cut sets would line up erasewithkey with cutwithmenu
    # and erasewithmenu with erasewithkey, scoring 1.0.  Label pairing gives
    # 0.7; the aggregate object score below stays 0.7 either way, which is
    # why both variants are recorded.
    a = list(SUBSTANTIVE_GOALS["to-cut"].items())
    b = list(SIGNS_GOALS["to-cut"].items())
    inter = max(min(da, db) for (_, da), (_, db) in zip(a, b))
    union = max(max(da, db) for (_, da), (_, db) in zip(a, b))
    assert inter / union == pytest.approx(1.0, abs=TOL)


def test_disjoint_composite_values_zero_policy():
    a = composite_attribute("goals", {"p": {"x": 1.0}})
    b = composite_attribute("goals", {"q": {"x": 1.0}})
    assert sim_attribute(a, b, UnmatchedPolicy.ZERO) == 0.0


def test_disjoint_composite_values_ignore_policy_is_an_error():
    a = composite_attribute("goals", {"p": {"x": 1.0}})
    b = composite_attribute("goals", {"q": {"x": 1.0}})
    with pytest.raises(NoPairedValuesError):
        sim_attribute(a, b, UnmatchedPolicy.IGNORE)


def test_attribute_kind_mismatch_is_an_error():
    a = simple_attribute("goals", {"x": 1.0})
    b = composite_attribute("goals", {"p": {"x": 1.0}})
    with pytest.raises(KindMismatchError):
        sim_attribute(a, b)


# ---------------------------------------------------------------------------
# objects and instances
# ---------------------------------------------------------------------------


def _substantive(cls=FuzzyObject):
    return cls(
        name="the-substantive",
        attributes=[
            simple_attribute("objects", {"the-sign": 1.0, "the-signs": 0.7, "the-letters": 0.7, "word": 0.5}),
            composite_attribute("goals", SUBSTANTIVE_GOALS),
        ],
    )


def _signs(cls=FuzzyObject):
    return cls(
        name="the-signs",
        attributes=[
            simple_attribute("objects", {"the-signs": 1.0, "the-noun": 0.7, "the-letters": 0.6}),
            composite_attribute("goals", SIGNS_GOALS),
        ],
    )


def test_worked_example_object_similarity():
    a, b = _substantive(), _signs()
    assert sim_object(a, b, UnmatchedPolicy.ZERO) == pytest.approx(0.7, abs=TOL)
    objects_attr = sim_attribute(a.attributes["objects"], b.attributes["objects"], UnmatchedPolicy.ZERO)
    goals_attr = sim_attribute(a.attributes["goals"], b.attributes["goals"], UnmatchedPolicy.ZERO)
    assert objects_attr == pytest.approx(0.7, abs=TOL)
    assert goals_attr == pytest.approx(0.7, abs=TOL)


def test_object_similarity_is_bounded_by_every_paired_attribute():
    a, b = _substantive(), _signs()
    whole = sim_object(a, b, UnmatchedPolicy.ZERO)
    for name in a.attributes.keys() & b.attributes.keys():
        assert whole <= sim_attribute(a.attributes[name], b.attributes[name], UnmatchedPolicy.ZERO) + TOL


def test_instances_aggregate_like_objects():
    a, b = _substantive(FuzzyInstance), _signs(FuzzyInstance)
    assert sim_instance(a, b, UnmatchedPolicy.ZERO) == pytest.approx(0.7, abs=TOL)


def test_unmatched_attribute_zero_policy_drags_the_min_to_zero():
    a = FuzzyObject(name="a", attributes=[simple_attribute("shape", {"x": 1.0}), simple_attribute("color", {"y": 1.0})])
    b = FuzzyObject(name="b", attributes=[simple_attribute("shape", {"x": 1.0})])
    assert sim_object(a, b, UnmatchedPolicy.ZERO) == 0.0
    assert sim_object(a, b, UnmatchedPolicy.IGNORE) == 1.0


def test_no_shared_attributes_ignore_policy_is_an_error():
    a = FuzzyObject(name="a", attributes=[simple_attribute("shape", {"x": 1.0})])
    b = FuzzyObject(name="b", attributes=[simple_attribute("color", {"x": 1.0})])
    with pytest.raises(NoPairedAttributesError):
        sim_object(a, b, UnmatchedPolicy.IGNORE)
    assert sim_object(a, b, UnmatchedPolicy.ZERO) == 0.0


def test_disjoint_values_everywhere_zero_policy_scores_zero():
    a = FuzzyObject(name="a", attributes=[simple_attribute("shape", {"x": 1.0})])
    b = FuzzyObject(name="b", attributes=[simple_attribute("shape", {"y": 1.0})])
    assert sim_object(a, b, UnmatchedPolicy.ZERO) == 0.0


# ---------------------------------------------------------------------------
# goals
# ---------------------------------------------------------------------------


def test_two_single_facet_user_goals_reduce_to_set_similarity():
    a = Goal(name="erase-the-letters", origin="user", facets={"to-erase": FuzzyValue(PROCEDURES_A)})
    b = Goal(name="erase-the-substantive", origin="user", facets={"to-erase": FuzzyValue(PROCEDURES_B)})
    assert sim_goal(a, b) == pytest.approx(0.7, abs=TOL)


def test_system_goals_average_necessary_and_possible_per_facet():
    # one shared facet with necessary parts scoring 0.6 and possible 0.8
    a = Goal(name="a", origin="system", facets={"f": FuzzyValue({"x": 0.8}, {"x": 0.6})})
    b = Goal(name="b", origin="system", facets={"f": FuzzyValue({"x": 1.0}, {"x": 1.0})})
    from oracles import oracle_sim_value, value_as_dict

    expected = oracle_sim_value(value_as_dict(a.facets["f"]), value_as_dict(b.facets["f"]))
    got = sim_goal(a, b)
    assert got == pytest.approx(expected, abs=TOL)
    assert got == pytest.approx(0.7, abs=TOL)


def test_goal_default_policy_ignores_unmatched_facets():
    a = Goal(name="a", origin="user", facets={"f": FuzzyValue({"x": 1.0}), "g": FuzzyValue({"z": 0.5})})
    b = Goal(name="b", origin="user", facets={"f": FuzzyValue({"x": 1.0})})
    assert sim_goal(a, b) == 1.0
    assert sim_goal(a, b, UnmatchedPolicy.ZERO) == 0.0


def test_goals_without_shared_facets_are_incomparable():
    a = Goal(name="a", origin="user", facets={"f": FuzzyValue({"x": 1.0})})
    b = Goal(name="b", origin="user", facets={"g": FuzzyValue({"x": 1.0})})
    with pytest.raises(NoPairedFacetsError):
        sim_goal(a, b)


# ---------------------------------------------------------------------------
# measure axioms
# ---------------------------------------------------------------------------


labels = st.sampled_from(["a", "b", "c", "d", "e", "f"])
degrees = st.sampled_from([i / 10 for i in range(1, 11)])
nonempty_sets = st.dictionaries(labels, degrees, min_size=1, max_size=6).map(FuzzySet)
factors = st.sampled_from([i / 10 for i in range(0, 11)])


@given(nonempty_sets)
def test_reflexivity(a):
    assert sim_sets(a, a) == pytest.approx(1.0, abs=TOL)


@given(nonempty_sets, nonempty_sets)
def test_symmetry_is_exact(a, b):
    assert sim_sets(a, b) == sim_sets(b, a)


@given(nonempty_sets, nonempty_sets)
def test_range_and_disjointness(a, b):
    score = sim_sets(a, b)
    assert 0.0 <= score <= 1.0
    assert (score == 0.0) == a.support().isdisjoint(b.support())


@given(nonempty_sets, factors, factors)
def test_monotonicity_on_nested_sets(c, f1, f2):
    # A <= B <= C pointwise implies sim(A, C) <= sim(B, C)
    b = c.scale(f1)
    a = b.scale(f2)
    assert a.pointwise_leq(b) and b.pointwise_leq(c)
    sim_b = sim_sets(b, c)
    sim_a = sim_sets(a, c) if not a.is_empty() else 0.0
    assert sim_a <= sim_b + TOL


@given(nonempty_sets, nonempty_sets)
def test_agreement_with_brute_force_oracle(a, b):
    assert sim_sets(a, b) == oracle_sim_sets(set_as_dict(a), set_as_dict(b))


def test_entity_aggregation_agrees_with_oracle_on_random_pairs():
    rng = random.Random(20240817)
    for _ in range(60):
        kb = make_kb(rng, n_objects=4, n_goals=4, uniform=rng.random() < 0.5)
        for kind in ("objects", "goals"):
            entities = kb.entities(kind)
            a, b = rng.choice(entities), rng.choice(entities)
            for policy in UnmatchedPolicy:
                try:
                    expected = oracle_sim_entities(a, b, policy.value)
                except AssertionError:
                    continue
                from fnet import sim_entities

                assert sim_entities(a, b, policy) == expected


# ---------------------------------------------------------------------------
# matrix
# ---------------------------------------------------------------------------


def test_sample_matrix_values(sample_kb):
    matrix = similarity_matrix(sample_kb, "objects", UnmatchedPolicy.ZERO)
    assert matrix.names == ("the-substantive", "the-signs")
    assert matrix.scores[0][0] == 1.0 and matrix.scores[1][1] == 1.0
    assert matrix.scores[0][1] == pytest.approx(0.7, abs=TOL)
    assert matrix.scores[1][0] == pytest.approx(0.7, abs=TOL)
    assert not matrix.failed


def test_matrix_is_symmetric_with_unit_diagonal():
    rng = random.Random(7)
    kb = make_kb(rng, n_objects=6, uniform=True)
    matrix = similarity_matrix(kb, "objects", UnmatchedPolicy.ZERO)
    n = len(matrix.names)
    for i in range(n):
        assert matrix.scores[i][i] == 1.0
        for j in range(n):
            assert matrix.scores[i][j] == matrix.scores[j][i]


def test_matrix_marks_incomparable_pairs():
    kb = KnowledgeBase(
        name="tiny",
        objects=[
            FuzzyObject(name="a", attributes=[simple_attribute("shape", {"x": 1.0})]),
            FuzzyObject(name="b", attributes=[simple_attribute("color", {"x": 1.0})]),
        ],
    )
    matrix = similarity_matrix(kb, "objects", UnmatchedPolicy.IGNORE)
    assert matrix.scores[0][1] == 0.0
    assert (0, 1) in matrix.failed and (1, 0) in matrix.failed
    assert any("share no attribute names" in note for note in matrix.notes)


def test_matrix_of_empty_kind_is_an_error(sample_kb):
    with pytest.raises(EmptyKindError):
        similarity_matrix(sample_kb, "instances")
