import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from ibrs import fixtures
from ibrs.errors import (CyclicTargets, DanglingReference, IbrsError, LevelBoundExceeded, NotASubset,
                         OriginNotPoint, UnknownArrow)
from ibrs.structure import (Arrow, PointCopy, build_structure, closure_sets, level, random_structure,
                            restrict, structure_from_dict, structure_from_edges, structure_from_json)

from reference import NaiveStructure

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rand(seed, points="abcdef"):
    rng = random.Random(seed)
    n = rng.randint(1, len(points))
    return random_structure(rng, points[:n], max_copies=2, max_level=3,
                            density=rng.choice([0.1, 0.25]), max_arrows=12)


def test_single_arrow_level_one():
    s = structure_from_edges([("alpha", "a", "b")], level_bound=1)
    assert level(s, "alpha") == 1
    assert s.max_level == 1


def test_arrow_on_arrow_is_level_two():
    s = structure_from_edges([("alpha", "a", "b"), ("beta", "c", "alpha")], level_bound=2)
    assert level(s, "beta") == 2


def test_level_three_in_fixture():
    assert level(fixtures.level3_solution(), "gamma1") == 3


def test_origin_must_be_a_point():
    with pytest.raises(OriginNotPoint):
        structure_from_edges([("alpha", "a", "b"), ("beta", "alpha", "b")])
    with pytest.raises(OriginNotPoint):
        build_structure(["a", "b"], [["a", 0], ["b", 0]],
                        [{"id": "x", "origin": ["a", 0], "target": ["b", 0]},
                         {"id": "y", "origin": {"arrow": "x"}, "target": ["a", 0]}])


def test_level_bound_enforced():
    with pytest.raises(LevelBoundExceeded):
        structure_from_edges([("alpha", "a", "b"), ("beta", "c", "alpha")], level_bound=1)


def test_dangling_and_cyclic_targets():
    with pytest.raises(DanglingReference):
        build_structure(["a"], [["a", 0]], [{"id": "x", "origin": ["a", 0], "target": {"arrow": "nope"}}])
    with pytest.raises(DanglingReference):
        build_structure(["a", "b"], [["a", 0]], [{"id": "x", "origin": ["a", 0], "target": ["b", 0]}])
    with pytest.raises(CyclicTargets):
        build_structure(["a"], [["a", 0]], [{"id": "x", "origin": ["a", 0], "target": {"arrow": "y"}},
                                            {"id": "y", "origin": ["a", 0], "target": {"arrow": "x"}}])


def test_duplicate_ids_rejected():
    with pytest.raises(IbrsError):
        structure_from_edges([("a1", "a", "b"), ("a1", "b", "a")])


def test_unknown_arrow_lookup():
    with pytest.raises(UnknownArrow):
        fixtures.need_smooth().arrow("nope")


def test_closure_sets_by_hand():
    s = structure_from_edges([("alpha", "x", "y"), ("beta", "z", "alpha"), ("gamma", "w", "beta")])
    assert closure_sets(s, "alpha").origins == {"x"}
    assert closure_sets(s, "alpha").destinations == {"y"}
    assert closure_sets(s, "beta").origins == {"x", "z"}
    assert closure_sets(s, "beta").destinations == {"y"}
    assert closure_sets(s, "gamma").origins == {"w", "x", "z"}
    assert closure_sets(s, "gamma").destinations == {"y"}


def test_restrict_fixture_subdiagrams():
    s = fixtures.level3_solution()
    assert {a.id for a in restrict(s, {"x", "y"}).arrows} == {"alpha1", "alpha3", "beta3", "beta4"}
    assert {a.id for a in restrict(s, {"x", "y'"}).arrows} == {"alpha2"}
    assert restrict(s, s.carrier) == s


def test_restrict_rejects_foreign_points():
    with pytest.raises(NotASubset):
        restrict(fixtures.need_smooth(), {"a", "z"})


def test_copyless_point_allowed():
    s = build_structure(["a", "b"], [["a", 0]], [])
    assert s.copies_of("b") == []


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_levels_and_closures_follow_targets(seed):
    s = rand(seed)
    naive = NaiveStructure(s)
    for a in s.arrows:
        lv = level(s, a.id)
        assert lv <= s.level_bound
        if isinstance(a.target, PointCopy):
            assert lv == 1
            assert closure_sets(s, a.id).origins == {a.origin.point}
            assert closure_sets(s, a.id).destinations == {a.target.point}
        else:
            assert lv == level(s, a.target) + 1
            t = closure_sets(s, a.target)
            assert closure_sets(s, a.id).destinations == t.destinations
            assert closure_sets(s, a.id).origins == {a.origin.point} | t.origins
        assert closure_sets(s, a.id).origins == naive.O(a.id)
        assert closure_sets(s, a.id).destinations == naive.D(a.id)


@settings(max_examples=150, deadline=None)
@given(seeds, st.data())
def test_restrict_idempotent_and_monotone(seed, data):
    s = rand(seed)
    Y = data.draw(st.sets(st.sampled_from(s.carrier)))
    X = data.draw(st.sets(st.sampled_from(sorted(Y)))) if Y else set()
    rx, ry = restrict(s, X), restrict(s, Y)
    assert restrict(rx, X) == rx
    assert {a.id for a in rx.arrows} <= {a.id for a in ry.arrows}
    # every kept arrow mentions only kept objects
    for a in rx.arrows:
        assert a.origin.point in X


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_json_round_trip(seed):
    s = rand(seed)
    assert structure_from_json(s.to_json()) == s
    assert structure_from_dict(json.loads(json.dumps(s.to_dict()))) == s


def test_build_structure_accepts_json_arrow_forms():
    s = build_structure(["a", "b", "c"], [["a", 0], ["b", 0], ["c", 0]], [
        {"id": "ab", "origin": ["a", 0], "target": {"point": ["b", 0]}},
        {"id": "c_ab", "origin": {"point": ["c", 0]}, "target": {"arrow": "ab"}},
    ])
    assert level(s, "c_ab") == 2
    assert s.arrow("c_ab").target == "ab"
    assert isinstance(s.arrow("ab"), Arrow)


def test_malformed_json_reports_error():
    with pytest.raises(IbrsError):
        structure_from_json("{")
    with pytest.raises(IbrsError):
        structure_from_json('{"copies": []}')
