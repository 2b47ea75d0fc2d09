import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from ibrs import fixtures
from ibrs.errors import SearchSpaceExceeded, UnknownProperty
from ibrs.properties import (PROPERTIES, POSITIVE_FINITE_ROWS, ROWS, check_all, check_family_closure,
                             check_property, property_id, verify_implication, violates)
from ibrs.table import MuTable, powerset, table_from_json

seeds = st.integers(min_value=0, max_value=2**32 - 1)

# direct frozenset readings of the universally quantified conditions
NAIVE = {
    "mu_subset": lambda F, f: all(f[X] <= X for X in F),
    "mu_PR": lambda F, f: all(f[Y] & X <= f[X] for X in F for Y in F if X <= Y),
    "mu_CUT": lambda F, f: all(f[X] <= f[Y] for X in F for Y in F if f[X] <= Y <= X),
    "mu_CM": lambda F, f: all(f[Y] <= f[X] for X in F for Y in F if f[X] <= Y <= X),
    "mu_CUM": lambda F, f: all(f[Y] == f[X] for X in F for Y in F if f[X] <= Y <= X),
    "mu_subset_supset": lambda F, f: all(f[X] == f[Y] for X in F for Y in F if f[X] <= Y and f[Y] <= X),
    "mu_RatM": lambda F, f: all(f[X] <= f[Y] & X for X in F for Y in F if X <= Y and X & f[Y]),
    "mu_eq": lambda F, f: all(f[X] == f[Y] & X for X in F for Y in F if X <= Y and X & f[Y]),
    "mu_OR": lambda F, f: all(f[X | Y] <= f[X] | f[Y] for X in F for Y in F if X | Y in F),
    "mu_wOR": lambda F, f: all(f[X | Y] <= f[X] | Y for X in F for Y in F if X | Y in F),
    "mu_par": lambda F, f: all(f[X | Y] in (f[X], f[Y], f[X] | f[Y]) for X in F for Y in F if X | Y in F),
    "mu_empty": lambda F, f: all(f[X] or not X for X in F),
}


def _random_table(rng, n, subset_only=True, full_family=None):
    U = tuple("abcd"[:n])
    sets = powerset(U)
    if full_family or rng.random() < 0.5:
        fam = sets
    else:
        fam = [X for X in sets if rng.random() < 0.6]
    vals = {}
    for X in fam:
        pool = sorted(X) if subset_only else list(U)
        vals[X] = frozenset(x for x in pool if rng.random() < 0.6)
    return MuTable(U, fam, vals)


def test_need_pr_verdicts():
    t = fixtures.need_pr_table()
    for p in ("mu_subset", "mu_CUM", "mu_RatM", "mu_subset_supset"):
        assert check_property(t, p).holds, p
    v = check_property(t, "mu_PR")
    assert not v.holds
    assert v.witness == {"X": ["a", "b"], "Y": ["a", "b", "c"]}


def test_mu_cum_cd_verdicts():
    t = fixtures.mu_cum_cd_table()
    assert check_property(t, "mu_subset")
    assert check_property(t, "mu_CUM")
    assert not check_property(t, "mu_subset_supset")


def test_closures():
    t = fixtures.need_pr_table()
    for c in ("intersection", "union", "complement", "difference", "singletons"):
        assert check_family_closure(t, c)
    cd = fixtures.mu_cum_cd_table()
    v = check_family_closure(cd, "∩")
    assert not v and v.witness["missing"] == ["a", "b"]
    small = MuTable("a", [frozenset(), frozenset("a")], {frozenset(): frozenset(), frozenset("a"): frozenset("a")})
    assert check_family_closure(small, "union")


def test_property_names_and_aliases():
    assert property_id("(μPR)") == "mu_PR"
    assert property_id("cum") == "mu_CUM"
    assert property_id("⊆⊇") == "mu_subset_supset"
    with pytest.raises(UnknownProperty):
        property_id("nonsense")
    assert len(check_all(fixtures.need_pr_table())) == len(PROPERTIES)


def test_skipped_instances_are_counted():
    # (PR') needs X ∩ Y in the family
    t = MuTable("abc", [frozenset("ab"), frozenset("bc")],
                {frozenset("ab"): frozenset("a"), frozenset("bc"): frozenset("c")})
    v = check_property(t, "mu_PR_prime")
    assert v.holds and v.skipped_instances > 0


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_verdicts_match_direct_reading(seed):
    rng = random.Random(seed)
    t = _random_table(rng, rng.randint(1, 3), subset_only=rng.random() < 0.8)
    F, f = list(t.family), t.values
    for p, naive in NAIVE.items():
        assert check_property(t, p).holds == naive(F, f), p


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_witnesses_replay(seed):
    rng = random.Random(seed)
    t = _random_table(rng, rng.randint(1, 3), subset_only=rng.random() < 0.7)
    for p in PROPERTIES:
        v = check_property(t, p)
        if not v.holds:
            assert violates(t, p, v.witness), (p, v.witness)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_shrinking_the_family_never_creates_violations(seed):
    rng = random.Random(seed)
    t = _random_table(rng, rng.randint(1, 3), full_family=True)
    sub = [X for X in t.family if rng.random() < 0.6]
    t2 = MuTable(t.universe, sub, {X: t.values[X] for X in sub})
    for p in PROPERTIES:
        if p == "mu_in":
            continue  # existential in b, so fewer pairs can break it
        if check_property(t, p).holds:
            assert check_property(t2, p).holds, p


@pytest.mark.parametrize("row", POSITIVE_FINITE_ROWS)
def test_positive_rows_two_points_all_families(row):
    rep = verify_implication(row, universe_size=2, mode="exhaustive", families="all")
    assert rep["counterexample"] is None
    assert rep["tables_checked"] > 0


@pytest.mark.parametrize("row", POSITIVE_FINITE_ROWS)
def test_positive_rows_three_points_filtered(row):
    rep = verify_implication(row, universe_size=3, mode="filtered")
    assert rep["counterexample"] is None


def test_known_negative_rows():
    rep = verify_implication("4")
    assert rep["verdict"] == "counterexample confirmed"
    assert rep["counterexample"] == fixtures.need_pr_table().to_dict()
    rep = verify_implication("9")
    assert rep["counterexample"] == fixtures.mu_cum_cd_table().to_dict()


@pytest.mark.parametrize("row", ["20", "21", "22"])
def test_searched_negative_rows(row):
    rep = verify_implication(row, universe_size=3)
    assert rep["verdict"] == "counterexample found"
    t = table_from_json(json.dumps(rep["counterexample"]))
    r = ROWS[row]
    assert all(check_property(t, p).holds for p in r.lhs + r.aux)
    assert not all(check_property(t, p).holds for p in r.rhs)


def test_unverifiable_rows_are_reported():
    for row in ("5.2", "19"):
        assert verify_implication(row)["verdict"].startswith("unverifiable")


def test_sampled_mode_is_seeded():
    a = verify_implication("3", universe_size=3, mode="sampled", seed=7, samples=2000)
    b = verify_implication("3", universe_size=3, mode="sampled", seed=7, samples=2000)
    assert a == b and a["counterexample"] is None


def test_search_limit():
    with pytest.raises(SearchSpaceExceeded):
        verify_implication("3", universe_size=3, mode="exhaustive", limit=10)
