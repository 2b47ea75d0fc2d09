import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from ibrs import fixtures
from ibrs.errors import DomainMiss, NotNested
from ibrs.structure import PointCopy, Structure, Arrow, random_structure, restrict, structure_from_edges
from ibrs.validity import mu, mu_attacking, mu_table, valid_x_impl_y, valid_x_to_y

from reference import NaiveStructure, subsets

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rand(seed, points="abcd"):
    rng = random.Random(seed)
    return random_structure(rng, points[:rng.randint(1, len(points))], max_copies=2,
                            max_level=rng.randint(1, 3), density=rng.choice([0.15, 0.3, 0.5]), max_arrows=14)


def test_lone_arrow_is_valid():
    s = structure_from_edges([("alpha", "a", "b")])
    assert valid_x_to_y(s, "ab", "ab").valid == {"alpha"}


def test_attacked_arrow_loses_validity():
    s = structure_from_edges([("alpha", "a", "b"), ("beta", "c", "alpha")])
    assert valid_x_to_y(s, "abc", "abc").valid == {"beta"}
    assert mu(s, "abc") == {"a", "b", "c"}


def test_level3_full_diagram_valid_set():
    s = fixtures.level3_solution()
    assert valid_x_to_y(s, {"x", "y", "y'"}, {"x", "y", "y'"}).valid == \
        {"alpha3", "beta1", "beta2", "gamma1", "gamma2"}


def test_implication_validity_examples():
    s = structure_from_edges([("alpha", "a", "b")])
    assert valid_x_impl_y(s, "a", "ab").valid == {"alpha"}
    s = structure_from_edges([("alpha", "a", "b"), ("beta", "c", "alpha")])
    # the attacker's origin is in Y and nothing from X answers it
    assert "alpha" not in valid_x_impl_y(s, "ab", "abc").valid


def test_implication_needs_nesting():
    with pytest.raises(NotNested):
        valid_x_impl_y(fixtures.need_smooth(), "ab", "bc")


def test_need_smooth_mu():
    s = fixtures.need_smooth()
    assert mu(s, "abc") == {"a"}
    assert mu(s, "ac") == {"a", "c"}


def test_arrowless_mu_is_identity():
    s = Structure("ab", [PointCopy("a"), PointCopy("b")], [])
    assert mu(s, "ab") == {"a", "b"}
    assert mu_attacking(s, {frozenset("ab"): frozenset("a")}, "ab") == {"a"}


def test_mu_attacking_with_identity_eta_is_mu():
    s = fixtures.level3_solution()
    fam = subsets(s.carrier)
    eta = {X: X for X in fam}
    assert all(mu_attacking(s, eta, X) == mu(s, X) for X in fam)


def test_mu_attacking_domain_miss():
    with pytest.raises(DomainMiss):
        mu_attacking(fixtures.need_smooth(), {}, "ab")


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_validity_and_mu_match_direct_definition(seed):
    s = rand(seed)
    naive = NaiveStructure(s)
    fam = subsets(s.carrier)
    for X in fam:
        assert mu(s, X) == naive.mu(X)
        # restricting first gives the same minimal elements
        assert mu(restrict(s, X), X) == mu(s, X)
        assert mu(s, X) <= X
    rng = random.Random(seed)
    for _ in range(6):
        Y = rng.choice(fam)
        X = frozenset(x for x in Y if rng.random() < 0.5)
        assert valid_x_to_y(s, X, Y).valid == naive.valid(X, Y)
        assert valid_x_impl_y(s, X, Y).valid == naive.valid(X, Y, implies=True)


def _level1_structures(points, max_copies):
    for counts in product(range(1, max_copies + 1), repeat=len(points)):
        copies = [PointCopy(p, i) for p, c in zip(points, counts) for i in range(c)]
        pairs = [(a, b) for a in copies for b in copies]
        if len(pairs) > 16:
            continue
        for bits in range(1 << len(pairs)):
            yield Structure(points, copies, [Arrow(f"r{k}", a, b) for k, (a, b) in enumerate(pairs)
                                             if bits >> k & 1], 1)


def _classical_mu(s, X):
    # minimal: some copy of x with no attacker copy whose point is in X
    return frozenset(x for x in X for c in s.copies_of(x)
                     if not any(a.origin.point in X for a in s.attackers(c)))


def test_level1_mu_is_classical_and_preserves_pr():
    count = 0
    structures = list(_level1_structures(("a", "b"), 2)) + list(_level1_structures(("a", "b", "c"), 1))
    for s in structures:
        fam = subsets(s.carrier)
        table = mu_table(s, fam)
        for X in fam:
            assert table[X] == _classical_mu(s, X)
            for Y in fam:
                if X <= Y:
                    assert table[Y] & X <= table[X]
        count += 1
    assert count == 65536 + 2 * 512 + 16 + 512


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_level1_pr_on_three_points(seed):
    rng = random.Random(seed)
    s = random_structure(rng, "abc", max_copies=2, max_level=1, density=rng.random())
    fam = subsets(s.carrier)
    table = mu_table(s, fam)
    for X in fam:
        assert table[X] == _classical_mu(s, X)
        for Y in fam:
            if X <= Y:
                assert table[Y] & X <= table[X]
