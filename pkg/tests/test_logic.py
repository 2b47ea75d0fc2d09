import random

import pytest
from hypothesis import given, settings, strategies as st

from ibrs import fixtures
from ibrs.errors import AtomOutsideLanguage, CarrierMismatch, FormulaSyntaxError, OracleInconsistent, UnknownRule
from ibrs.logic import (ALG_LOG_ROWS, RULES, SYSTEM_P, Consequence, Language, check_alg_log, check_rule,
                        classical, consequence, embed_table, from_structure, from_table, models,
                        mu_from_logic, parse_formula, rule_id, theory_of)
from ibrs.properties import check_property
from ibrs.representation import build_level2_attacking, build_level3_essentially_smooth
from ibrs.structure import random_structure, structure_from_edges
from ibrs.table import MuTable
from ibrs.validity import mu

from invariants import random_formula, random_totally_smooth

seeds = st.integers(min_value=0, max_value=2**32 - 1)
PQ = Language(["p", "q"])
PQR = Language(["p", "q", "r"])


def _truth(f, env):
    # direct recursive evaluation, independent of the mask arithmetic
    if f.op == "atom":
        return env[f.name]
    if f.op == "const":
        return f.name
    v = [_truth(a, env) for a in f.args]
    return {"not": lambda: not v[0], "and": lambda: v[0] and v[1], "or": lambda: v[0] or v[1],
            "imp": lambda: (not v[0]) or v[1], "iff": lambda: v[0] == v[1]}[f.op]()


def _envs(lang):
    for k, name in enumerate(lang.valuations):
        yield name, {a: lang.value(k, a) for a in lang.atoms}


def _sat(lang, f):
    return frozenset(name for name, env in _envs(lang) if _truth(f, env))


# ---------------------------------------------------------------- syntax


def test_precedence_and_associativity():
    assert str(parse_formula("p & q -> r")) == "((p & q) -> r)"
    assert str(parse_formula("!(p | q)")) == "!(p | q)"
    assert str(parse_formula("p -> q -> r")) == "(p -> (q -> r))"
    assert str(parse_formula("p | q & r")) == "(p | (q & r))"
    assert str(parse_formula("p <-> q <-> r")) == "((p <-> q) <-> r)"
    assert str(parse_formula("!!p")) == "!!p"


@pytest.mark.parametrize("text,pos", [("p &", 3), ("(p | q", 6), ("p q", 2), ("", 0), ("p $ q", 2)])
def test_syntax_errors_carry_a_position(text, pos):
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula(text)
    assert e.value.position == pos


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_printing_reparses_to_the_same_formula(seed):
    f = random_formula(random.Random(seed))
    assert parse_formula(str(f)) == f


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_model_sets_match_truth_tables(seed):
    f = random_formula(random.Random(seed))
    lang = PQR if "r" in f.atoms() else PQ
    assert models(lang, [f]) == _sat(lang, f)
    m = lang.mask_of(f)
    assert lang.mask_of(lang.dnf(m)) == m
    assert lang.mask_of(lang.cnf(m)) == m


def test_models_and_theory_of():
    assert models(PQ, ["p"]) == {"v10", "v11"}
    assert models(PQ, ["p", "!q"]) == {"v10"}
    assert models(PQ, []) == set(PQ.valuations)
    assert models(PQ, ["p", "!p"]) == set()
    for X in ([], ["v00"], ["v01", "v10"], list(PQ.valuations)):
        assert models(PQ, theory_of(PQ, X)) == set(X)


def test_language_errors():
    with pytest.raises(AtomOutsideLanguage):
        models(PQ, ["r"])
    with pytest.raises(AtomOutsideLanguage):
        Language(["p", "p"])
    with pytest.raises(CarrierMismatch):
        PQ.mask(["v2"])
    with pytest.raises(CarrierMismatch):
        from_structure(structure_from_edges([("ab", "a", "b")]), PQ)


# ---------------------------------------------------------------- consequence


def test_classical_oracle_is_plain_entailment():
    c = classical(PQ)
    assert c.entails(["p & q"], "p")
    assert not c.entails(["p | q"], "p")
    assert c.entails(["p", "!p"], "F")
    assert all(check_rule(c, r) for r in RULES)


def test_single_atom_preference():
    # the !p world beats the p world, so the empty theory concludes !p
    P = Language(["p"])
    s = structure_from_edges([("pref", "v0", "v1")], carrier=P.valuations)
    assert consequence(s, P, []) == (parse_formula("!p"),)
    c = from_structure(s, P)
    assert c.entails([], "!p")
    assert not c.entails([], "p")
    assert c.entails(["p"], "p")


def test_arrowless_structure_gives_classical_logic():
    s = random_structure(random.Random(3), PQ.valuations, max_copies=1, max_level=1, density=0.0)
    assert from_structure(s, PQ).f == classical(PQ).f


def test_need_pr_embedding_breaks_pr():
    t = embed_table(fixtures.need_pr_table(), PQ, {"a": "v00", "b": "v01", "c": "v10"})
    v = check_rule(from_table(t, PQ), "PR")
    assert not v.holds and v.witness is not None
    assert check_rule(from_table(t, PQ), "SC")
    assert check_rule(from_table(t, PQ), "CUM")


def test_level1_smooth_structures_satisfy_system_p():
    rng = random.Random(11)
    checked = 0
    while checked < 40:
        s = random_totally_smooth(rng, PQ.valuations)
        if s.max_level > 1:
            continue
        checked += 1
        c = from_structure(s, PQ)
        for r in SYSTEM_P:
            assert check_rule(c, r), r


def test_rule_names():
    assert rule_id("(CUM)") == "CUM"
    assert rule_id("⊆⊇") == "subset_supset"
    assert rule_id("ratm=") == "RatM_eq"
    with pytest.raises(UnknownRule):
        rule_id("(XYZ)")


# ---------------------------------------------------------------- tabulating an oracle


def _random_f(rng, lang, subset=True):
    full = lang.full
    return [(X if subset else full) & rng.getrandbits(lang.size) for X in range(1 << lang.size)]


def test_mu_from_logic_round_trip():
    rng = random.Random(5)
    for _ in range(30):
        c = Consequence(PQ, _random_f(rng, PQ, subset=rng.random() < 0.7))
        t = mu_from_logic(c.entails, PQ)
        assert t == c.table()
        assert from_table(t, PQ).f == c.f


def test_inconsistent_oracles_are_rejected():
    # depends on the spelling of the theory, so (LLE) fails
    def by_length(theory, phi):
        return len(str(theory[0])) % 2 == 0 and classical(PQ).entails(["F"], phi)
    with pytest.raises(OracleInconsistent):
        mu_from_logic(by_length, PQ)
    # entails p and q but not p & q: not closed
    def not_closed(theory, phi):
        return PQ.mask_of(phi) in (PQ.mask_of("p"), PQ.mask_of("q"), PQ.full)
    with pytest.raises(OracleInconsistent):
        mu_from_logic(not_closed, PQ)


def test_sc_matches_mu_subset():
    rng = random.Random(9)
    for _ in range(200):
        c = Consequence(PQ, _random_f(rng, PQ, subset=rng.random() < 0.5))
        assert check_rule(c, "SC").holds == check_property(c.table(), "mu_subset").holds


@pytest.mark.parametrize("row", [r.row for r in ALG_LOG_ROWS])
def test_rule_and_property_rows_agree_on_random_oracles(row):
    rng = random.Random(int(float(row) * 10))
    for _ in range(25):
        c = Consequence(PQ, _random_f(rng, PQ, subset=rng.random() < 0.8))
        assert check_alg_log(c, row)["consistent"], row


# ---------------------------------------------------------------- representing oracles


def test_any_subset_oracle_has_a_level2_attacking_structure():
    rng = random.Random(21)
    for _ in range(60):
        c = Consequence(PQ, _random_f(rng, PQ))
        assert check_rule(c, "SC")
        t = mu_from_logic(c.entails, PQ)
        s, eta = build_level2_attacking(t)
        assert s.max_level <= 2
        assert from_structure(s, PQ).f == c.f


def _reachable(t: MuTable) -> bool:
    minimal = set().union(*t.values.values())
    return not any(X and not t.values[X] and X & minimal for X in t.family)


def test_cautious_oracles_have_essentially_smooth_level3_structures():
    rng = random.Random(2)
    built = 0
    for _ in range(80):
        c = from_structure(random_totally_smooth(rng, PQ.valuations), PQ)
        assert check_rule(c, "subset_supset")
        t = c.table()
        if not _reachable(t):
            continue
        s = build_level3_essentially_smooth(t)
        assert s.max_level <= 3
        assert all(mu(s, X) == t.values[X] for X in t.family)
        assert from_structure(s, PQ).f == c.f
        built += 1
    assert built > 40
