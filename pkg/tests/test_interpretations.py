import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from ibrs import fixtures
from ibrs.errors import CyclicTargets, DanglingReference, IbrsError, MissingDistance, MissingLabel
from ibrs.interpretations import (IN, OUT, IbrArrow, LabeledIBRS, Ref, argument_labelling,
                                  counterfactual_eval, ibrs_from_dict, ibrs_from_json, intuitionistic_eval,
                                  modal_box_eval, modal_box_valid, nm_consequence, rho0, transitive_closure,
                                  winning_arguments)

from reference import grounded_extension

seeds = st.integers(min_value=0, max_value=2**32 - 1)
NODES = ("a", "b", "c", "d", "e")


def diagram():
    return ibrs_from_dict(fixtures.sample_diagram())


def _random_labeled(rng, n=None, higher=False):
    nodes = NODES[:n or rng.randint(1, 5)]
    arrows, refs = [], [Ref("node", x) for x in nodes]
    for s in nodes:
        for t in nodes:
            if s != t and rng.random() < 0.3:
                arrows.append(IbrArrow(f"{s}{t}", Ref("node", s), Ref("node", t)))
    if higher:
        for k in range(rng.randint(0, 3)):
            if not arrows:
                break
            origin = rng.choice(refs + [Ref("arrow", a.id) for a in arrows])
            target = Ref("arrow", rng.choice(arrows).id)
            arrows.append(IbrArrow(f"h{k}", origin, target))
    labels = {(q, Ref("node", x)): rng.randint(0, 1) for q in ("p", "q") for x in nodes}
    return LabeledIBRS(nodes, tuple(arrows), ("p", "q"), labels)


# ---------------------------------------------------------------- modal and preferential readings


def test_modal_box_on_the_diagram():
    d = diagram()
    assert not modal_box_eval(d, "a", "q")
    assert not modal_box_eval(d, "d", "p")
    assert modal_box_eval(d, "e", "q")
    assert not modal_box_valid(d, "q")


def test_isolated_node_box():
    d = LabeledIBRS(("x",), (), ("q",), {("q", Ref("node", "x")): 1})
    assert modal_box_eval(d, "x", "q")
    assert modal_box_valid(d, "q")


def test_preferential_consequence_on_the_diagram():
    d = diagram()
    assert not nm_consequence(d, "p", "q")   # d is the minimal p-point and has !q
    assert not nm_consequence(d, "q", "p")   # b, c and e are all minimal among q-points
    empty = LabeledIBRS(("x",), (), ("p", "q"), {("p", Ref("node", "x")): 0, ("q", Ref("node", "x")): 0})
    assert nm_consequence(empty, "p", "q")


# ---------------------------------------------------------------- argumentation


def test_winning_arguments_on_the_diagram():
    d = diagram()
    assert winning_arguments(d) == {"a", "c", "d"}
    lab = argument_labelling(d)
    assert lab[Ref("arrow", "dc")] == OUT and lab[Ref("arrow", "ac")] == OUT
    assert lab[Ref("arrow", "ab")] == IN


def test_winning_arguments_small_cases():
    free = LabeledIBRS(("a", "b"), (), ())
    assert winning_arguments(free) == {"a", "b"}
    one = LabeledIBRS(("a", "b"), (IbrArrow("ab", Ref("node", "a"), Ref("node", "b")),), ())
    assert winning_arguments(one) == {"a"}
    loop = LabeledIBRS(("a", "b"), (IbrArrow("ab", Ref("node", "a"), Ref("node", "b")),
                                    IbrArrow("ba", Ref("node", "b"), Ref("node", "a"))), ())
    assert winning_arguments(loop) == set()


def _frameworks(n):
    nodes = NODES[:n]
    pairs = [(s, t) for s in nodes for t in nodes]
    for bits in range(1 << len(pairs)):
        yield nodes, {p for k, p in enumerate(pairs) if bits >> k & 1}


def test_plain_diagrams_match_grounded_semantics_exhaustively():
    count = 0
    for n in (1, 2, 3):
        for nodes, att in _frameworks(n):
            d = LabeledIBRS(nodes, tuple(IbrArrow(f"{s}{t}", Ref("node", s), Ref("node", t)) for s, t in att), ())
            assert winning_arguments(d) == grounded_extension(nodes, att)
            count += 1
    assert count == 2 + 16 + 512


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_plain_diagrams_match_grounded_semantics(seed):
    rng = random.Random(seed)
    nodes = NODES[:rng.randint(4, 5)]
    p = rng.choice([0.1, 0.25, 0.4])
    att = {(s, t) for s in nodes for t in nodes if rng.random() < p}
    d = LabeledIBRS(nodes, tuple(IbrArrow(f"{s}{t}", Ref("node", s), Ref("node", t)) for s, t in att), ())
    assert winning_arguments(d) == grounded_extension(nodes, att)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_labelling_is_a_fixpoint(seed):
    d = _random_labeled(random.Random(seed), higher=True)
    lab = argument_labelling(d)
    for a in d.arrows:
        if lab[Ref("arrow", a.id)] == IN and lab[a.origin] == IN:
            assert lab[a.target] == OUT
    for e, v in lab.items():
        if v == IN:
            assert all(lab[Ref("arrow", a.id)] == OUT or lab[a.origin] == OUT
                       for a in d.arrows if a.target == e)


# ---------------------------------------------------------------- intuitionistic


def test_rho0_on_the_diagram():
    d = diagram()
    ident = {(x, x) for x in d.nodes}
    assert rho0(d) == ident | {("a", "b"), ("a", "c"), ("d", "e")}
    assert not intuitionistic_eval(d, "p", "q")   # fails at d
    assert intuitionistic_eval(d, "p", "q", minimal=["a"])


def test_equal_labels_keep_every_arrow():
    d = diagram()
    flat = LabeledIBRS(d.nodes, d.arrows, d.atoms, {k: 1 for k in d.labels})
    assert rho0(flat) == d.relation | {(x, x) for x in d.nodes}


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_intuitionistic_persistence(seed):
    d = _random_labeled(random.Random(seed))
    rho = transitive_closure(rho0(d))
    for t, s in rho:
        for q in d.atoms:
            if d.holds(q, t):
                assert d.holds(q, s)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_box_is_antitone_in_the_arrows(seed):
    rng = random.Random(seed)
    d = _random_labeled(rng)
    if not d.arrows:
        return
    drop = rng.choice(d.arrows)
    smaller = LabeledIBRS(d.nodes, tuple(a for a in d.arrows if a != drop), d.atoms, d.labels)
    for w in d.nodes:
        for q in d.atoms:
            if modal_box_eval(d, w, q):
                assert modal_box_eval(smaller, w, q)


# ---------------------------------------------------------------- counterfactual


def _distances(d, world, far):
    return {(world, y): (0 if y == world else far.get(y, 1)) for y in d.nodes}


def test_counterfactual_radius():
    d = diagram()
    dist = _distances(d, "a", {"b": 1, "c": 1, "d": 2, "e": 3})
    assert counterfactual_eval(d, dist, "a", "p", "q", 0)
    assert counterfactual_eval(d, dist, "a", "p", "q", 1)
    assert not counterfactual_eval(d, dist, "a", "p", "q", 2)   # d is p and !q
    # infinite radius is the material reading over all nodes
    material = all(not d.holds("p", y) or d.holds("q", y) for y in d.nodes)
    assert counterfactual_eval(d, {}, "a", "p", "q", float("inf")) == material
    assert counterfactual_eval(d, {}, "e", "q", "q", float("inf"))


def test_counterfactual_errors():
    d = diagram()
    with pytest.raises(MissingDistance):
        counterfactual_eval(d, {("a", "b"): 1}, "a", "p", "q", 1)


# ---------------------------------------------------------------- input handling


def test_diagram_json_round_trip():
    d = diagram()
    assert ibrs_from_json(d.to_json()).to_dict() == d.to_dict()
    assert json.loads(d.to_json())["nodes"] == list(NODES)


def test_diagram_errors():
    with pytest.raises(MissingLabel):
        LabeledIBRS(("a",), (), ("p",)).label("p", "a")
    with pytest.raises(DanglingReference):
        LabeledIBRS(("a",), (IbrArrow("x", Ref("node", "a"), Ref("node", "z")),), ())
    with pytest.raises(DanglingReference):
        LabeledIBRS(("a",), (IbrArrow("x", Ref("node", "a"), Ref("arrow", "nope")),), ())
    with pytest.raises(CyclicTargets):
        LabeledIBRS(("a",), (IbrArrow("x", Ref("node", "a"), Ref("arrow", "y")),
                             IbrArrow("y", Ref("node", "a"), Ref("arrow", "x"))), ())
    with pytest.raises(IbrsError):
        ibrs_from_json("{")
    with pytest.raises(IbrsError):
        ibrs_from_dict({"nodes": ["a"], "arrows": [{"id": "x", "origin": {"point": "a"}, "target": {"node": "a"}}]})
