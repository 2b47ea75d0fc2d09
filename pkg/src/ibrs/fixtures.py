"""Named example structures, tables, netlists and the labeled diagram used
throughout the tests and exposed by ``ibrs fixtures``."""
from __future__ import annotations

from .structure import PointCopy, Structure, structure_from_edges
from .table import MuTable, identity_table, powerset


def need_smooth() -> Structure:
    # a beats c only through an arrow that a itself destroys
    return structure_from_edges([
        ("alpha1", "a", "b"),
        ("alpha2", "b", "c"),
        ("alpha", "a", "c"),
        ("beta", "a", "alpha"),
    ])


def level3_solution() -> Structure:
    return structure_from_edges([
        ("alpha1", "x", "y"),
        ("alpha2", "x", "y'"),
        ("alpha3", "y", "x"),
        ("beta1", "y", "alpha2"),
        ("beta2", "y'", "alpha1"),
        ("beta3", "y", "alpha3"),
        ("beta4", "x", "alpha3"),
        ("gamma1", "y'", "beta3"),
        ("gamma2", "y'", "beta4"),
    ])


def totally_smooth_pair() -> tuple[Structure, Structure]:
    """(not totally smooth, totally smooth) versions of the same diagram."""
    base = [("alpha", "a", "b"), ("alpha1", "b", "c"), ("alpha2", "a", "c"), ("beta", "b", "alpha1")]
    return structure_from_edges(base), structure_from_edges(base + [("beta1", "a", "alpha1")])


def total_vs_essential() -> Structure:
    return structure_from_edges(
        [("ab", "a", "b"), ("bc", "b", "c#0")],
        copies=[PointCopy("a", 0), PointCopy("b", 0), PointCopy("c", 0), PointCopy("c", 1)],
    )


def need_pr_table() -> MuTable:
    U = ("a", "b", "c")
    fam = powerset(U)
    vals = {X: X for X in fam}
    vals[frozenset("ab")] = frozenset("b")
    return MuTable(U, fam, vals)


def mu_cum_cd_table() -> MuTable:
    X, Y = frozenset("abc"), frozenset("abd")
    return MuTable(("a", "b", "c", "d"), [X, Y], {X: frozenset("a"), Y: frozenset("ab")})


def level_bigger2_table() -> MuTable:
    U = ("x", "y", "y'")
    fam = powerset(U)
    vals = {X: X for X in fam}
    vals[frozenset(U)] = frozenset({"y", "y'"})
    vals[frozenset({"x", "y"})] = frozenset({"x"})
    vals[frozenset({"x", "y'"})] = frozenset({"x"})
    return MuTable(U, fam, vals)


def identity(universe=("a", "b")) -> MuTable:
    return identity_table(universe)


def _gate(kind: str, ins: list[str], out: str, delay: int = 1) -> dict:
    return {"kind": kind, "in": ins, "out": out, "delay": delay}


def flip_flop_netlist(and_delay: int = 1) -> dict:
    """The two-input flip-flop variant; ``and_delay=2`` gives the second circuit."""
    points = ["In1", "In2", "A1", "A2", "A3", "A4", "Out1", "Out2"]
    return {
        "points": points,
        "gates": [
            _gate("AND", ["In1", "Out1"], "A1", and_delay),
            _gate("AND", ["In2", "Out2"], "A2", and_delay),
            _gate("OR", ["A1", "Out2"], "A3"),
            _gate("OR", ["A2", "Out1"], "A4"),
            _gate("NOT", ["A3"], "Out1"),
            _gate("NOT", ["A4"], "Out2"),
        ],
        "inputs": ["In1", "In2"],
        "initial": {p: p == "In1" for p in points},
    }


def sample_diagram() -> dict:
    """Labeled diagram with five nodes, four plain arrows and two arrows on arrows."""
    node_labels = {"a": (0, 0), "b": (0, 1), "c": (0, 1), "d": (1, 0), "e": (1, 1)}
    arrows = [
        {"id": "ab", "origin": {"node": "a"}, "target": {"node": "b"}},
        {"id": "ac", "origin": {"node": "a"}, "target": {"node": "c"}},
        {"id": "dc", "origin": {"node": "d"}, "target": {"node": "c"}},
        {"id": "de", "origin": {"node": "d"}, "target": {"node": "e"}},
        {"id": "ab_dc", "origin": {"arrow": "ab"}, "target": {"arrow": "dc"}},
        {"id": "d_ac", "origin": {"node": "d"}, "target": {"arrow": "ac"}},
    ]
    labels = []
    for node, (p, q) in node_labels.items():
        labels.append({"atom": "p", "at": {"node": node}, "value": p})
        labels.append({"atom": "q", "at": {"node": node}, "value": q})
    for a in arrows:
        for atom in ("p", "q"):
            labels.append({"atom": atom, "at": {"arrow": a["id"]}, "value": 1})
    return {"nodes": sorted(node_labels), "arrows": arrows, "atoms": ["p", "q"], "labels": labels}


STRUCTURES = {
    "need-smooth": need_smooth,
    "level3-solution": level3_solution,
    "totally-smooth-no": lambda: totally_smooth_pair()[0],
    "totally-smooth-yes": lambda: totally_smooth_pair()[1],
    "total-vs-essential": total_vs_essential,
}

TABLES = {
    "need-pr": need_pr_table,
    "mu-cum-cd": mu_cum_cd_table,
    "level-bigger-2": level_bigger2_table,
}

NETLISTS = {
    "circuit1": lambda: flip_flop_netlist(1),
    "circuit2": lambda: flip_flop_netlist(2),
}
