"""Labeled information-bearing diagrams and ways of reading them.

Unlike ``Structure``, arrows here may start at arrows as well as at nodes,
and there are no copies.  Labels are a partial map (atom, node-or-arrow)
to a number, usually 0 or 1.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .errors import (CyclicTargets, DanglingReference, IbrsError, MissingDistance, MissingLabel,
                     NonConvergence)


@dataclass(frozen=True)
class Ref:
    kind: str   # "node" or "arrow"
    name: str

    def __str__(self) -> str:
        return self.name if self.kind == "node" else f"[{self.name}]"

    def to_dict(self) -> dict:
        return {self.kind: self.name}


def _ref(desc: Any, what: str) -> Ref:
    if isinstance(desc, Ref):
        return desc
    if isinstance(desc, Mapping) and len(desc) == 1:
        (k, v), = desc.items()
        if k in ("node", "arrow") and isinstance(v, str):
            return Ref(k, v)
    raise IbrsError(f"malformed reference for {what}: {desc!r}")


@dataclass(frozen=True)
class IbrArrow:
    id: str
    origin: Ref
    target: Ref


@dataclass
class LabeledIBRS:
    nodes: tuple
    arrows: tuple
    atoms: tuple
    labels: dict = field(default_factory=dict)   # (atom, Ref) -> value

    def __post_init__(self):
        self.nodes = tuple(sorted(set(self.nodes)))
        self.atoms = tuple(self.atoms)
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise IbrsError("duplicate arrow id")
        self.arrows = tuple(sorted(self.arrows, key=lambda a: a.id))
        self._arrow = {a.id: a for a in self.arrows}
        for a in self.arrows:
            for r in (a.origin, a.target):
                self._check_ref(r, a.id)
        for (atom, r) in self.labels:
            if atom not in self.atoms:
                raise IbrsError(f"label for unknown atom {atom!r}")
            self._check_ref(r, "label")
        self._check_acyclic()

    def _check_ref(self, r: Ref, where: str) -> None:
        if r.kind == "node" and r.name not in self.nodes:
            raise DanglingReference(f"{where}: unknown node {r.name!r}")
        if r.kind == "arrow" and r.name not in self._arrow:
            raise DanglingReference(f"{where}: unknown arrow {r.name!r}")

    def _check_acyclic(self) -> None:
        # an arrow may not (indirectly) target itself
        for a in self.arrows:
            seen = {a.id}
            t = a.target
            while t.kind == "arrow":
                if t.name in seen:
                    raise CyclicTargets(f"arrow {a.id} reaches itself through targets")
                seen.add(t.name)
                t = self._arrow[t.name].target

    # relation R restricted to node-to-node arrows
    @property
    def relation(self) -> frozenset:
        return frozenset((a.origin.name, a.target.name) for a in self.arrows
                         if a.origin.kind == "node" and a.target.kind == "node")

    def label(self, atom: str, at: str | Ref) -> float:
        r = at if isinstance(at, Ref) else Ref("node", at)
        try:
            return self.labels[(atom, r)]
        except KeyError:
            raise MissingLabel(f"no value of {atom!r} at {r}") from None

    def holds(self, atom: str, node: str) -> bool:
        return self.label(atom, node) == 1

    def successors(self, node: str) -> list[str]:
        return sorted(t for s, t in self.relation if s == node)

    def minimal_points(self, among: Iterable[str] | None = None) -> frozenset:
        pts = set(self.nodes if among is None else among)
        hit = {t for s, t in self.relation if s in pts and t in pts}
        return frozenset(pts - hit)

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "arrows": [{"id": a.id, "origin": a.origin.to_dict(), "target": a.target.to_dict()}
                       for a in self.arrows],
            "atoms": list(self.atoms),
            "labels": [{"atom": atom, "at": r.to_dict(), "value": v}
                       for (atom, r), v in sorted(self.labels.items(), key=lambda kv: (kv[0][0], kv[0][1].kind, kv[0][1].name))],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def ibrs_from_dict(data: Mapping[str, Any]) -> LabeledIBRS:
    try:
        nodes = list(data["nodes"])
        arrows = [IbrArrow(str(a["id"]), _ref(a["origin"], f"origin of {a['id']}"),
                           _ref(a["target"], f"target of {a['id']}")) for a in data.get("arrows", [])]
        atoms = list(data.get("atoms", []))
        labels = {}
        for lab in data.get("labels", []):
            labels[(lab["atom"], _ref(lab["at"], "label"))] = lab["value"]
    except (KeyError, TypeError) as exc:
        raise IbrsError(f"labeled diagram JSON missing field: {exc}") from None
    return LabeledIBRS(tuple(nodes), tuple(arrows), tuple(atoms), labels)


def ibrs_from_json(text: str) -> LabeledIBRS:
    try:
        return ibrs_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise IbrsError(f"invalid JSON: {exc}") from None


# ---------------------------------------------------------------- modal


def modal_box_eval(ibrs: LabeledIBRS, world: str, atom: str) -> bool:
    """Box atom at world: the atom holds at the world and at every successor."""
    return all(ibrs.holds(atom, x) for x in [world] + ibrs.successors(world))


def modal_box_valid(ibrs: LabeledIBRS, atom: str, points: Iterable[str] | None = None) -> bool:
    """Box atom at every minimal point (or at the given distinguished points)."""
    pts = ibrs.minimal_points() if points is None else points
    return all(modal_box_eval(ibrs, w, atom) for w in pts)


# ---------------------------------------------------------------- nonmonotonic


def nm_consequence(ibrs: LabeledIBRS, premise: str, conclusion: str,
                   minimal: Iterable[str] | None = None) -> bool:
    """premise |~ conclusion: the conclusion holds at all minimal premise-points."""
    sp = [s for s in ibrs.nodes if ibrs.holds(premise, s)]
    mins = ibrs.minimal_points(sp) if minimal is None else frozenset(minimal) & set(sp)
    return all(ibrs.holds(conclusion, s) for s in mins)


# ---------------------------------------------------------------- argumentation

IN, OUT, UNDEC = "in", "out", "undec"


def argument_labelling(ibrs: LabeledIBRS) -> dict[Ref, str]:
    """Least-fixpoint labelling of nodes and arrows.

    An element is in once every attack on it is out or comes from an out
    source; it is out once some attack on it is in and comes from an in
    source.  Labels only ever move away from undec.
    """
    elems = [Ref("node", n) for n in ibrs.nodes] + [Ref("arrow", a.id) for a in ibrs.arrows]
    attacks: dict[Ref, list[IbrArrow]] = {e: [] for e in elems}
    for a in ibrs.arrows:
        attacks[a.target].append(a)
    lab = {e: UNDEC for e in elems}
    for _ in range(len(elems) + 1):
        changed = False
        for e in elems:
            if lab[e] != UNDEC:
                continue
            incoming = attacks[e]
            if any(lab[Ref("arrow", a.id)] == IN and lab[a.origin] == IN for a in incoming):
                lab[e] = OUT
                changed = True
            elif all(lab[Ref("arrow", a.id)] == OUT or lab[a.origin] == OUT for a in incoming):
                lab[e] = IN
                changed = True
        if not changed:
            return lab
    raise NonConvergence(f"no fixpoint within {len(elems) + 1} rounds")


def winning_arguments(ibrs: LabeledIBRS) -> frozenset:
    lab = argument_labelling(ibrs)
    return frozenset(r.name for r, v in lab.items() if r.kind == "node" and v == IN)


# ---------------------------------------------------------------- intuitionistic


def rho0(ibrs: LabeledIBRS) -> frozenset:
    """Identity plus the arrows t->s along which no atom decreases."""
    out = {(y, y) for y in ibrs.nodes}
    for t, s in ibrs.relation:
        if all(ibrs.label(q, t) <= ibrs.label(q, s) for q in ibrs.atoms):
            out.add((t, s))
    return frozenset(out)


def transitive_closure(rel: Iterable[tuple[str, str]]) -> frozenset:
    closure = set(rel)
    while True:
        new = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
        if not new:
            return frozenset(closure)
        closure |= new


def intuitionistic_implies_at(ibrs: LabeledIBRS, rho: frozenset, world: str,
                              premise: str, conclusion: str) -> bool:
    return all(ibrs.holds(conclusion, s) for t, s in rho if t == world and ibrs.holds(premise, s))


def intuitionistic_eval(ibrs: LabeledIBRS, premise: str, conclusion: str,
                        minimal: Iterable[str] | None = None) -> bool:
    """premise => conclusion at every rho-minimal point of the Kripke frame."""
    rho = transitive_closure(rho0(ibrs))
    if minimal is None:
        minimal = [s for s in ibrs.nodes if not any(t != s and u == s for t, u in rho)]
    return all(intuitionistic_implies_at(ibrs, rho, w, premise, conclusion) for w in minimal)


# ---------------------------------------------------------------- counterfactual


def counterfactual_eval(ibrs: LabeledIBRS, distances: Mapping[tuple[str, str], float], world: str,
                        premise: str, conclusion: str, radius: float) -> bool:
    """Every premise-world within ``radius`` of ``world`` satisfies the conclusion."""
    for y in ibrs.nodes:
        if math.isinf(radius) and radius > 0:
            near = True
        elif y == world and (world, world) not in distances:
            near = True
        else:
            if (world, y) not in distances:
                raise MissingDistance(f"no distance from {world} to {y}")
            near = distances[(world, y)] <= radius
        if near and ibrs.holds(premise, y) and not ibrs.holds(conclusion, y):
            return False
    return True
