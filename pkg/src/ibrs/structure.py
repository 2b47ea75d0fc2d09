"""Points with copies, arrows whose targets may be other arrows, and the
bookkeeping around them (levels, origin/destination closures, restriction
to a point set, JSON round trips).

A ``Structure`` is immutable once built.  Alongside the public records it
keeps integer-indexed arrays so that validity evaluation can run on bit
masks instead of frozensets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple, Union

from .errors import (
    CyclicTargets,
    DanglingReference,
    IbrsError,
    LevelBoundExceeded,
    NotASubset,
    OriginNotPoint,
    UnknownArrow,
)

DEFAULT_LEVEL_BOUND = 3


class PointCopy(NamedTuple):
    point: str
    copy: int = 0

    def __str__(self) -> str:
        return f"{self.point}#{self.copy}"


Target = Union[PointCopy, str]


@dataclass(frozen=True, order=True)
class Arrow:
    id: str
    origin: PointCopy
    target: Target
    base: str = ""
    copy: int = 0

    def __post_init__(self):
        if not self.base:
            object.__setattr__(self, "base", self.id)

    @property
    def targets_point(self) -> bool:
        return isinstance(self.target, PointCopy)


@dataclass(frozen=True)
class ClosureSets:
    origins: frozenset
    destinations: frozenset


def _as_copy(value: Any, what: str) -> PointCopy:
    if isinstance(value, PointCopy):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        name, idx = value
        if isinstance(name, str) and isinstance(idx, int) and idx >= 0:
            return PointCopy(name, idx)
    raise IbrsError(f"malformed point copy for {what}: {value!r}")


def _as_arrow(desc: Any) -> Arrow:
    if isinstance(desc, Arrow):
        return desc
    if not isinstance(desc, Mapping) or "id" not in desc:
        raise IbrsError(f"malformed arrow description: {desc!r}")
    aid = str(desc["id"])
    origin = desc.get("origin")
    if isinstance(origin, Mapping):
        if "arrow" in origin:
            raise OriginNotPoint(f"arrow {aid}: origin is an arrow")
        origin = origin.get("point")
    if isinstance(origin, str):
        raise OriginNotPoint(f"arrow {aid}: origin {origin!r} is not a point copy")
    origin = _as_copy(origin, f"origin of {aid}")
    tgt = desc.get("target")
    if isinstance(tgt, Mapping):
        if "arrow" in tgt:
            target: Target = str(tgt["arrow"])
        elif "point" in tgt:
            target = _as_copy(tgt["point"], f"target of {aid}")
        else:
            raise IbrsError(f"arrow {aid}: malformed target {tgt!r}")
    elif isinstance(tgt, str):
        target = tgt
    else:
        target = _as_copy(tgt, f"target of {aid}")
    return Arrow(aid, origin, target, str(desc.get("base") or aid), int(desc.get("copy", 0)))


class Structure:
    """A finite generalized preferential structure."""

    __slots__ = (
        "carrier", "copies", "arrows", "level_bound", "copy_labels",
        "_pt", "_copy_ix", "_arrow_ix",
        "a_origin", "a_tgt_arrow", "a_tgt_copy", "a_level", "a_omask", "a_dmask",
        "att_of_arrow", "att_of_copy", "copy_point", "order_desc",
    )

    def __init__(self, carrier: Iterable[str], copies: Iterable[PointCopy],
                 arrows: Iterable[Arrow], level_bound: int = DEFAULT_LEVEL_BOUND,
                 copy_labels: Mapping[PointCopy, str] | None = None):
        self.carrier = tuple(sorted(set(carrier)))
        self.copies = tuple(sorted(set(copies)))
        arrow_list = sorted(arrows, key=lambda a: a.id)
        self.arrows = tuple(arrow_list)
        self.level_bound = int(level_bound)
        self.copy_labels = dict(copy_labels or {})
        self._pt = {p: i for i, p in enumerate(self.carrier)}
        self._copy_ix = {c: i for i, c in enumerate(self.copies)}
        self._arrow_ix: dict[str, int] = {}
        for i, a in enumerate(arrow_list):
            if a.id in self._arrow_ix:
                raise IbrsError(f"duplicate arrow id {a.id!r}")
            self._arrow_ix[a.id] = i
        for c in self.copies:
            if c.point not in self._pt:
                raise DanglingReference(f"copy {c} of unknown point {c.point!r}")
        self.copy_point = [self._pt[c.point] for c in self.copies]
        n = len(arrow_list)
        self.a_origin = [0] * n
        self.a_tgt_arrow = [-1] * n
        self.a_tgt_copy = [-1] * n
        for i, a in enumerate(arrow_list):
            if not isinstance(a.origin, PointCopy):
                raise OriginNotPoint(f"arrow {a.id}: origin is not a point copy")
            if a.origin not in self._copy_ix:
                raise DanglingReference(f"arrow {a.id}: undeclared origin {a.origin}")
            self.a_origin[i] = self._pt[a.origin.point]
            if isinstance(a.target, PointCopy):
                if a.target not in self._copy_ix:
                    raise DanglingReference(f"arrow {a.id}: undeclared target {a.target}")
                self.a_tgt_copy[i] = self._copy_ix[a.target]
            else:
                if a.target not in self._arrow_ix:
                    raise DanglingReference(f"arrow {a.id}: unknown target arrow {a.target!r}")
                self.a_tgt_arrow[i] = self._arrow_ix[a.target]
        self.a_level = [0] * n
        self.a_omask = [0] * n
        self.a_dmask = [0] * n
        for i in range(n):
            self._resolve(i)
        for i, lv in enumerate(self.a_level):
            if lv > self.level_bound:
                raise LevelBoundExceeded(
                    f"arrow {arrow_list[i].id} has level {lv} > bound {self.level_bound}")
        self.att_of_arrow: list[list[int]] = [[] for _ in range(n)]
        self.att_of_copy: list[list[int]] = [[] for _ in self.copies]
        for i in range(n):
            if self.a_tgt_arrow[i] >= 0:
                self.att_of_arrow[self.a_tgt_arrow[i]].append(i)
            else:
                self.att_of_copy[self.a_tgt_copy[i]].append(i)
        self.order_desc = sorted(range(n), key=lambda i: -self.a_level[i])

    def _resolve(self, start: int) -> None:
        # iterative walk down the target chain; a revisit on the current path is a cycle
        path: list[int] = []
        on_path: set[int] = set()
        i = start
        while self.a_level[i] == 0:
            if i in on_path:
                raise CyclicTargets(f"arrow {self.arrows[i].id} lies on a target cycle")
            on_path.add(i)
            path.append(i)
            t = self.a_tgt_arrow[i]
            if t < 0:
                break
            i = t
        for j in reversed(path):
            bit = 1 << self.a_origin[j]
            t = self.a_tgt_arrow[j]
            if t < 0:
                self.a_level[j] = 1
                self.a_omask[j] = bit
                self.a_dmask[j] = 1 << self.copy_point[self.a_tgt_copy[j]]
            else:
                self.a_level[j] = self.a_level[t] + 1
                self.a_omask[j] = bit | self.a_omask[t]
                self.a_dmask[j] = self.a_dmask[t]

    # ----- lookups -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.carrier, self.copies, self.arrows, self.level_bound) == (
            other.carrier, other.copies, other.arrows, other.level_bound)

    def __hash__(self) -> int:
        return hash((self.carrier, self.copies, self.arrows, self.level_bound))

    def __repr__(self) -> str:
        return (f"Structure(points={len(self.carrier)}, copies={len(self.copies)}, "
                f"arrows={len(self.arrows)}, max_level={self.max_level})")

    @property
    def max_level(self) -> int:
        return max(self.a_level, default=0)

    def arrow(self, arrow_id: str) -> Arrow:
        return self.arrows[self.arrow_index(arrow_id)]

    def arrow_index(self, arrow_id: str) -> int:
        try:
            return self._arrow_ix[arrow_id]
        except KeyError:
            raise UnknownArrow(f"no arrow {arrow_id!r}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._arrow_ix

    def copies_of(self, point: str) -> list[PointCopy]:
        return [c for c in self.copies if c.point == point]

    def attackers(self, target: Target) -> list[Arrow]:
        if isinstance(target, PointCopy):
            ix = self.att_of_copy[self._copy_ix[target]]
        else:
            ix = self.att_of_arrow[self.arrow_index(target)]
        return [self.arrows[i] for i in ix]

    def mask(self, points: Iterable[str]) -> int:
        m = 0
        for p in points:
            if p not in self._pt:
                raise NotASubset(f"{p!r} is not a point of the structure")
            m |= 1 << self._pt[p]
        return m

    def names(self, mask: int) -> frozenset:
        return frozenset(p for i, p in enumerate(self.carrier) if mask >> i & 1)

    # ----- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        arrows = []
        for a in self.arrows:
            tgt = ({"point": [a.target.point, a.target.copy]}
                   if isinstance(a.target, PointCopy) else {"arrow": a.target})
            arrows.append({"id": a.id, "base": a.base, "copy": a.copy,
                           "origin": [a.origin.point, a.origin.copy], "target": tgt})
        out = {
            "carrier": list(self.carrier),
            "copies": [[c.point, c.copy] for c in self.copies],
            "arrows": arrows,
            "level_bound": self.level_bound,
        }
        if self.copy_labels:
            out["copy_labels"] = {str(c): self.copy_labels[c] for c in sorted(self.copy_labels)}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_structure(carrier: Iterable[str], copies: Iterable[Any], arrows: Iterable[Any],
                    level_bound: int = DEFAULT_LEVEL_BOUND,
                    copy_labels: Mapping[PointCopy, str] | None = None) -> Structure:
    """Validate descriptions and return a ``Structure``.

    ``copies`` are ``PointCopy`` values or ``[name, index]`` pairs; arrows are
    ``Arrow`` records or dicts in the JSON arrow format.
    """
    cps = [_as_copy(c, "copy") for c in copies]
    if len(set(cps)) != len(cps):
        raise IbrsError("duplicate point copies")
    return Structure(carrier, cps, [_as_arrow(d) for d in arrows], level_bound, copy_labels)


def structure_from_edges(edges: Iterable[tuple[str, str, str]], carrier: Iterable[str] = (),
                         copies: Iterable[Any] = (), level_bound: int = DEFAULT_LEVEL_BOUND) -> Structure:
    """Shorthand builder from ``(id, origin, target)`` triples.

    Origins and point targets are written ``"a"`` (copy 0) or ``"a#1"``.  A
    target naming an arrow id refers to that arrow.  Every mentioned point
    gets copy 0 unless ``copies`` is given explicitly.
    """
    edges = list(edges)
    ids = {e[0] for e in edges}

    def pc(text: str) -> PointCopy:
        name, _, idx = text.partition("#")
        return PointCopy(name, int(idx) if idx else 0)

    pts = set(carrier)
    arrows = []
    for aid, o, t in edges:
        if o in ids:
            raise OriginNotPoint(f"arrow {aid}: origin {o!r} is an arrow")
        origin = pc(o)
        pts.add(origin.point)
        if t in ids:
            target: Target = t
        else:
            target = pc(t)
            pts.add(target.point)
        arrows.append(Arrow(aid, origin, target))
    cps = [_as_copy(c, "copy") for c in copies] if copies else []
    have = {c.point for c in cps}
    cps += [PointCopy(p, 0) for p in sorted(pts) if p not in have]
    for a in arrows:
        for ref in (a.origin, a.target):
            if isinstance(ref, PointCopy) and ref not in cps:
                cps.append(ref)
    return Structure(pts, cps, arrows, level_bound)


def structure_from_dict(data: Mapping[str, Any]) -> Structure:
    try:
        carrier = data["carrier"]
        copies = data["copies"]
        arrows = data.get("arrows", [])
    except (KeyError, TypeError) as exc:
        raise IbrsError(f"structure JSON missing field: {exc}") from None
    labels = {}
    for key, val in (data.get("copy_labels") or {}).items():
        name, _, idx = key.rpartition("#")
        labels[PointCopy(name, int(idx))] = val
    return build_structure(carrier, copies, arrows, data.get("level_bound", DEFAULT_LEVEL_BOUND), labels)


def structure_from_json(text: str) -> Structure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IbrsError(f"invalid JSON: {exc}") from None
    return structure_from_dict(data)


def level(structure: Structure, arrow_id: str) -> int:
    return structure.a_level[structure.arrow_index(arrow_id)]


def closure_sets(structure: Structure, arrow_id: str) -> ClosureSets:
    i = structure.arrow_index(arrow_id)
    return ClosureSets(structure.names(structure.a_omask[i]), structure.names(structure.a_dmask[i]))


def restrict(structure: Structure, X: Iterable[str]) -> Structure:
    """The legal subdiagram generated by ``X``.

    Keeps every copy of every point of ``X``, then every arrow whose origin
    copy and target are already kept, working upward by level.
    """
    X = frozenset(X)
    structure.mask(X)
    kept_copies = [c for c in structure.copies if c.point in X]
    kept_copy_set = set(kept_copies)
    kept: set[str] = set()
    arrows = []
    for i in sorted(range(len(structure.arrows)), key=lambda i: structure.a_level[i]):
        a = structure.arrows[i]
        if a.origin not in kept_copy_set:
            continue
        if isinstance(a.target, PointCopy):
            ok = a.target in kept_copy_set
        else:
            ok = a.target in kept
        if ok:
            kept.add(a.id)
            arrows.append(a)
    labels = {c: v for c, v in structure.copy_labels.items() if c in kept_copy_set}
    return Structure(X, kept_copies, arrows, structure.level_bound, labels)


def random_structure(rng, carrier: Iterable[str], max_copies: int = 2, max_level: int = 2,
                     density: float = 0.3, max_arrows: int | None = None) -> Structure:
    """A random structure for property tests.

    Each point gets 1..``max_copies`` copies.  Level-1 arrows join random
    copies; each higher level attacks arrows of the level below from random
    copies, each candidate kept with probability ``density``.
    """
    carrier = sorted(set(carrier))
    copies = [PointCopy(p, i) for p in carrier for i in range(rng.randint(1, max_copies))]
    arrows: list[Arrow] = []
    layer: list[Target] = list(copies)
    for lvl in range(1, max_level + 1):
        new = []
        for t in layer:
            for o in copies:
                if rng.random() < density and (max_arrows is None or len(arrows) < max_arrows):
                    a = Arrow(f"L{lvl}_{len(arrows)}", o, t)
                    arrows.append(a)
                    new.append(a.id)
        if not new:
            break
        layer = new
    return Structure(carrier, copies, arrows, max(max_level, 1))
