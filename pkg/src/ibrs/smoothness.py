"""Smoothness checks: the sqsubseteq relation, total, essential and
classical smoothness.  Each check returns a verdict with a witness that
names the offending copy or arrow when the property fails."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import NotLevelOne, NotNested
from .structure import PointCopy, Structure
from .validity import X_IMPLIES_Y, X_TO_Y, mu_mask, valid_flags


@dataclass
class SmoothnessVerdict:
    holds: bool
    witness: dict | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict[str, Any]:
        return {"holds": self.holds, "witness": self.witness, **self.detail}


def _copy_json(c: PointCopy) -> list:
    return [c.point, c.copy]


def sqsubseteq_masks(s: Structure, xm: int, xpm: int) -> SmoothnessVerdict:
    if xm & ~xpm:
        raise NotNested(f"{sorted(s.names(xm))} is not a subset of {sorted(s.names(xpm))}")
    flags = valid_flags(s, xm, xpm, X_IMPLIES_Y)
    origin, att_a = s.a_origin, s.att_of_arrow
    answered: dict[int, bool] = {}
    # clause (2): copies outside X must each be hit by a valid X=>X' arrow
    for ci, p in enumerate(s.copy_point):
        if xpm >> p & 1 and not xm >> p & 1:
            if not any(flags[a] for a in s.att_of_copy[ci]):
                return SmoothnessVerdict(False, {"clause": 2, "copy": _copy_json(s.copies[ci])})
    # clause (3): each point of X keeps a copy whose X'-attacks are all countered
    good = 0
    for ci, p in enumerate(s.copy_point):
        if not xm >> p & 1 or good >> p & 1:
            continue
        ok = True
        for a in s.att_of_copy[ci]:
            if xpm >> origin[a] & 1:
                if a not in answered:
                    answered[a] = any(flags[b] for b in att_a[a])
                if not answered[a]:
                    ok = False
                    break
        if ok:
            good |= 1 << p
    missing = xm & ~good
    if missing:
        x = sorted(s.names(missing))[0]
        unanswered = sorted(
            s.arrows[a].id for c in s.copies_of(x) for a in s.att_of_copy[s._copy_ix[c]]
            if xpm >> origin[a] & 1 and not answered.get(a, False))
        return SmoothnessVerdict(False, {"clause": 3, "point": x, "unanswered": unanswered})
    return SmoothnessVerdict(True)


def is_sqsubseteq(s: Structure, X: Iterable[str], Xp: Iterable[str]) -> SmoothnessVerdict:
    return sqsubseteq_masks(s, s.mask(X), s.mask(Xp))


def totally_smooth_mask(s: Structure, xm: int) -> SmoothnessVerdict:
    m = mu_mask(s, xm)
    flags = valid_flags(s, xm, xm, X_TO_Y)
    origin = s.a_origin
    for i, a in enumerate(s.arrows):
        if (s.a_omask[i] | s.a_dmask[i]) & ~xm:
            continue
        if s.a_tgt_arrow[i] >= 0:
            rivals = s.att_of_arrow[s.a_tgt_arrow[i]]
        else:
            rivals = s.att_of_copy[s.a_tgt_copy[i]]
        rivals = [r for r in rivals if m >> origin[r] & 1]
        if flags[i]:
            rivals = [r for r in rivals if flags[r]]
        if not rivals:
            return SmoothnessVerdict(False, {"arrow": a.id, "valid": flags[i],
                                             "mu": sorted(s.names(m))})
    return SmoothnessVerdict(True, detail={"mu": sorted(s.names(m))})


def is_totally_smooth(s: Structure, X: Iterable[str]) -> SmoothnessVerdict:
    """Every arrow inside X has a rival on the same target starting in mu(X),
    and a valid arrow has a valid such rival."""
    return totally_smooth_mask(s, s.mask(X))


def remark_cases(s: Structure, xm: int) -> tuple[bool, dict[str, str]]:
    """Direct case split of mu(X) sqsubseteq X for structures of level <= 3.

    Returns whether every point is certified and, per point, which case did it:
    "1" for points of mu(X), "2(a)" or "2(b)" for the others.
    """
    m = mu_mask(s, xm)
    origin, att_a = s.a_origin, s.att_of_arrow

    def from_set(arrows: list[int], mask: int) -> list[int]:
        return [a for a in arrows if mask >> origin[a] & 1]

    cases: dict[str, str] = {}
    ok_all = True
    for x in s.names(xm):
        cps = [s._copy_ix[c] for c in s.copies_of(x)]
        if m >> s._pt[x] & 1:
            def certified(ci: int) -> bool:
                for a in from_set(s.att_of_copy[ci], xm):
                    if not any(not from_set(att_a[b], xm) for b in from_set(att_a[a], m)):
                        return False
                return True
            if any(certified(ci) for ci in cps):
                cases[x] = "1"
            else:
                cases[x], ok_all = "fail", False
        else:
            used = set()
            for ci in cps:
                found = None
                for a in from_set(s.att_of_copy[ci], m):
                    betas = from_set(att_a[a], xm)
                    if not betas:
                        found = "a"
                        break
                    if all(from_set(att_a[b], m) for b in betas):
                        found = "b"
                if found is None:
                    used = None
                    break
                used.add(found)
            if used is None:
                cases[x], ok_all = "fail", False
            else:
                cases[x] = "2(b)" if "b" in used else "2(a)"
    return ok_all, cases


def essentially_smooth_mask(s: Structure, xm: int) -> SmoothnessVerdict:
    m = mu_mask(s, xm)
    verdict = sqsubseteq_masks(s, m, xm)
    verdict.detail["mu"] = sorted(s.names(m))
    if s.max_level <= 3:
        _, cases = remark_cases(s, xm)
        verdict.detail["cases"] = dict(sorted(cases.items()))
    return verdict


def is_essentially_smooth(s: Structure, X: Iterable[str]) -> SmoothnessVerdict:
    """mu(X) sqsubseteq X."""
    return essentially_smooth_mask(s, s.mask(X))


def is_classically_smooth(s: Structure, family: Iterable[Iterable[str]]) -> SmoothnessVerdict:
    """Smoothness with copies for a level-1 structure over every X of the family."""
    if s.max_level > 1:
        raise NotLevelOne(f"structure has level {s.max_level}")
    origin_copy = [s._copy_ix[a.origin] for a in s.arrows]
    for X in family:
        X = frozenset(X)
        xm = s.mask(X)

        def attacks_from_x(ci: int) -> list[int]:
            return [a for a in s.att_of_copy[ci] if xm >> s.a_origin[a] & 1]

        for ci, p in enumerate(s.copy_point):
            if not xm >> p & 1:
                continue
            attackers = attacks_from_x(ci)
            if attackers and not any(not attacks_from_x(origin_copy[a]) for a in attackers):
                return SmoothnessVerdict(False, {"set": sorted(X), "copy": _copy_json(s.copies[ci])})
    return SmoothnessVerdict(True)
