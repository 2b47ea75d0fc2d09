"""Valid arrows and the minimal-element functions built on them.

Validity is decided top-down: an arrow's attackers sit strictly higher, so
walking arrows by descending level sees every attacker (and every
counter-attacker) before the arrow itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DomainMiss, NotNested
from .structure import Structure

X_TO_Y = "xy"
X_IMPLIES_Y = "ximply"


@dataclass(frozen=True)
class ValiditySets:
    X: frozenset
    Y: frozenset
    kind: str
    valid: frozenset


def valid_flags(s: Structure, xm: int, ym: int, kind: str = X_TO_Y) -> list[bool]:
    """Per-arrow validity for the scope given as point bit masks."""
    valid = [False] * len(s.arrows)
    omask, dmask, origin, att = s.a_omask, s.a_dmask, s.a_origin, s.att_of_arrow
    if kind == X_TO_Y:
        scope = xm
    else:
        scope = ym
    for i in s.order_desc:
        if kind == X_TO_Y:
            if omask[i] & ~xm or dmask[i] & ~ym:
                continue
        elif not (xm >> origin[i] & 1) or omask[i] & ~ym or dmask[i] & ~ym:
            continue
        ok = True
        for b in att[i]:
            if scope >> origin[b] & 1 and not any(valid[g] for g in att[b]):
                ok = False
                break
        valid[i] = ok
    return valid


def _ids(s: Structure, flags: list[bool]) -> frozenset:
    return frozenset(a.id for a, f in zip(s.arrows, flags) if f)


def valid_x_to_y(s: Structure, X: Iterable[str], Y: Iterable[str]) -> ValiditySets:
    X, Y = frozenset(X), frozenset(Y)
    flags = valid_flags(s, s.mask(X), s.mask(Y), X_TO_Y)
    return ValiditySets(X, Y, X_TO_Y, _ids(s, flags))


def valid_x_impl_y(s: Structure, X: Iterable[str], Y: Iterable[str]) -> ValiditySets:
    X, Y = frozenset(X), frozenset(Y)
    xm, ym = s.mask(X), s.mask(Y)
    if xm & ~ym:
        raise NotNested(f"{sorted(X)} is not a subset of {sorted(Y)}")
    return ValiditySets(X, Y, X_IMPLIES_Y, _ids(s, valid_flags(s, xm, ym, X_IMPLIES_Y)))


def surviving_points(s: Structure, candidates: int, flags: list[bool]) -> int:
    """Points of ``candidates`` with at least one copy not hit by a flagged arrow."""
    out = 0
    for ci, p in enumerate(s.copy_point):
        if candidates >> p & 1 and not out >> p & 1:
            if not any(flags[a] for a in s.att_of_copy[ci]):
                out |= 1 << p
    return out


def mu_mask(s: Structure, xm: int) -> int:
    # arrows mentioning points outside X fail O/D inclusion, so evaluating
    # on the whole structure agrees with evaluating inside restrict(s, X)
    if not xm:
        return 0
    return surviving_points(s, xm, valid_flags(s, xm, xm, X_TO_Y))


def mu(s: Structure, X: Iterable[str]) -> frozenset:
    """Points of X with some copy that no valid X-to-X arrow attacks."""
    return s.names(mu_mask(s, s.mask(X)))


def mu_attacking(s: Structure, eta: Mapping[frozenset, frozenset], X: Iterable[str]) -> frozenset:
    """Points of eta(X) with some copy that no valid X-to-eta(X) arrow attacks."""
    X = frozenset(X)
    if X not in eta:
        raise DomainMiss(f"{sorted(X)} is not in the domain of eta")
    xm, ym = s.mask(X), s.mask(eta[X])
    return s.names(surviving_points(s, ym, valid_flags(s, xm, ym, X_TO_Y)))


def mu_table(s: Structure, family: Iterable[Iterable[str]]) -> dict[frozenset, frozenset]:
    return {frozenset(X): mu(s, X) for X in family}
