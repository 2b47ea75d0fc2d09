"""Explicitly tabulated choice functions over a finite family of sets."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Mapping

from .errors import IbrsError


def set_key(X: Iterable[str]) -> tuple:
    X = sorted(X)
    return (len(X), X)


def powerset(universe: Iterable[str]) -> list[frozenset]:
    u = sorted(universe)
    return [frozenset(c) for r in range(len(u) + 1) for c in combinations(u, r)]


def fmt_set(X: Iterable[str]) -> str:
    return ",".join(sorted(X))


def parse_set(text: str) -> frozenset:
    return frozenset(p.strip() for p in text.split(",") if p.strip())


@dataclass(frozen=True)
class MuTable:
    universe: tuple
    family: tuple
    values: Mapping[frozenset, frozenset]
    eta: Mapping[frozenset, frozenset] | None = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        uni = tuple(sorted(set(self.universe)))
        fam = tuple(sorted({frozenset(X) for X in self.family}, key=set_key))
        vals = {frozenset(k): frozenset(v) for k, v in self.values.items()}
        object.__setattr__(self, "universe", uni)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "values", vals)
        if self.eta is not None:
            object.__setattr__(self, "eta", {frozenset(k): frozenset(v) for k, v in self.eta.items()})
        u = set(uni)
        for X in fam:
            if not X <= u:
                raise IbrsError(f"family member {fmt_set(X)} leaves the universe")
            if X not in vals:
                raise IbrsError(f"no value for {{{fmt_set(X)}}}")
            if not vals[X] <= u:
                raise IbrsError(f"value of {{{fmt_set(X)}}} leaves the universe")
            if self.eta is not None and X not in self.eta:
                raise IbrsError(f"no eta value for {{{fmt_set(X)}}}")
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(uni)})

    def __call__(self, X: Iterable[str]) -> frozenset:
        return self.values[frozenset(X)]

    def __contains__(self, X: Iterable[str]) -> bool:
        return frozenset(X) in self.values

    def mask(self, X: Iterable[str]) -> int:
        m = 0
        for p in X:
            m |= 1 << self._index[p]
        return m

    def names(self, m: int) -> frozenset:
        return frozenset(p for i, p in enumerate(self.universe) if m >> i & 1)

    def as_masks(self) -> tuple[list[int], dict[int, int]]:
        fam = [self.mask(X) for X in self.family]
        return fam, {self.mask(X): self.mask(self.values[X]) for X in self.family}

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "universe": list(self.universe),
            "family": [sorted(X) for X in self.family],
            "mu": {fmt_set(X): sorted(self.values[X]) for X in self.family},
        }
        if self.eta is not None:
            out["eta"] = {fmt_set(X): sorted(self.eta[X]) for X in self.family}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def table_from_dict(data: Mapping[str, Any]) -> MuTable:
    try:
        universe = data["universe"]
        mu = {parse_set(k): v for k, v in data["mu"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise IbrsError(f"table JSON missing field: {exc}") from None
    family = [frozenset(X) for X in data.get("family", [])] or list(mu)
    eta = data.get("eta")
    if eta is not None:
        eta = {parse_set(k): v for k, v in eta.items()}
    return MuTable(universe, family, mu, eta)


def table_from_json(text: str) -> MuTable:
    try:
        return table_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise IbrsError(f"invalid JSON: {exc}") from None


def identity_table(universe: Iterable[str], family: Iterable[Iterable[str]] | None = None) -> MuTable:
    fam = [frozenset(X) for X in family] if family is not None else powerset(universe)
    return MuTable(tuple(universe), fam, {X: X for X in fam})


def tables_from_masks(universe: tuple, fam: list[int], vals: Mapping[int, int],
                      eta: Mapping[int, int] | None = None) -> MuTable:
    def nm(m: int) -> frozenset:
        return frozenset(p for i, p in enumerate(universe) if m >> i & 1)
    family = [nm(X) for X in fam]
    values = {nm(X): nm(vals[X]) for X in fam}
    e = {nm(X): nm(eta[X]) for X in fam} if eta is not None else None
    return MuTable(universe, family, values, e)
