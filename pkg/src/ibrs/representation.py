"""Structures built from tabulated choice functions.

* ``build_level2_attacking``: a level-2 structure whose attacking minimum
  relative to eta reproduces rho.
* ``build_level1_stage`` + ``lemma_level3_modify``: a level-3 essentially
  smooth structure reproducing mu.
* ``search_level2_totally_smooth``: bounded exhaustive search for a level-2
  totally smooth representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Iterator, Sequence

from .errors import BoundsTooLarge, EmptyFactor, NotLevelOne, PreconditionViolated
from .structure import Arrow, PointCopy, Structure
from .table import MuTable, fmt_set, set_key

STAR = "*"


@dataclass(frozen=True)
class ChoiceFunction:
    domain: tuple
    picks: tuple

    def __call__(self, X) -> str:
        return self.picks[self.domain.index(X)]

    @property
    def range(self) -> frozenset:
        return frozenset(self.picks)

    def label(self) -> str:
        return ";".join(f"{{{fmt_set(X)}}}:{p}" for X, p in zip(self.domain, self.picks))


def enumerate_choice_functions(sets: Sequence[Iterable[str]],
                               keys: Sequence[Iterable[str]] | None = None) -> Iterator[ChoiceFunction]:
    """All choice functions over ``sets`` in lexicographic order.

    With ``keys`` the function is indexed by ``keys[i]`` and picks from
    ``sets[i]``, as in f(X) in mu(X).
    """
    factors = []
    for X in sets:
        X = frozenset(X)
        if not X:
            raise EmptyFactor("choice over an empty set")
        factors.append(sorted(X))
    domain = tuple(frozenset(K) for K in (keys if keys is not None else sets))
    for picks in product(*factors):
        yield ChoiceFunction(domain, picks)


def _choices_or_none(sets: Sequence[frozenset], keys: Sequence[frozenset]) -> list[ChoiceFunction]:
    # an empty factor leaves no choice function at all
    if any(not X for X in sets):
        return []
    return list(enumerate_choice_functions(sets, keys))


# ---------------------------------------------------------------- level 2


def build_level2_attacking(table: MuTable) -> tuple[Structure, dict]:
    """Attacking level-2 structure relative to ``table.eta`` for rho = ``table.values``.

    A missing eta column means eta is the identity.
    """
    fam = table.family
    rho = table.values
    eta = table.eta if table.eta is not None else {X: X for X in fam}
    for X in fam:
        if not rho[X] <= eta[X]:
            raise PreconditionViolated(f"rho({{{fmt_set(X)}}}) is not inside eta")
    empty = frozenset()
    if empty in rho and rho[empty] != eta[empty]:
        raise PreconditionViolated("rho and eta differ on the empty set")

    def gap(X: frozenset) -> frozenset:
        return eta[X] - rho[X]

    copies: list[PointCopy] = []
    labels: dict[PointCopy, str] = {}
    records: list[tuple[PointCopy, ChoiceFunction, frozenset | str]] = []
    for x in table.universe:
        domain = [X for X in fam if x in gap(X)]
        idx = 0
        for f in enumerate_choice_functions(domain):
            ran = f.range
            options: list[frozenset | str] = [STAR]
            for X in fam:
                if x not in rho[X]:
                    continue
                if not any(Xp <= X and x in gap(Xp) for Xp in fam):
                    continue
                if all((ran & Xpp) - X for Xpp in fam if X <= Xpp and x in gap(Xpp)):
                    options.append(X)
            for X in options:
                c = PointCopy(x, idx)
                idx += 1
                copies.append(c)
                labels[c] = f"f=({f.label()}) X={X if X == STAR else '{' + fmt_set(X) + '}'}"
                records.append((c, f, X))

    arrows: list[Arrow] = []
    for c, f, X in records:
        for xp in sorted(f.range):
            head = f"a[{xp}>{c}]"
            if X == STAR or xp not in X:
                arrows.append(Arrow(head, PointCopy(xp, 0), c))
                continue
            for k, xpp in enumerate(sorted(X)):
                aid = f"{head}/{xpp}"
                arrows.append(Arrow(aid, PointCopy(xp, 0), c, head, k))
                arrows.append(Arrow(f"b[{xpp}>{aid}]", PointCopy(xpp, 0), aid))
    return Structure(table.universe, copies, arrows, 2, labels), dict(eta)


# ---------------------------------------------------------------- level 3


def _require_mu_subset(table: MuTable) -> None:
    for X in table.family:
        if not table.values[X] <= X:
            raise PreconditionViolated(f"mu({{{fmt_set(X)}}}) is not a subset of its argument")


def _require_level3(table: MuTable) -> None:
    from .properties import check_property

    _require_mu_subset(table)
    v = check_property(table, "mu_subset_supset")
    if not v.holds:
        raise PreconditionViolated(f"table violates (mu subset-supset): {v.witness}")


def build_level1_stage(table: MuTable) -> Structure:
    """Copies <x,f> for f choosing from mu(X) over the X where x is not minimal;
    <x',f'> attacks <x,f> whenever x' is in the range of f."""
    _require_mu_subset(table)
    mu = table.values
    fam = table.family
    per_point: dict[str, list[ChoiceFunction]] = {}
    copies: list[PointCopy] = []
    labels: dict[PointCopy, str] = {}
    for x in table.universe:
        keys = [X for X in fam if x in X - mu[X]]
        fs = _choices_or_none([mu[X] for X in keys], keys)
        per_point[x] = fs
        for i, f in enumerate(fs):
            c = PointCopy(x, i)
            copies.append(c)
            labels[c] = f"f=({f.label()})"
    arrows = []
    for x in table.universe:
        for i, f in enumerate(per_point[x]):
            for xp in sorted(f.range):
                for j in range(len(per_point[xp])):
                    arrows.append(Arrow(f"{xp}#{j}>{x}#{i}", PointCopy(xp, j), PointCopy(x, i)))
    return Structure(table.universe, copies, arrows, 1, labels)


@dataclass(frozen=True)
class AlphaContext:
    arrow: Arrow
    O_sets: tuple
    D_sets: tuple


def alpha_context(structure: Structure, table: MuTable, arrow_id: str) -> AlphaContext:
    a = structure.arrow(arrow_id)
    if not isinstance(a.target, PointCopy):
        raise NotLevelOne(f"arrow {arrow_id} does not target a point")
    x, y = a.target.point, a.origin.point
    mu = table.values
    O = tuple(Y for Y in table.family if x in Y - mu[Y] and y in mu[Y])
    D = tuple(X for X in table.family if x in mu[X] and y in X)
    return AlphaContext(a, O, D)


def _least_copy(structure: Structure, point: str) -> PointCopy | None:
    cps = structure.copies_of(point)
    return cps[0] if cps else None


def _lemma_arrows(structure: Structure, table: MuTable, ctx: AlphaContext) -> list[Arrow]:
    a = ctx.arrow
    mu = table.values
    out: list[Arrow] = []
    gs = list(enumerate_choice_functions([mu[Y] for Y in ctx.O_sets], ctx.O_sets))
    for k, f in enumerate(enumerate_choice_functions([mu[X] for X in ctx.D_sets], ctx.D_sets)):
        acopy = f"{a.id}<{k}>"
        out.append(Arrow(acopy, a.origin, a.target, a.base, k))
        for r, Xr in enumerate(ctx.D_sets):
            fx = f(Xr)
            src = _least_copy(structure, fx)
            if src is None:
                continue
            for h, g in enumerate(gs):
                bid = f"{acopy}b[{r},{h}]"
                out.append(Arrow(bid, src, acopy))
                for s_ix, Ys in enumerate(ctx.O_sets):
                    if not mu[Ys] <= Xr and fx in Ys:
                        gsrc = _least_copy(structure, g(Ys))
                        if gsrc is not None:
                            out.append(Arrow(f"{bid}c[{s_ix}]", gsrc, bid))
    return out


def lemma_level3_modify(structure: Structure, table: MuTable, arrow_id: str) -> Structure:
    """Replace one level-1 arrow by copies guarded with level-2 and level-3 arrows."""
    _require_level3(table)
    ctx = alpha_context(structure, table, arrow_id)
    if not ctx.O_sets or not ctx.D_sets:
        raise PreconditionViolated(f"arrow {arrow_id} needs nonempty O and D families")
    if structure.attackers(arrow_id):
        raise PreconditionViolated(f"arrow {arrow_id} is already attacked")
    arrows = [b for b in structure.arrows if b.id != arrow_id]
    arrows += _lemma_arrows(structure, table, ctx)
    return Structure(structure.carrier, structure.copies, arrows, 3, structure.copy_labels)


def build_level3_essentially_smooth(table: MuTable) -> Structure:
    _require_level3(table)
    stage = build_level1_stage(table)
    arrows: list[Arrow] = []
    for a in stage.arrows:
        ctx = alpha_context(stage, table, a.id)
        if ctx.O_sets and ctx.D_sets:
            arrows += _lemma_arrows(stage, table, ctx)
        else:
            arrows.append(a)
    return Structure(stage.carrier, stage.copies, arrows, 3, stage.copy_labels)


# ---------------------------------------------------------------- search


@dataclass
class SearchResult:
    found: bool
    structure: Structure | None
    bounds: dict
    space: int
    evaluated: int
    per_point: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "result": "found" if self.found else "exhausted",
            "bounds": self.bounds,
            "copy_types_evaluated": self.evaluated,
            "search_space": self.space,
            "per_point": self.per_point,
            "structure": self.structure.to_dict() if self.structure is not None else None,
        }


def _copy_types(n: int, max_arrow_copies: int) -> list[tuple]:
    # per origin point: a multiset of attacker sets, one per level-1 arrow copy
    subsets = list(range(1 << n))
    per_origin = [m for r in range(max_arrow_copies + 1)
                  for m in combinations_with_replacement(subsets, r)]
    return per_origin


def search_level2_totally_smooth(table: MuTable, max_copies_per_point: int = 1,
                                 max_arrow_copies: int = 1, require_total: bool = True,
                                 ceiling: int = 10**7) -> SearchResult:
    """Exhaustive search over level <= 2 structures within the bounds.

    A copy <x,i> is described by, for each origin point z, the level-1 arrows
    z -> <x,i> (at most ``max_arrow_copies``), each given by the set of points
    that attack it with a level-2 arrow.  Validity, mu and total smoothness
    depend only on these point sets, and each point's copies can be chosen
    independently once mu is fixed to the table, so the search runs point by
    point.
    """
    U = table.universe
    n = len(U)
    ix = {p: i for i, p in enumerate(U)}
    per_origin = _copy_types(n, max_arrow_copies)
    n_types = len(per_origin) ** n
    space_estimate = n * n_types
    bounds = {"max_copies_per_point": max_copies_per_point, "max_arrow_copies": max_arrow_copies,
              "require_total": require_total, "ceiling": ceiling}
    if space_estimate > ceiling:
        raise BoundsTooLarge(f"{space_estimate} candidate copy types exceed the ceiling {ceiling}")
    fam, vals = table.as_masks()
    evaluated = 0
    chosen: dict[str, list[tuple]] = {}
    per_point: dict[str, dict] = {}
    for x in U:
        xb = 1 << ix[x]
        sets = [X for X in fam if X & xb]
        minimal = [X for X in sets if vals[X] & xb]
        nonmin = [X for X in sets if not vals[X] & xb]
        usable: dict[int, tuple] = {}
        for ctype in product(per_origin, repeat=n):
            evaluated += 1
            arrows = [(z, A) for z in range(n) for A in ctype[z]]
            ok = True
            for X in nonmin:
                if not any(X >> z & 1 and not A & X for z, A in arrows):
                    ok = False
                    break
            if not ok:
                continue
            if require_total and not _locally_total(arrows, sets, vals):
                continue
            kill = 0
            for j, X in enumerate(minimal):
                if any(X >> z & 1 and not A & X for z, A in arrows):
                    kill |= 1 << j
            usable.setdefault(kill, ctype)
        full = (1 << len(minimal)) - 1
        pick = None
        masks = sorted(usable)
        for r in range(1, max_copies_per_point + 1):
            for combo in combinations(masks, r):
                acc = full
                for m in combo:
                    acc &= m
                if acc == 0:
                    pick = [usable[m] for m in combo]
                    break
            if pick is not None:
                break
        per_point[x] = {"usable_kill_patterns": len(usable), "copies_needed": None if pick is None else len(pick)}
        if pick is None:
            return SearchResult(False, None, bounds, space_estimate, evaluated, per_point)
        chosen[x] = pick
    return SearchResult(True, _assemble(U, chosen), bounds, space_estimate, evaluated, per_point)


def _locally_total(arrows: list[tuple[int, int]], sets: list[int], vals: dict[int, int]) -> bool:
    for X in sets:
        m = vals[X]
        inside = [(z, A) for z, A in arrows if X >> z & 1]
        for z, A in inside:
            valid = not A & X
            if not any(m >> z2 & 1 and (not valid or not A2 & X) for z2, A2 in inside):
                return False
            if A & X and not A & m:
                return False
    return True


def _assemble(U: tuple, chosen: dict[str, list[tuple]]) -> Structure:
    copies, arrows = [], []
    for x in U:
        for i, ctype in enumerate(chosen[x]):
            c = PointCopy(x, i)
            copies.append(c)
            for z, attackers in enumerate(ctype):
                for k, A in enumerate(attackers):
                    aid = f"a[{U[z]}>{c}]/{k}"
                    arrows.append(Arrow(aid, PointCopy(U[z], 0), c, f"a[{U[z]}>{c}]", k))
                    for w in range(len(U)):
                        if A >> w & 1:
                            arrows.append(Arrow(f"b[{U[w]}>{aid}]", PointCopy(U[w], 0), aid))
    return Structure(U, copies, arrows, 2)
