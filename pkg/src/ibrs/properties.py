"""Algebraic conditions on choice functions f: Y -> P(U), closure conditions
on the family Y, and brute-force verification of implications between them.

Conditions are universally quantified over members of the family.  An
instance that needs a set outside the family (an intersection, a union, a
pair {a,b}, ...) is skipped and counted, so a vacuous pass stays visible.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator

from .errors import SearchSpaceExceeded, UnknownProperty
from .table import MuTable, powerset, tables_from_masks


@dataclass
class PropertyVerdict:
    property: str
    holds: bool
    witness: dict | None = None
    skipped_instances: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"property": self.property, "holds": self.holds,
                "witness": self.witness, "skipped_instances": self.skipped_instances}


# Each checker gets (family masks, f, members set, n) and returns
# (witness-or-None, skipped).  Witness values are masks, converted later.

Checker = Callable[[list, dict, set, int], tuple]


def _subset(fam, f, Y, n):
    for X in fam:
        if f[X] & ~X:
            return {"X": X}, 0
    return None, 0


def _empty(fam, f, Y, n):
    for X in fam:
        if not f[X] and X:
            return {"X": X}, 0
    return None, 0


def _pr(fam, f, Y, n):
    for X in fam:
        for Z in fam:
            if X & ~Z == 0 and f[Z] & X & ~f[X]:
                return {"X": X, "Y": Z}, 0
    return None, 0


def _pr_prime(fam, f, Y, n):
    skipped = 0
    for X in fam:
        for Z in fam:
            if X & Z not in Y:
                skipped += 1
                continue
            if f[X] & Z & ~f[X & Z]:
                return {"X": X, "Y": Z}, skipped
    return None, skipped


def _union_check(test):
    def check(fam, f, Y, n):
        skipped = 0
        for X in fam:
            for Z in fam:
                if X | Z not in Y:
                    skipped += 1
                    continue
                if test(X, Z, f):
                    return {"X": X, "Y": Z}, skipped
        return None, skipped
    return check


_or = _union_check(lambda X, Z, f: f[X | Z] & ~(f[X] | f[Z]))
_wor = _union_check(lambda X, Z, f: f[X | Z] & ~(f[X] | Z))
_disjor = _union_check(lambda X, Z, f: not X & Z and f[X | Z] & ~(f[X] | f[Z]))
_par = _union_check(lambda X, Z, f: f[X | Z] not in (f[X], f[Z], f[X] | f[Z]))
_cup = _union_check(lambda X, Z, f: f[Z] & X & ~f[X] and f[X | Z] & Z)
_cup_prime = _union_check(lambda X, Z, f: f[Z] & X & ~f[X] and f[X | Z] != f[X])


def _between(test):
    # instances with f(X) <= Y <= X
    def check(fam, f, Y, n):
        for X in fam:
            for Z in fam:
                if f[X] & ~Z == 0 and Z & ~X == 0 and test(X, Z, f):
                    return {"X": X, "Y": Z}, 0
        return None, 0
    return check


_cut = _between(lambda X, Z, f: f[X] & ~f[Z])
_cm = _between(lambda X, Z, f: f[Z] & ~f[X])
_cum = _between(lambda X, Z, f: f[Z] != f[X])


def _resm(fam, f, Y, n):
    skipped = 0
    for X in fam:
        for A in fam:
            if f[X] & ~A:
                continue
            for B in fam:
                if f[X] & ~(A & B):
                    continue
                if X & A not in Y:
                    skipped += 1
                    continue
                if f[X & A] & ~B:
                    return {"X": X, "A": A, "B": B}, skipped
    return None, skipped


def _subset_supset(fam, f, Y, n):
    for X in fam:
        for Z in fam:
            if f[X] & ~Z == 0 and f[Z] & ~X == 0 and f[X] != f[Z]:
                return {"X": X, "Y": Z}, 0
    return None, 0


def _ratm(fam, f, Y, n):
    for X in fam:
        for Z in fam:
            if X & ~Z == 0 and X & f[Z] and f[X] & ~(f[Z] & X):
                return {"X": X, "Y": Z}, 0
    return None, 0


def _eq(fam, f, Y, n):
    for X in fam:
        for Z in fam:
            if X & ~Z == 0 and X & f[Z] and f[X] != f[Z] & X:
                return {"X": X, "Y": Z}, 0
    return None, 0


def _eq_prime(fam, f, Y, n):
    skipped = 0
    for X in fam:
        for Z in fam:
            if not f[Z] & X:
                continue
            if Z & X not in Y:
                skipped += 1
                continue
            if f[Z & X] != f[Z] & X:
                return {"X": X, "Y": Z}, skipped
    return None, skipped


def _in(fam, f, Y, n):
    skipped = 0
    for X in fam:
        for a in range(n):
            bit = 1 << a
            if not X & bit or f[X] & bit:
                continue
            pairs = [bit | 1 << b for b in range(n) if X >> b & 1 and bit | 1 << b in Y]
            if not pairs:
                skipped += 1
                continue
            if all(f[P] & bit for P in pairs):
                return {"X": X, "a": a}, skipped
    return None, skipped


PROPERTIES: dict[str, tuple[str, Checker]] = {
    "mu_subset": ("(μ⊆)", _subset),
    "mu_empty": ("(μ∅)", _empty),
    "mu_empty_fin": ("(μ∅fin)", _empty),
    "mu_PR": ("(μPR)", _pr),
    "mu_PR_prime": ("(μPR′)", _pr_prime),
    "mu_OR": ("(μOR)", _or),
    "mu_wOR": ("(μwOR)", _wor),
    "mu_disjOR": ("(μdisjOR)", _disjor),
    "mu_CUT": ("(μCUT)", _cut),
    "mu_CM": ("(μCM)", _cm),
    "mu_ResM": ("(μResM)", _resm),
    "mu_CUM": ("(μCUM)", _cum),
    "mu_subset_supset": ("(μ⊆⊇)", _subset_supset),
    "mu_RatM": ("(μRatM)", _ratm),
    "mu_eq": ("(μ=)", _eq),
    "mu_eq_prime": ("(μ=′)", _eq_prime),
    "mu_par": ("(μ∥)", _par),
    "mu_cup": ("(μ∪)", _cup),
    "mu_cup_prime": ("(μ∪′)", _cup_prime),
    "mu_in": ("(μ∈)", _in),
}

_ALIASES = {
    "⊆": "mu_subset", "subset": "mu_subset", "∅": "mu_empty", "empty": "mu_empty",
    "∅fin": "mu_empty_fin", "emptyfin": "mu_empty_fin", "pr": "mu_PR", "pr′": "mu_PR_prime",
    "pr'": "mu_PR_prime", "or": "mu_OR", "wor": "mu_wOR", "disjor": "mu_disjOR", "cut": "mu_CUT",
    "cm": "mu_CM", "resm": "mu_ResM", "cum": "mu_CUM", "⊆⊇": "mu_subset_supset",
    "subset_supset": "mu_subset_supset", "ratm": "mu_RatM", "=": "mu_eq", "eq": "mu_eq",
    "=′": "mu_eq_prime", "='": "mu_eq_prime", "eq'": "mu_eq_prime", "eq_prime": "mu_eq_prime",
    "∥": "mu_par", "par": "mu_par", "∪": "mu_cup", "cup": "mu_cup", "∪′": "mu_cup_prime",
    "∪'": "mu_cup_prime", "cup'": "mu_cup_prime", "cup_prime": "mu_cup_prime", "∈": "mu_in", "in": "mu_in",
    "pr_prime": "mu_PR_prime",
}


def property_id(name: str) -> str:
    if name in PROPERTIES:
        return name
    key = name.strip().strip("()").replace(" ", "")
    for prefix in ("μ", "mu_", "mu"):
        if key.startswith(prefix):
            key = key[len(prefix):]
            break
    if key in PROPERTIES:
        return key
    k = _ALIASES.get(key) or _ALIASES.get(key.lower())
    if k is None:
        raise UnknownProperty(f"unknown property {name!r}")
    return k


def _witness_names(table: MuTable, w: dict | None) -> dict | None:
    if w is None:
        return None
    out = {}
    for k, v in w.items():
        out[k] = table.universe[v] if k == "a" else sorted(table.names(v))
    return out


def check_masks(prop: str, fam: list, f: dict, n: int, members: set | None = None) -> tuple:
    members = set(fam) if members is None else members
    return PROPERTIES[prop][1](fam, f, members, n)


def check_property(table: MuTable, prop: str) -> PropertyVerdict:
    pid = property_id(prop)
    fam, f = table.as_masks()
    w, skipped = check_masks(pid, fam, f, len(table.universe))
    return PropertyVerdict(PROPERTIES[pid][0], w is None, _witness_names(table, w), skipped)


def check_all(table: MuTable) -> list[PropertyVerdict]:
    return [check_property(table, p) for p in PROPERTIES]


# ---------------------------------------------------------------- closures

CLOSURES = {
    "intersection": "(∩)",
    "union": "(∪)",
    "complement": "(C)",
    "difference": "set difference",
    "singletons": "singletons",
}
_CLOSURE_ALIASES = {"∩": "intersection", "cap": "intersection", "∪": "union", "cup": "union",
                    "c": "complement", "𝐂": "complement", "-": "difference", "setdiff": "difference",
                    "set-difference": "difference", "singleton": "singletons"}


def closure_id(name: str) -> str:
    key = name.strip().strip("()")
    if key in CLOSURES:
        return key
    k = _CLOSURE_ALIASES.get(key) or _CLOSURE_ALIASES.get(key.lower())
    if k is None:
        raise UnknownProperty(f"unknown closure {name!r}")
    return k


def closure_witness(kind: str, fam: list, n: int) -> dict | None:
    members = set(fam)
    full = (1 << n) - 1
    if kind == "singletons":
        for a in range(n):
            if 1 << a not in members:
                return {"missing": 1 << a}
        return None
    if kind == "complement":
        for X in fam:
            if full & ~X not in members:
                return {"X": X, "missing": full & ~X}
        return None
    op = {"intersection": lambda a, b: a & b, "union": lambda a, b: a | b,
          "difference": lambda a, b: a & ~b}[kind]
    for X in fam:
        for Z in fam:
            if op(X, Z) not in members:
                return {"X": X, "Y": Z, "missing": op(X, Z)}
    return None


def check_family_closure(table: MuTable, closure: str) -> PropertyVerdict:
    cid = closure_id(closure)
    fam, _ = table.as_masks()
    w = closure_witness(cid, fam, len(table.universe))
    names = None if w is None else {k: sorted(table.names(v)) for k, v in w.items()}
    return PropertyVerdict(CLOSURES[cid], w is None, names, 0)


def violates(table: MuTable, prop: str, witness: dict) -> bool:
    """Re-evaluate one instance directly on frozensets."""
    pid = property_id(prop)
    f = table.values
    fam = set(table.family)
    X = frozenset(witness.get("X", ()))
    Z = frozenset(witness.get("Y", ()))
    if pid == "mu_subset":
        return not f[X] <= X
    if pid in ("mu_empty", "mu_empty_fin"):
        return bool(X) and not f[X]
    if pid == "mu_PR":
        return X <= Z and not (f[Z] & X) <= f[X]
    if pid == "mu_PR_prime":
        return not (f[X] & Z) <= f[X & Z]
    if pid == "mu_OR":
        return not f[X | Z] <= f[X] | f[Z]
    if pid == "mu_wOR":
        return not f[X | Z] <= f[X] | Z
    if pid == "mu_disjOR":
        return not X & Z and not f[X | Z] <= f[X] | f[Z]
    if pid in ("mu_CUT", "mu_CM", "mu_CUM"):
        if not (f[X] <= Z <= X):
            return False
        return {"mu_CUT": not f[X] <= f[Z], "mu_CM": not f[Z] <= f[X], "mu_CUM": f[Z] != f[X]}[pid]
    if pid == "mu_ResM":
        A, B = frozenset(witness["A"]), frozenset(witness["B"])
        return f[X] <= A & B and not f[X & A] <= B
    if pid == "mu_subset_supset":
        return f[X] <= Z and f[Z] <= X and f[X] != f[Z]
    if pid == "mu_RatM":
        return X <= Z and bool(X & f[Z]) and not f[X] <= f[Z] & X
    if pid == "mu_eq":
        return X <= Z and bool(X & f[Z]) and f[X] != f[Z] & X
    if pid == "mu_eq_prime":
        return bool(f[Z] & X) and f[Z & X] != f[Z] & X
    if pid == "mu_par":
        return f[X | Z] not in (f[X], f[Z], f[X] | f[Z])
    if pid == "mu_cup":
        return bool(f[Z] & (X - f[X])) and bool(f[X | Z] & Z)
    if pid == "mu_cup_prime":
        return bool(f[Z] & (X - f[X])) and f[X | Z] != f[X]
    if pid == "mu_in":
        a = witness["a"]
        if a not in X or a in f[X]:
            return False
        return all(a in f[frozenset({a, b})] for b in X if frozenset({a, b}) in fam)
    raise UnknownProperty(pid)


# ---------------------------------------------------------------- implication rows


@dataclass(frozen=True)
class Row:
    id: str
    lhs: tuple
    rhs: tuple
    aux: tuple = ()
    closures: tuple = ()
    kind: str = "positive"  # positive | negative | unverifiable
    note: str = ""

    def statement(self) -> str:
        sym = lambda p: PROPERTIES[p][0]
        arrow = {"positive": "⇒", "negative": "⇏", "unverifiable": "⇒"}[self.kind]
        side = " + ".join([sym(p) for p in self.aux] + [CLOSURES[c] for c in self.closures])
        return (" + ".join(sym(p) for p in self.lhs) + f" {arrow}"
                + (f" [{side}]" if side else "") + " " + ", ".join(sym(p) for p in self.rhs))


ROWS: dict[str, Row] = {r.id: r for r in [
    Row("1.1", ("mu_PR",), ("mu_PR_prime",), ("mu_subset",), ("intersection",)),
    Row("1.2", ("mu_PR_prime",), ("mu_PR",), ("mu_subset",), ("intersection",)),
    Row("2.1", ("mu_PR",), ("mu_OR",), ("mu_subset",)),
    Row("2.2", ("mu_OR",), ("mu_PR",), ("mu_subset",), ("difference",)),
    Row("3", ("mu_PR",), ("mu_CUT",)),
    Row("4", ("mu_subset", "mu_subset_supset", "mu_CUM", "mu_RatM"), ("mu_PR",), (), ("intersection",),
        "negative"),
    Row("5.1", ("mu_CM",), ("mu_ResM",), ("mu_subset",), ("intersection",)),
    Row("5.2", ("mu_ResM",), ("mu_CM",), kind="unverifiable", note="needs an infinite universe"),
    Row("6.1", ("mu_CM", "mu_CUT"), ("mu_CUM",)),
    Row("6.2", ("mu_CUM",), ("mu_CM", "mu_CUT")),
    Row("7", ("mu_subset", "mu_subset_supset"), ("mu_CUM",)),
    Row("8", ("mu_subset", "mu_CUM"), ("mu_subset_supset",), (), ("intersection",)),
    Row("9", ("mu_subset", "mu_CUM"), ("mu_subset_supset",), kind="negative"),
    Row("10", ("mu_RatM", "mu_PR"), ("mu_eq",)),
    Row("11", ("mu_eq",), ("mu_PR",)),
    Row("12.1", ("mu_eq",), ("mu_eq_prime",), ("mu_subset",), ("intersection",)),
    Row("12.2", ("mu_eq_prime",), ("mu_eq",), ("mu_subset",), ("intersection",)),
    Row("13", ("mu_subset", "mu_eq"), ("mu_cup",), (), ("union",)),
    Row("14", ("mu_subset", "mu_empty", "mu_eq"), ("mu_par", "mu_cup_prime", "mu_CUM"), (), ("union",)),
    Row("15", ("mu_subset", "mu_par"), ("mu_eq",), (), ("difference",)),
    Row("16", ("mu_par", "mu_in", "mu_PR", "mu_subset"), ("mu_eq",), (), ("union", "singletons")),
    Row("17", ("mu_CUM", "mu_eq"), ("mu_in",), (), ("union", "singletons")),
    Row("18", ("mu_CUM", "mu_eq", "mu_subset"), ("mu_par",), (), ("union",)),
    Row("19", ("mu_PR", "mu_CUM", "mu_par"), ("mu_eq",), kind="unverifiable",
        note="auxiliary is a definability condition; every set is definable at finite scale"),
    Row("20", ("mu_subset", "mu_PR", "mu_eq"), ("mu_par",), kind="negative"),
    Row("21", ("mu_subset", "mu_PR", "mu_par"), ("mu_eq",), kind="negative",
        note="counterexample family must not be closed under set difference"),
    Row("22", ("mu_subset", "mu_PR", "mu_par", "mu_eq", "mu_cup"), ("mu_in",), kind="negative"),
]}

POSITIVE_FINITE_ROWS = [r for r in ROWS if ROWS[r].kind == "positive"]


def _all_families(n: int) -> Iterator[list[int]]:
    sets = list(range(1 << n))
    for bits in range(1 << len(sets)):
        yield [s for i, s in enumerate(sets) if bits >> i & 1]


def _tables(fam: list[int], n: int, subset_only: bool) -> Iterator[dict]:
    if subset_only:
        choices = [[v for v in range(1 << n) if v & ~X == 0] for X in fam]
    else:
        choices = [list(range(1 << n))] * len(fam)
    for vals in product(*choices):
        yield dict(zip(fam, vals))


def _satisfies(props: Iterable[str], fam: list, f: dict, n: int, members: set) -> bool:
    return all(PROPERTIES[p][1](fam, f, members, n)[0] is None for p in props)


def _closed(closures: Iterable[str], fam: list, n: int) -> bool:
    return all(closure_witness(c, fam, n) is None for c in closures)


def known_counterexample(row_id: str) -> MuTable | None:
    from .fixtures import mu_cum_cd_table, need_pr_table

    return {"4": need_pr_table, "9": mu_cum_cd_table}.get(row_id, lambda: None)()


def verify_implication(row_id: str, universe_size: int = 2, mode: str = "exhaustive",
                       families: str = "powerset", seed: int = 0, samples: int = 100_000,
                       limit: int = 5_000_000) -> dict:
    """Search tables for a counterexample to one row of the implication table.

    Positive rows: every table satisfying the left side, the auxiliary
    properties and the family closures is checked against the right side.
    Negative rows: the known counterexample is checked, otherwise one is
    searched for over all families and subset-respecting tables.
    """
    row = ROWS.get(row_id)
    if row is None:
        raise UnknownProperty(f"unknown row {row_id!r}")
    U = tuple("abcdefgh"[:universe_size])
    n = universe_size
    report = {"row": row.id, "statement": row.statement(), "kind": row.kind,
              "universe_size": n, "mode": mode, "families": families, "seed": seed}
    if row.note:
        report["note"] = row.note
    if row.kind == "unverifiable":
        report["verdict"] = "unverifiable at desk scale"
        return report

    if row.kind == "negative":
        known = known_counterexample(row.id)
        if known is not None:
            fam, f = known.as_masks()
            kn = len(known.universe)
            ok = (_satisfies(row.lhs + row.aux, fam, f, kn, set(fam)) and _closed(row.closures, fam, kn)
                  and not _satisfies(row.rhs, fam, f, kn, set(fam)))
            report.update(counterexample=known.to_dict(), source="known",
                          verdict="counterexample confirmed" if ok else "known table does not refute the row")
            return report
        checked = 0
        for size in range(1, n + 1):
            for fam in _all_families(size):
                if not _closed(row.closures, fam, size):
                    continue
                members = set(fam)
                for f in _tables(fam, size, "mu_subset" in row.lhs + row.aux):
                    checked += 1
                    if checked > limit:
                        raise SearchSpaceExceeded(f"more than {limit} tables")
                    if _satisfies(row.lhs + row.aux, fam, f, size, members) and \
                            not _satisfies(row.rhs, fam, f, size, members):
                        t = tables_from_masks(tuple("abcdefgh"[:size]), fam, f)
                        report.update(counterexample=t.to_dict(), source="search", tables_checked=checked,
                                      verdict="counterexample found")
                        return report
        report.update(counterexample=None, tables_checked=checked,
                      verdict=f"no counterexample within |U| <= {n}")
        return report

    # positive rows
    checked = satisfying = 0
    counterexample = None
    violated: list[str] = []

    def examine(fam, f, members):
        nonlocal checked, satisfying, counterexample, violated
        checked += 1
        if not _satisfies(row.lhs + row.aux, fam, f, n, members):
            return False
        satisfying += 1
        bad = [p for p in row.rhs if PROPERTIES[p][1](fam, f, members, n)[0] is not None]
        if bad:
            counterexample = tables_from_masks(U, fam, f)
            violated = [PROPERTIES[p][0] for p in bad]
            return True
        return False

    if families == "all":
        fams = [fam for fam in _all_families(n) if _closed(row.closures, fam, n)]
    else:
        fams = [list(range(1 << n))]
        if not _closed(row.closures, fams[0], n):
            fams = []
    if mode == "sampled":
        rng = random.Random(seed)
        for _ in range(samples):
            fam = rng.choice(fams)
            f = {X: rng.randrange(1 << n) for X in fam}
            if examine(fam, f, set(fam)):
                break
    else:
        subset_only = mode == "filtered"
        total = sum(((1 << n) ** len(fam)) if not subset_only else _count_subset_tables(fam)
                    for fam in fams)
        if total > limit:
            raise SearchSpaceExceeded(f"{total} tables exceed the limit {limit}; use filtered or sampled mode")
        done = False
        for fam in fams:
            members = set(fam)
            for f in _tables(fam, n, subset_only):
                if examine(fam, f, members):
                    done = True
                    break
            if done:
                break
    report.update(tables_checked=checked, tables_satisfying_lhs=satisfying)
    if counterexample is None:
        report["counterexample"] = None
        report["verdict"] = f"no counterexample found ({checked} tables checked)"
    else:
        report["counterexample"] = counterexample.to_dict()
        report["violated"] = violated
        report["verdict"] = "counterexample found"
    if mode == "filtered":
        report["filter"] = "tables restricted to f(X) ⊆ X"
    return report


def _count_subset_tables(fam: list[int]) -> int:
    total = 1
    for X in fam:
        total *= 1 << bin(X).count("1")
    return total
