"""Finite propositional logic on top of choice functions.

Valuations of an n-atom language are numbered 0..2^n-1 and named ``v`` plus
their bit string in atom order, so ``v10`` over (p, q) makes p true and q
false.  A model set is a bit mask over valuation numbers, and a formula up
to equivalence is just its model set.  Closed theories are represented as
sets of formula classes (bit masks over all 2^(2^n) model sets), which is
what the rule schemata compare.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (AtomOutsideLanguage, CarrierMismatch, FormulaSyntaxError, OracleInconsistent,
                     UnknownRule)
from .properties import PropertyVerdict, check_property
from .structure import Structure
from .table import MuTable, powerset
from .validity import mu_mask

# ---------------------------------------------------------------- syntax


@dataclass(frozen=True, repr=False)
class Formula:
    op: str                      # atom, const, not, and, or, imp, iff
    args: tuple = ()
    name: str | bool | None = None

    def __str__(self) -> str:
        if self.op == "atom":
            return self.name
        if self.op == "const":
            return "T" if self.name else "F"
        if self.op == "not":
            return f"!{self.args[0]}"
        sym = {"and": "&", "or": "|", "imp": "->", "iff": "<->"}[self.op]
        return f"({self.args[0]} {sym} {self.args[1]})"

    def __repr__(self) -> str:
        return f"Formula({self})"

    def atoms(self) -> frozenset:
        if self.op == "atom":
            return frozenset([self.name])
        out = frozenset()
        for a in self.args:
            out |= a.atoms()
        return out


def atom(name: str) -> Formula:
    return Formula("atom", (), name)


TOP = Formula("const", (), True)
BOTTOM = Formula("const", (), False)


def neg(f: Formula) -> Formula:
    return Formula("not", (f,))


def conj(a: Formula, b: Formula) -> Formula:
    return Formula("and", (a, b))


def disj(a: Formula, b: Formula) -> Formula:
    return Formula("or", (a, b))


_TOKEN = re.compile(r"\s*(?:(<->)|(->)|([!&|()])|([a-z][a-z0-9_]*)|([TF])(?![A-Za-z0-9_]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(4):
            out.append(("atom", m.group(4), start))
        elif m.group(5):
            out.append(("const", m.group(5), start))
        else:
            out.append(("sym", m.group(m.lastindex), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    # iff < imp < or < and < not; imp groups to the right, the rest to the left
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, sym: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "sym" and val == sym:
            self.i += 1
            return True
        return False

    def fail(self, what: str):
        kind, val, pos = self.peek()
        got = "end of input" if kind == "end" else repr(val)
        raise FormulaSyntaxError(f"expected {what}, got {got}", pos)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "end":
            self.fail("end of input")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.take("<->"):
            f = Formula("iff", (f, self.imp()))
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.take("->"):
            return Formula("imp", (f, self.imp()))
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.take("|"):
            f = Formula("or", (f, self.conj()))
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.take("&"):
            f = Formula("and", (f, self.unary()))
        return f

    def unary(self) -> Formula:
        if self.take("!"):
            return neg(self.unary())
        kind, val, _ = self.peek()
        if kind == "atom":
            self.i += 1
            return atom(val)
        if kind == "const":
            self.i += 1
            return TOP if val == "T" else BOTTOM
        if self.take("("):
            f = self.iff()
            if not self.take(")"):
                self.fail("')'")
            return f
        self.fail("a formula")


def parse_formula(text: str | Formula) -> Formula:
    """Parse ``! & | -> <->`` formulas over atoms ``[a-z][a-z0-9_]*`` and T/F."""
    if isinstance(text, Formula):
        return text
    return _Parser(text).parse()


# ---------------------------------------------------------------- semantics


class Language:
    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(atoms)
        if len(set(atoms)) != len(atoms):
            raise AtomOutsideLanguage("duplicate atom in language")
        for a in atoms:
            if not re.fullmatch(r"[a-z][a-z0-9_]*", a):
                raise AtomOutsideLanguage(f"{a!r} is not an atom name")
        self.atoms = atoms
        self.n = len(atoms)
        self.size = 1 << self.n                  # number of valuations
        self.full = (1 << self.size) - 1         # model set of T
        self.valuations = tuple("v" + format(k, f"0{self.n}b") if self.n else "v" for k in range(self.size))
        self._vix = {v: k for k, v in enumerate(self.valuations)}

    def __repr__(self) -> str:
        return f"Language({','.join(self.atoms)})"

    def value(self, k: int, atom_name: str) -> bool:
        i = self.atoms.index(atom_name)
        return bool(k >> (self.n - 1 - i) & 1)

    def atom_mask(self, atom_name: str) -> int:
        if atom_name not in self.atoms:
            raise AtomOutsideLanguage(f"atom {atom_name!r} is not in the language {list(self.atoms)}")
        i = self.atoms.index(atom_name)
        return sum(1 << k for k in range(self.size) if k >> (self.n - 1 - i) & 1)

    def mask_of(self, f: Formula | str) -> int:
        f = parse_formula(f)
        op = f.op
        if op == "atom":
            return self.atom_mask(f.name)
        if op == "const":
            return self.full if f.name else 0
        if op == "not":
            return self.full & ~self.mask_of(f.args[0])
        a, b = (self.mask_of(x) for x in f.args)
        if op == "and":
            return a & b
        if op == "or":
            return a | b
        if op == "imp":
            return (self.full & ~a) | b
        return self.full & ~(a ^ b)

    def theory_mask(self, theory: Iterable[Formula | str] | str) -> int:
        if isinstance(theory, (str, Formula)):
            theory = [theory]
        m = self.full
        for f in theory:
            m &= self.mask_of(f)
        return m

    def names(self, m: int) -> frozenset:
        return frozenset(v for k, v in enumerate(self.valuations) if m >> k & 1)

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for v in names:
            if v not in self._vix:
                raise CarrierMismatch(f"{v!r} is not a valuation of {self!r}")
            m |= 1 << self._vix[v]
        return m

    def literal_conj(self, k: int) -> Formula:
        lits = [atom(a) if self.value(k, a) else neg(atom(a)) for a in self.atoms]
        if not lits:
            return TOP
        f = lits[0]
        for x in lits[1:]:
            f = conj(f, x)
        return f

    def dnf(self, m: int) -> Formula:
        """Canonical formula with model set ``m``."""
        if m == 0:
            return BOTTOM
        if m == self.full:
            return TOP
        terms = [self.literal_conj(k) for k in range(self.size) if m >> k & 1]
        f = terms[0]
        for t in terms[1:]:
            f = disj(f, t)
        return f

    def cnf(self, m: int) -> Formula:
        """A second, conjunctive presentation of the same model set."""
        if m == self.full:
            return TOP
        if m == 0:
            return BOTTOM
        clauses = []
        for k in range(self.size):
            if not m >> k & 1:
                lits = [neg(atom(a)) if self.value(k, a) else atom(a) for a in self.atoms]
                c = lits[0]
                for x in lits[1:]:
                    c = disj(c, x)
                clauses.append(c)
        f = clauses[0]
        for c in clauses[1:]:
            f = conj(f, c)
        return f

    # formula classes: bit phi of a closed theory is set when phi is in it
    @cached_property
    def th_table(self) -> list[int]:
        """th_table[X] = Th(X) as a set of formula classes."""
        n_classes = 1 << self.size
        out = [0] * n_classes
        for X in range(n_classes):
            s = 0
            for phi in range(n_classes):
                if X & ~phi == 0:
                    s |= 1 << phi
            out[X] = s
        return out

    @cached_property
    def th_inverse(self) -> dict[int, int]:
        return {s: X for X, s in enumerate(self.th_table)}


Theory = tuple  # of Formula


def _lang(language: Language | Iterable[str]) -> Language:
    return language if isinstance(language, Language) else Language(language)


def _check_atoms(lang: Language, theory: Iterable[Formula]) -> None:
    for f in theory:
        extra = f.atoms() - set(lang.atoms)
        if extra:
            raise AtomOutsideLanguage(f"atoms {sorted(extra)} are not in the language {list(lang.atoms)}")


def _as_theory(theory) -> tuple:
    if isinstance(theory, (str, Formula)):
        theory = [theory]
    return tuple(parse_formula(f) for f in theory)


def models(language, theory) -> frozenset:
    """Names of the valuations satisfying every formula of ``theory``."""
    lang = _lang(language)
    th = _as_theory(theory)
    _check_atoms(lang, th)
    return lang.names(lang.theory_mask(th))


def theory_of(language, X: Iterable[str]) -> Theory:
    """Single-formula axiomatization (canonical DNF) of a set of valuations."""
    lang = _lang(language)
    return (lang.dnf(lang.mask(X)),)


# ---------------------------------------------------------------- consequence


class Consequence:
    """A consequence relation given by f(M(T)) = M(T-bar-bar) on all model sets."""

    def __init__(self, language, f: Sequence[int]):
        self.language = _lang(language)
        if len(f) != 1 << self.language.size:
            raise OracleInconsistent("the tabulation must cover every model set")
        self.f = list(f)

    def close_mask(self, m: int) -> int:
        return self.f[m]

    def entails(self, theory, query) -> bool:
        lang = self.language
        th = _as_theory(theory)
        q = parse_formula(query)
        _check_atoms(lang, th + (q,))
        return self.f[lang.theory_mask(th)] & ~lang.mask_of(q) == 0

    def consequences(self, theory) -> Theory:
        lang = self.language
        th = _as_theory(theory)
        _check_atoms(lang, th)
        return (lang.dnf(self.f[lang.theory_mask(th)]),)

    def table(self) -> MuTable:
        lang = self.language
        fam = powerset(lang.valuations)
        return MuTable(lang.valuations, fam, {X: lang.names(self.f[lang.mask(X)]) for X in fam})


def classical(language) -> Consequence:
    lang = _lang(language)
    return Consequence(lang, list(range(1 << lang.size)))


def from_structure(structure: Structure, language) -> Consequence:
    lang = _lang(language)
    if set(structure.carrier) != set(lang.valuations):
        raise CarrierMismatch(
            f"structure carrier {sorted(structure.carrier)} is not the valuation set {list(lang.valuations)}")
    to_s = [structure.mask([v]) for v in lang.valuations]
    back = {structure.mask([v]): 1 << k for k, v in enumerate(lang.valuations)}
    f = []
    for X in range(1 << lang.size):
        sm = 0
        for k in range(lang.size):
            if X >> k & 1:
                sm |= to_s[k]
        m = mu_mask(structure, sm)
        out = 0
        for bit, lb in back.items():
            if m & bit:
                out |= lb
        f.append(out)
    return Consequence(lang, f)


def from_table(table: MuTable, language) -> Consequence:
    lang = _lang(language)
    if set(table.universe) != set(lang.valuations):
        raise CarrierMismatch(f"table universe {list(table.universe)} is not the valuation set")
    f = []
    for X in range(1 << lang.size):
        key = lang.names(X)
        if key not in table:
            raise CarrierMismatch(f"table has no value for {sorted(key)}")
        f.append(lang.mask(table(key)))
    return Consequence(lang, f)


def as_consequence(obj, language) -> Consequence:
    if isinstance(obj, Consequence):
        return obj
    if isinstance(obj, Structure):
        return from_structure(obj, language)
    if isinstance(obj, MuTable):
        return from_table(obj, language)
    raise TypeError(f"cannot read a consequence relation from {type(obj).__name__}")


def consequence(source, language, theory) -> Theory:
    """T-bar-bar = Th(mu(M(T))) for a structure, a table or a Consequence."""
    return as_consequence(source, language).consequences(theory)


def mu_from_logic(oracle, language) -> MuTable:
    """Tabulate f(M(T)) := M(T-bar-bar).

    ``oracle`` is a Consequence or a callable ``entails(theory, formula)``.
    Each model set is presented by two syntactically different theories
    so that an (LLE) failure is caught, and the entailed formulas must form
    a classically closed set (CCL).
    """
    lang = _lang(language)
    if isinstance(oracle, Consequence):
        return oracle.table()
    n_classes = 1 << lang.size
    formulas = [lang.dnf(phi) for phi in range(n_classes)]
    th, inv = lang.th_table, lang.th_inverse
    f = []
    for X in range(n_classes):
        seen = None
        for pres in ((lang.dnf(X),), (lang.cnf(X), TOP)):
            s = 0
            for phi in range(n_classes):
                if oracle(pres, formulas[phi]):
                    s |= 1 << phi
            if s not in inv:
                raise OracleInconsistent(
                    f"consequences of {pres[0]} are not classically closed (CCL)")
            if seen is not None and s != seen:
                raise OracleInconsistent(f"equivalent theories for {sorted(lang.names(X))} disagree (LLE)")
            seen = s
        f.append(inv[seen])
    return Consequence(lang, f).table()


# ---------------------------------------------------------------- rules


def _bits(s: int):
    while s:
        low = s & -s
        yield low.bit_length() - 1
        s ^= low


class _RuleContext:
    """Closed theories of an oracle as formula-class sets."""

    def __init__(self, c: Consequence):
        self.lang = c.language
        self.f = c.f
        self.th = self.lang.th_table
        self.inv = self.lang.th_inverse
        self.n_classes = 1 << self.lang.size
        self.bottom = 1 << 0          # the class of F

    def cl(self, X: int) -> int:
        return self.th[X]

    def nm(self, X: int) -> int:
        return self.th[self.f[X]]

    def models(self, S: int) -> int:
        m = self.inv.get(S)
        if m is not None:
            return m
        m = self.lang.full
        for phi in _bits(S):
            m &= phi
        return m

    def closure(self, S: int) -> int:
        return self.th[self.models(S)]

    def con(self, S: int) -> bool:
        return self.models(S) != 0

    def union(self, S: int, S2: int) -> int:
        return self.closure(S | S2)

    @staticmethod
    def sub(S: int, S2: int) -> bool:
        return S & ~S2 == 0

    def vee(self, X: int, Y: int) -> int:
        # {phi | phi' : phi in T, phi' in T'} has models M(T) u M(T')
        return X | Y

    def contains(self, S: int, phi: int) -> bool:
        return bool(S >> phi & 1)


def _r_and(c: _RuleContext):
    for X in range(c.n_classes):
        S = c.nm(X)
        members = list(_bits(S))
        for i, a in enumerate(members):
            for b in members[i:]:
                if not c.contains(S, a & b):
                    return {"T": X, "psi": a, "psi'": b}
    return None


def _r_rw(c: _RuleContext):
    for X in range(c.n_classes):
        S = c.nm(X)
        for a in _bits(S):
            for b in range(c.n_classes):
                if a & ~b == 0 and not c.contains(S, b):
                    return {"T": X, "psi": a, "psi'": b}
    return None


def _r_ccl(c: _RuleContext):
    for X in range(c.n_classes):
        S = c.nm(X)
        if c.closure(S) != S:
            return {"T": X}
    return None


def _r_lle(c: _RuleContext):
    # theories are read through their model sets, so equivalent ones coincide
    return None


def _r_sc(c: _RuleContext):
    for X in range(c.n_classes):
        if not c.sub(c.cl(X), c.nm(X)):
            return {"T": X}
    return None


def _r_ref(c: _RuleContext):
    for X in range(c.n_classes):
        for a in range(c.n_classes):
            if not c.contains(c.nm(X & a), a):
                return {"T": X, "alpha": a}
    return None


def _r_cp(c: _RuleContext):
    for X in range(c.n_classes):
        if c.contains(c.nm(X), 0) and not c.contains(c.cl(X), 0):
            return {"T": X}
    return None


def _pairs(c: _RuleContext):
    for X in range(c.n_classes):
        for Y in range(c.n_classes):
            yield X, Y


def _r_or(c: _RuleContext):
    for X, Y in _pairs(c):
        if not c.sub(c.nm(X) & c.nm(Y), c.nm(c.vee(X, Y))):
            return {"T": X, "T'": Y}
    return None


def _r_wor(c: _RuleContext):
    for X, Y in _pairs(c):
        if not c.sub(c.nm(X) & c.cl(Y), c.nm(c.vee(X, Y))):
            return {"T": X, "T'": Y}
    return None


def _r_disjor(c: _RuleContext):
    for X, Y in _pairs(c):
        if c.con(c.cl(X) | c.cl(Y)):
            continue
        if not c.sub(c.nm(X) & c.nm(Y), c.nm(c.vee(X, Y))):
            return {"T": X, "T'": Y}
    return None


def _r_pr(c: _RuleContext):
    for X, Y in _pairs(c):
        if not c.sub(c.nm(X & Y), c.union(c.nm(X), c.cl(Y))):
            return {"T": X, "T'": Y}
    return None


def _cautious(c: _RuleContext, X: int, Y: int) -> bool:
    # T subset of cl(T') subset of T-bar-bar
    return c.sub(c.cl(X), c.cl(Y)) and c.sub(c.cl(Y), c.nm(X))


def _r_cut(c: _RuleContext):
    for X, Y in _pairs(c):
        if _cautious(c, X, Y) and not c.sub(c.nm(Y), c.nm(X)):
            return {"T": X, "T'": Y}
    return None


def _r_cm(c: _RuleContext):
    for X, Y in _pairs(c):
        if _cautious(c, X, Y) and not c.sub(c.nm(X), c.nm(Y)):
            return {"T": X, "T'": Y}
    return None


def _r_cum(c: _RuleContext):
    for X, Y in _pairs(c):
        if _cautious(c, X, Y) and c.nm(X) != c.nm(Y):
            return {"T": X, "T'": Y}
    return None


def _r_resm(c: _RuleContext):
    for X in range(c.n_classes):
        S = c.nm(X)
        for a in _bits(S):
            for b in _bits(S):
                if not c.contains(c.nm(X & a), b):
                    return {"T": X, "alpha": a, "beta": b}
    return None


def _r_subset_supset(c: _RuleContext):
    for X, Y in _pairs(c):
        if c.sub(c.cl(X), c.nm(Y)) and c.sub(c.cl(Y), c.nm(X)) and c.nm(X) != c.nm(Y):
            return {"T": X, "T'": Y}
    return None


def _rat_premise(c: _RuleContext, X: int, Y: int) -> bool:
    # Con(T u T'-bar-bar) and T |- T'
    return c.con(c.cl(X) | c.nm(Y)) and c.sub(c.cl(Y), c.cl(X))


def _r_ratm(c: _RuleContext):
    for X, Y in _pairs(c):
        if _rat_premise(c, X, Y) and not c.sub(c.union(c.nm(Y), c.cl(X)), c.nm(X)):
            return {"T": X, "T'": Y}
    return None


def _r_ratm_eq(c: _RuleContext):
    for X, Y in _pairs(c):
        if _rat_premise(c, X, Y) and c.union(c.nm(Y), c.cl(X)) != c.nm(X):
            return {"T": X, "T'": Y}
    return None


def _r_log_eq_prime(c: _RuleContext):
    for X, Y in _pairs(c):
        if c.con(c.nm(Y) | c.cl(X)) and c.nm(X & Y) != c.union(c.nm(Y), c.cl(X)):
            return {"T": X, "T'": Y}
    return None


def _r_log_par(c: _RuleContext):
    for X, Y in _pairs(c):
        v = c.nm(c.vee(X, Y))
        if v not in (c.nm(X), c.nm(Y), c.nm(X) & c.nm(Y)):
            return {"T": X, "T'": Y}
    return None


def _cup_premise(c: _RuleContext, X: int, Y: int) -> bool:
    return c.con(c.nm(Y) | c.cl(X)) and not c.con(c.nm(Y) | c.nm(X))


def _r_log_cup(c: _RuleContext):
    for X, Y in _pairs(c):
        if _cup_premise(c, X, Y) and c.con(c.nm(c.vee(X, Y)) | c.cl(Y)):
            return {"T": X, "T'": Y}
    return None


def _r_log_cup_prime(c: _RuleContext):
    for X, Y in _pairs(c):
        if _cup_premise(c, X, Y) and c.nm(c.vee(X, Y)) != c.nm(X):
            return {"T": X, "T'": Y}
    return None


RULES: dict[str, tuple[str, Callable]] = {
    "AND": ("(AND)", _r_and),
    "OR": ("(OR)", _r_or),
    "wOR": ("(wOR)", _r_wor),
    "disjOR": ("(disjOR)", _r_disjor),
    "LLE": ("(LLE)", _r_lle),
    "RW": ("(RW)", _r_rw),
    "CCL": ("(CCL)", _r_ccl),
    "SC": ("(SC)", _r_sc),
    "REF": ("(REF)", _r_ref),
    "CP": ("(CP)", _r_cp),
    "PR": ("(PR)", _r_pr),
    "CUT": ("(CUT)", _r_cut),
    "CM": ("(CM)", _r_cm),
    "ResM": ("(ResM)", _r_resm),
    "CUM": ("(CUM)", _r_cum),
    "subset_supset": ("(⊆⊇)", _r_subset_supset),
    "RatM": ("(RatM)", _r_ratm),
    "RatM_eq": ("(RatM=)", _r_ratm_eq),
    "Log_eq_prime": ("(Log=′)", _r_log_eq_prime),
    "Log_par": ("(Log∥)", _r_log_par),
    "Log_cup": ("(Log∪)", _r_log_cup),
    "Log_cup_prime": ("(Log∪′)", _r_log_cup_prime),
}

SYSTEM_P = ("AND", "OR", "LLE", "RW", "SC", "CP", "CM", "CUM")

_RULE_ALIASES = {
    "⊆⊇": "subset_supset", "subsetsupset": "subset_supset", "ratm=": "RatM_eq", "log='": "Log_eq_prime",
    "log=′": "Log_eq_prime", "log∥": "Log_par", "logpar": "Log_par", "log∪": "Log_cup", "logcup": "Log_cup",
    "log∪'": "Log_cup_prime", "log∪′": "Log_cup_prime", "logcup'": "Log_cup_prime",
}


def rule_id(name: str) -> str:
    if name in RULES:
        return name
    key = name.strip().strip("()").replace(" ", "")
    for k in RULES:
        if k.lower() == key.lower():
            return k
    k = _RULE_ALIASES.get(key.lower())
    if k is None:
        raise UnknownRule(f"unknown rule {name!r}")
    return k


def _witness_text(lang: Language, w: dict | None) -> dict | None:
    if w is None:
        return None
    return {k: str(lang.dnf(v)) for k, v in w.items()}


def check_rule(oracle, rule: str, language=None) -> PropertyVerdict:
    """Check a rule schema over every theory (model set) of the language."""
    rid = rule_id(rule)
    if not isinstance(oracle, Consequence):
        if language is None:
            raise TypeError("a language is needed to read this oracle")
        oracle = as_consequence(oracle, language)
    ctx = _RuleContext(oracle)
    w = RULES[rid][1](ctx)
    return PropertyVerdict(RULES[rid][0], w is None, _witness_text(oracle.language, w), 0)


def check_rules(oracle, rules: Iterable[str] = tuple(RULES), language=None) -> list[PropertyVerdict]:
    if not isinstance(oracle, Consequence):
        oracle = as_consequence(oracle, language)
    return [check_rule(oracle, r) for r in rules]


# ---------------------------------------------------------------- rule <-> property rows


@dataclass(frozen=True)
class AlgLogRow:
    row: str
    rule: str
    prop: str
    forward_needs: tuple = ()     # extra properties of f for rule => property
    backward_needs: tuple = ()    # extra properties of f for property => rule


ALG_LOG_ROWS: tuple[AlgLogRow, ...] = (
    AlgLogRow("1", "OR", "mu_OR"),
    AlgLogRow("2", "disjOR", "mu_disjOR"),
    AlgLogRow("3", "wOR", "mu_wOR"),
    AlgLogRow("4", "SC", "mu_subset"),
    AlgLogRow("5", "CP", "mu_empty"),
    AlgLogRow("6", "PR", "mu_PR", backward_needs=("mu_subset",)),
    AlgLogRow("6.5", "PR", "mu_PR_prime"),
    AlgLogRow("7", "CUT", "mu_CUT"),
    AlgLogRow("8", "CM", "mu_CM"),
    AlgLogRow("9", "ResM", "mu_ResM"),
    AlgLogRow("10", "subset_supset", "mu_subset_supset"),
    AlgLogRow("11", "CUM", "mu_CUM"),
    AlgLogRow("12", "RatM", "mu_RatM"),
    AlgLogRow("13", "RatM_eq", "mu_eq"),
    AlgLogRow("14", "Log_eq_prime", "mu_eq_prime"),
    AlgLogRow("15", "Log_par", "mu_par"),
    AlgLogRow("16", "Log_cup", "mu_cup", forward_needs=("mu_subset", "mu_eq")),
    AlgLogRow("17", "Log_cup_prime", "mu_cup_prime", forward_needs=("mu_subset", "mu_eq")),
)


def alg_log_row(row: str) -> AlgLogRow:
    for r in ALG_LOG_ROWS:
        if r.row == str(row):
            return r
    raise UnknownRule(f"no rule/property row {row!r}")


def check_alg_log(oracle, row: str, language=None,
                  rule_cache: dict | None = None, prop_cache: dict | None = None) -> dict:
    """Compare a rule verdict with its property verdict for one oracle.

    ``consistent`` is False exactly when a direction whose side conditions
    hold is contradicted.
    """
    r = alg_log_row(row)
    c = oracle if isinstance(oracle, Consequence) else as_consequence(oracle, language)
    rule_cache = {} if rule_cache is None else rule_cache
    prop_cache = {} if prop_cache is None else prop_cache
    table = None

    def prop(p: str) -> bool:
        nonlocal table
        if p not in prop_cache:
            if table is None:
                table = c.table()
            prop_cache[p] = check_property(table, p).holds
        return prop_cache[p]

    if r.rule not in rule_cache:
        rule_cache[r.rule] = check_rule(c, r.rule).holds
    rule_holds = rule_cache[r.rule]
    prop_holds = prop(r.prop)
    forward_ok = not (rule_holds and all(prop(p) for p in r.forward_needs)) or prop_holds
    backward_ok = not (prop_holds and all(prop(p) for p in r.backward_needs)) or rule_holds
    return {"row": r.row, "rule": RULES[r.rule][0], "property": r.prop, "rule_holds": rule_holds,
            "property_holds": prop_holds, "consistent": forward_ok and backward_ok}


# ---------------------------------------------------------------- small helpers


def embed_table(table: MuTable, language, mapping: Mapping[str, str]) -> MuTable:
    """Lift a table on a few points to all model sets of a language.

    ``mapping`` sends table points to distinct valuations.  A model set X is
    read through its mapped part; valuations outside the image stay put.
    """
    lang = _lang(language)
    image = {mapping[p] for p in table.universe}
    inv = {mapping[p]: p for p in table.universe}
    fam = powerset(lang.valuations)
    vals = {}
    for X in fam:
        inner = frozenset(inv[v] for v in X if v in image)
        if inner not in table:
            raise CarrierMismatch(f"table has no value for {sorted(inner)}")
        vals[X] = frozenset(mapping[p] for p in table(inner)) | (X - image)
    return MuTable(lang.valuations, fam, vals)
