"""The graph model over formulas, with a membership oracle.

Formulas are atoms (variables) and sequents ``F |- m`` where ``F`` is a finite
set of formulas.  A term's interpretation under an environment is a set of
formulas:

* a variable denotes whatever the environment assigns to it;
* ``A B`` holds ``m`` when some finite ``F`` inside the meaning of ``B`` has
  ``F |- m`` inside the meaning of ``A``;
* ``λx.B`` holds the atom ``x`` and every ``F |- m`` with ``m`` in the meaning
  of ``B`` once ``x`` is set to ``F``.

Membership in an application quantifies over finite subsets of an infinite
set.  Because the interpretation is monotone and compact, applying ``λx.C``
to ``Q`` can instead bind ``x`` to the whole (lazily computed) meaning of
``Q``.  The oracle therefore runs a head-reduction machine whose environment
holds either explicit formula sets or suspended arguments.  Its verdicts are
exact.  ``UNKNOWN`` appears only when the step budget runs out, which happens
on divergent heads such as ``(λx.x x)(λx.x x)``.
"""

from __future__ import annotations

import functools
import itertools
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .terms import Abs, App, Term, Var, VarId, intern, print_term, variables

__all__ = [
    "Formula",
    "Atom",
    "Seq",
    "Environment",
    "Membership",
    "SearchBudget",
    "Enumeration",
    "Separated",
    "NotSeparated",
    "SoundnessReport",
    "Discrepancy",
    "FormulaSyntaxError",
    "rank",
    "parse_formula",
    "format_formula",
    "formula_variables",
    "update",
    "member",
    "universe",
    "enumerate_interpretation",
    "refute",
    "check_beta_soundness",
    "beta_instances",
    "BETA_RULES",
    "random_app_free_term",
    "random_environment",
    "load_environment",
    "parse_environment",
]


# --- formulas ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Atom:
    v: VarId

    def __repr__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, slots=True)
class Seq:
    antecedent: frozenset
    consequent: Formula

    def __repr__(self) -> str:
        return format_formula(self)


Formula = Atom | Seq


def rank(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    return 1 + max([rank(f.consequent), *(rank(g) for g in f.antecedent)])


def _sort_key(f: Formula) -> tuple:
    return (rank(f), format_formula(f))


def format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.v.name
    inner = ",".join(sorted(format_formula(g) for g in f.antecedent))
    return f"{{{inner}}} |- {format_formula(f.consequent)}"


def formula_variables(f: Formula) -> set[VarId]:
    if isinstance(f, Atom):
        return {f.v}
    out = formula_variables(f.consequent)
    for g in f.antecedent:
        out |= formula_variables(g)
    return out


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def parse_formula(text: str) -> Formula:
    """Parse ``x`` or ``{f1,...,fn} |- f``; ``|-`` associates to the right."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def formula() -> Formula:
        nonlocal pos
        skip()
        if pos >= len(text):
            raise FormulaSyntaxError("expected a formula", pos)
        c = text[pos]
        if c == "(":
            pos += 1
            f = formula()
            skip()
            if not text.startswith(")", pos):
                raise FormulaSyntaxError("expected ')'", pos)
            pos += 1
            return f
        if c == "{":
            pos += 1
            items: list[Formula] = []
            skip()
            if text.startswith("}", pos):
                pos += 1
            else:
                while True:
                    items.append(formula())
                    skip()
                    if text.startswith(",", pos):
                        pos += 1
                    elif text.startswith("}", pos):
                        pos += 1
                        break
                    else:
                        raise FormulaSyntaxError("expected ',' or '}'", pos)
            skip()
            if not text.startswith("|-", pos):
                raise FormulaSyntaxError("expected '|-'", pos)
            pos += 2
            return Seq(frozenset(items), formula())
        start = pos
        while pos < len(text) and (text[pos].isascii() and (text[pos].isalnum() or text[pos] in "_'")):
            pos += 1
        if start == pos:
            raise FormulaSyntaxError(f"unexpected character {c!r}", pos)
        try:
            return Atom(intern(text[start:pos]))
        except ValueError:
            raise FormulaSyntaxError(f"not a variable name: {text[start:pos]!r}", start) from None

    f = formula()
    skip()
    if pos != len(text):
        raise FormulaSyntaxError("trailing input", pos)
    return f


# --- environments -----------------------------------------------------------


class Environment(Mapping[VarId, frozenset]):
    """Finite-support map from variables to finite formula sets, empty elsewhere."""

    __slots__ = ("_map", "_hash")

    def __init__(self, entries: Mapping[VarId, Iterable[Formula]] | None = None):
        m = {}
        for v, fs in (entries or {}).items():
            fs = frozenset(fs)
            if fs:
                m[v] = fs
        self._map = m
        self._hash = None

    def __call__(self, v: VarId) -> frozenset:
        return self._map.get(v, frozenset())

    def __getitem__(self, v: VarId) -> frozenset:
        return self._map.get(v, frozenset())

    def __contains__(self, v: object) -> bool:
        return v in self._map

    def __iter__(self) -> Iterator[VarId]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    @property
    def support(self) -> frozenset[VarId]:
        return frozenset(self._map)

    def update(self, x: VarId, formulas: Iterable[Formula]) -> Environment:
        new = dict(self._map)
        new[x] = frozenset(formulas)
        return Environment(new)

    def variables(self) -> set[VarId]:
        out = set(self._map)
        for fs in self._map.values():
            for f in fs:
                out |= formula_variables(f)
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Environment):
            return self._map == other._map
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def to_json(self) -> dict[str, list[str]]:
        return {
            v.name: sorted(format_formula(f) for f in fs)
            for v, fs in sorted(self._map.items())
        }

    def __repr__(self) -> str:
        parts = []
        for name, fs in self.to_json().items():
            parts.append(f"{name}: {{{', '.join(fs)}}}")
        return "{" + "; ".join(parts) + "}"


def update(sigma: Environment, x: VarId, formulas: Iterable[Formula]) -> Environment:
    return sigma.update(x, formulas)


def parse_environment(text: str) -> Environment:
    """JSON object from variable names to lists of formula strings."""
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("an environment is a JSON object")
    entries = {}
    for name, items in data.items():
        if not isinstance(items, list):
            raise ValueError(f"the value for {name} must be a list of formulas")
        entries[intern(name)] = [parse_formula(s) for s in items]
    return Environment(entries)


def load_environment(path: str | Path) -> Environment:
    return parse_environment(Path(path).read_text(encoding="utf-8"))


# --- membership -------------------------------------------------------------


class Membership(Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    UNKNOWN = "Unknown"

    @property
    def definitive(self) -> bool:
        return self is not Membership.UNKNOWN

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SearchBudget:
    """``width`` caps antecedent size in enumerated universes; ``steps`` caps head reductions."""

    width: int = 2
    steps: int = 10_000


class _OutOfSteps(Exception):
    pass


class _Counter:
    __slots__ = ("left",)

    def __init__(self, steps: int):
        self.left = steps

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise _OutOfSteps


@dataclass(frozen=True, slots=True)
class _Closure:
    term: Term
    frame: tuple | None


# a frame is (variable, explicit set or _Closure, parent frame) or None;
# a stack is (closure, rest) or None


def _lookup(frame, sigma: Environment, v: VarId):
    while frame is not None:
        if frame[0] == v:
            return frame[1]
        frame = frame[2]
    return sigma(v)


def _run(f: Formula, term: Term, frame, stack, sigma: Environment, counter: _Counter) -> Membership:
    while True:
        if isinstance(term, App):
            stack = (_Closure(term.arg, frame), stack)
            term = term.fun
        elif isinstance(term, Abs):
            if stack is not None:
                closure, stack = stack
                frame = (term.binder, closure, frame)
                term = term.body
                counter.tick()
            elif isinstance(f, Atom):
                return Membership.MEMBER if f.v == term.binder else Membership.NON_MEMBER
            else:
                frame = (term.binder, f.antecedent, frame)
                f = f.consequent
                term = term.body
        else:
            value = _lookup(frame, sigma, term.v)
            if isinstance(value, _Closure):
                term, frame = value.term, value.frame
            else:
                return _explicit_head(f, value, stack, sigma, counter)


def _explicit_head(f: Formula, formulas: frozenset, stack, sigma: Environment, counter: _Counter) -> Membership:
    """``f`` is in ``h N1 .. Nn`` with ``h`` denoting ``formulas``."""
    args = []
    while stack is not None:
        closure, stack = stack
        args.append(closure)
    unknown = False
    for g in formulas:
        antecedents = []
        for _ in args:
            if not isinstance(g, Seq):
                break
            antecedents.append(g.antecedent)
            g = g.consequent
        else:
            if g != f:
                continue
            verdict = Membership.MEMBER
            for closure, needed in zip(args, antecedents):
                for h in needed:
                    r = _run(h, closure.term, closure.frame, None, sigma, counter)
                    if r is Membership.NON_MEMBER:
                        verdict = r
                        break
                    if r is Membership.UNKNOWN:
                        verdict = r
                if verdict is Membership.NON_MEMBER:
                    break
            if verdict is Membership.MEMBER:
                return verdict
            if verdict is Membership.UNKNOWN:
                unknown = True
    return Membership.UNKNOWN if unknown else Membership.NON_MEMBER


def member(f: Formula, term: Term, sigma: Environment | None = None, budget: SearchBudget | None = None) -> Membership:
    """Is ``f`` in the interpretation of ``term`` under ``sigma``?"""
    sigma = sigma if sigma is not None else Environment()
    budget = budget or SearchBudget()
    try:
        return _run(f, term, None, None, sigma, _Counter(budget.steps))
    except _OutOfSteps:
        return Membership.UNKNOWN


# --- enumeration ------------------------------------------------------------


def universe(alphabet: Iterable[VarId], rank_bound: int, width: int = 2) -> tuple[Formula, ...]:
    """Every formula over ``alphabet`` of rank at most ``rank_bound`` whose antecedents have at most ``width`` members.

    Sorted by rank, then by rendering.
    """
    return _universe(frozenset(alphabet), rank_bound, width)


@functools.lru_cache(maxsize=64)
def _universe(alphabet: frozenset, rank_bound: int, width: int) -> tuple[Formula, ...]:
    atoms = [Atom(v) for v in sorted(alphabet)]
    level: list[Formula] = list(atoms)
    for _ in range(rank_bound - 1):
        antecedents = [
            frozenset(c) for k in range(width + 1) for c in itertools.combinations(level, k)
        ]
        level = atoms + [Seq(a, m) for a in antecedents for m in level]
    return tuple(sorted(set(level), key=_sort_key))


@dataclass(frozen=True)
class Enumeration:
    formulas: frozenset
    exact: bool

    def __iter__(self):
        return iter(sorted(self.formulas, key=_sort_key))

    def __len__(self) -> int:
        return len(self.formulas)


def enumerate_interpretation(
    term: Term,
    sigma: Environment | None = None,
    alphabet: Iterable[VarId] | None = None,
    rank_bound: int = 2,
    budget: SearchBudget | None = None,
    *,
    candidates: Sequence[Formula] | None = None,
) -> Enumeration:
    """Members of the interpretation among the bounded universe."""
    sigma = sigma if sigma is not None else Environment()
    budget = budget or SearchBudget()
    if candidates is None:
        if alphabet is None:
            alphabet = variables(term) | sigma.variables()
        candidates = universe(alphabet, rank_bound, budget.width)
    found = set()
    exact = True
    for f in candidates:
        r = member(f, term, sigma, budget)
        if r is Membership.MEMBER:
            found.add(f)
        elif r is Membership.UNKNOWN:
            exact = False
    return Enumeration(frozenset(found), exact)


# --- separation -------------------------------------------------------------


@dataclass(frozen=True)
class Separated:
    formula: Formula
    environment: Environment
    left: Membership
    right: Membership

    def __str__(self) -> str:
        return (
            f"Separated: {format_formula(self.formula)} is {self.left} on the left and "
            f"{self.right} on the right under {self.environment!r}"
        )


@dataclass(frozen=True)
class NotSeparated:
    checked: int
    exact: bool

    def __str__(self) -> str:
        return f"NotSeparated ({self.checked} checks, {'exact' if self.exact else 'some unknown'})"


def refute(
    a: Term,
    b: Term,
    samples: Sequence[Environment] = (),
    budget: SearchBudget | None = None,
    *,
    rank_bound: int = 2,
    alphabet: Iterable[VarId] | None = None,
) -> Separated | NotSeparated:
    """Look for a formula and environment on which the two interpretations definitively differ."""
    budget = budget or SearchBudget()
    samples = list(samples) or [Environment()]
    exact = True
    checked = 0
    for sigma in samples:
        alpha = set(alphabet) if alphabet is not None else variables(a) | variables(b) | sigma.variables()
        for f in universe(alpha, rank_bound, budget.width):
            left = member(f, a, sigma, budget)
            right = member(f, b, sigma, budget)
            checked += 1
            if left.definitive and right.definitive:
                if left is not right:
                    return Separated(f, sigma, left, right)
            else:
                exact = False
    return NotSeparated(checked, exact)


# --- soundness sampling -----------------------------------------------------


BETA_RULES = ("beta1", "beta2", "beta3", "beta4", "beta5")


def random_app_free_term(rng: random.Random, alphabet: Sequence[VarId], max_binders: int = 2) -> Term:
    """``λx1 .. λxk.v`` with ``k`` at most ``max_binders``."""
    binders = [rng.choice(alphabet) for _ in range(rng.randint(0, max_binders))]
    t: Term = Var(rng.choice(alphabet))
    for x in reversed(binders):
        t = Abs(x, t)
    return t


def beta_instances(rule: str, count: int, alphabet: Sequence[VarId], rng: random.Random) -> list[tuple[Term, Term]]:
    """Random (lhs, rhs) instances of a beta condition over application-free parts.

    For ``beta5`` the premise is discharged by requiring ``y`` not free in ``D``.
    """
    from .varsets import free_vars

    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise ValueError(f"cannot generate {rule} instances over {alphabet}")
        x = rng.choice(alphabet)
        a = random_app_free_term(rng, alphabet)
        b = random_app_free_term(rng, alphabet)
        d = random_app_free_term(rng, alphabet)
        if rule == "beta1":
            out.append((App(Abs(x, Var(x)), d), d))
        elif rule == "beta2":
            y = rng.choice(alphabet)
            if y != x:
                out.append((App(Abs(x, Var(y)), d), Var(y)))
        elif rule == "beta3":
            out.append((App(Abs(x, App(a, b)), d), App(App(Abs(x, a), d), App(Abs(x, b), d))))
        elif rule == "beta4":
            out.append((App(Abs(x, Abs(x, a)), d), Abs(x, a)))
        elif rule == "beta5":
            y = rng.choice(alphabet)
            if y != x and y not in free_vars(d):
                out.append((App(Abs(x, Abs(y, a)), d), Abs(y, App(Abs(x, a), d))))
        else:
            raise ValueError(f"unknown rule {rule!r}")
    return out


def random_environment(
    rng: random.Random, alphabet: Sequence[VarId], max_rank: int = 2, max_size: int = 2, width: int = 2
) -> Environment:
    pool = universe(alphabet, max_rank, width)
    entries = {}
    for v in alphabet:
        entries[v] = rng.sample(pool, rng.randint(0, min(max_size, len(pool))))
    return Environment(entries)


@dataclass(frozen=True)
class Discrepancy:
    lhs: Term
    rhs: Term
    environment: Environment
    formula: Formula
    left: Membership
    right: Membership

    def __str__(self) -> str:
        return (
            f"{print_term(self.lhs)} vs {print_term(self.rhs)} under {self.environment!r}: "
            f"{format_formula(self.formula)} {self.left}/{self.right}"
        )


@dataclass(frozen=True)
class SoundnessReport:
    rule: str
    instances: int
    comparisons: int
    inexact: int
    discrepancies: tuple[Discrepancy, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def __str__(self) -> str:
        return (
            f"{self.rule}: {self.instances} instances, {self.comparisons} comparisons, "
            f"{len(self.discrepancies)} discrepancies, {self.inexact} inexact"
        )


def check_beta_soundness(
    rule: str,
    instances: Sequence[tuple[Term, Term]],
    samples: Sequence[Environment],
    budget: SearchBudget | None = None,
    *,
    rank_bound: int = 3,
    alphabet: Iterable[VarId] | None = None,
) -> SoundnessReport:
    """Compare the bounded interpretations of each instance's two sides under every sample."""
    budget = budget or SearchBudget()
    found: list[Discrepancy] = []
    comparisons = inexact = 0
    for lhs, rhs in instances:
        for sigma in samples:
            alpha = (
                set(alphabet) if alphabet is not None else variables(lhs) | variables(rhs) | sigma.variables()
            )
            for f in universe(alpha, rank_bound, budget.width):
                left = member(f, lhs, sigma, budget)
                right = member(f, rhs, sigma, budget)
                comparisons += 1
                if not (left.definitive and right.definitive):
                    inexact += 1
                elif left is not right:
                    found.append(Discrepancy(lhs, rhs, sigma, f, left, right))
                    break
    return SoundnessReport(rule, len(instances), comparisons, inexact, tuple(found))
