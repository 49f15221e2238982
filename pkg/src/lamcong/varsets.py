"""Finite and cofinite sets of variables, and the non-free / non-bound sets.

The set of variables is infinite, so "every variable except these" needs its
own representation.  Both ``nonfree`` and ``nonbound`` always produce such
cofinite sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .terms import Abs, App, Term, Var, VarId, interner

__all__ = [
    "Polarity",
    "CofiniteVarSet",
    "InternalError",
    "UNIVERSE",
    "EMPTY",
    "finite",
    "cofinite",
    "nonfree",
    "nonbound",
    "free_vars",
    "bound_vars",
    "proviso_beta",
    "pick_fresh",
]


class InternalError(RuntimeError):
    pass


class Polarity(Enum):
    FINITE = "finite"
    COFINITE = "cofinite"


@dataclass(frozen=True, slots=True)
class CofiniteVarSet:
    polarity: Polarity
    basis: frozenset[VarId]

    @property
    def is_cofinite(self) -> bool:
        return self.polarity is Polarity.COFINITE

    @property
    def is_universe(self) -> bool:
        return self.is_cofinite and not self.basis

    @property
    def is_empty(self) -> bool:
        return not self.is_cofinite and not self.basis

    def contains(self, v: VarId) -> bool:
        return (v in self.basis) != self.is_cofinite

    __contains__ = contains

    def complement(self) -> CofiniteVarSet:
        other = Polarity.FINITE if self.is_cofinite else Polarity.COFINITE
        return CofiniteVarSet(other, self.basis)

    def intersect(self, other: CofiniteVarSet) -> CofiniteVarSet:
        match (self.is_cofinite, other.is_cofinite):
            case (True, True):
                return cofinite(self.basis | other.basis)
            case (True, False):
                return finite(other.basis - self.basis)
            case (False, True):
                return finite(self.basis - other.basis)
            case _:
                return finite(self.basis & other.basis)

    def union(self, other: CofiniteVarSet) -> CofiniteVarSet:
        return self.complement().intersect(other.complement()).complement()

    def difference(self, other: CofiniteVarSet) -> CofiniteVarSet:
        return self.intersect(other.complement())

    def add(self, v: VarId) -> CofiniteVarSet:
        if self.is_cofinite:
            return cofinite(self.basis - {v})
        return finite(self.basis | {v})

    def remove(self, v: VarId) -> CofiniteVarSet:
        if self.is_cofinite:
            return cofinite(self.basis | {v})
        return finite(self.basis - {v})

    __and__ = intersect
    __or__ = union
    __sub__ = difference

    def sorted_basis(self) -> list[VarId]:
        return sorted(self.basis)

    def render(self) -> str:
        names = ",".join(v.name for v in self.sorted_basis())
        if self.is_cofinite:
            return "V" if not self.basis else f"V\\{{{names}}}"
        return f"{{{names}}}"

    def __repr__(self) -> str:
        return self.render()


def finite(vs: Iterable[VarId] = ()) -> CofiniteVarSet:
    return CofiniteVarSet(Polarity.FINITE, frozenset(vs))


def cofinite(excluded: Iterable[VarId] = ()) -> CofiniteVarSet:
    return CofiniteVarSet(Polarity.COFINITE, frozenset(excluded))


UNIVERSE = cofinite()
EMPTY = finite()


def free_vars(t: Term) -> frozenset[VarId]:
    match t:
        case Var(v):
            return frozenset((v,))
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Abs(x, body):
            return free_vars(body) - {x}
    raise TypeError(t)


def bound_vars(t: Term) -> frozenset[VarId]:
    match t:
        case Var():
            return frozenset()
        case App(f, a):
            return bound_vars(f) | bound_vars(a)
        case Abs(x, body):
            return bound_vars(body) | {x}
    raise TypeError(t)


def nonfree(t: Term) -> CofiniteVarSet:
    """Variables with no free occurrence in ``t``."""
    match t:
        case Var(v):
            return cofinite((v,))
        case App(f, a):
            return nonfree(f).intersect(nonfree(a))
        case Abs(x, body):
            return nonfree(body).add(x)
    raise TypeError(t)


def nonbound(t: Term) -> CofiniteVarSet:
    """Variables never used as a binder in ``t``."""
    match t:
        case Var():
            return UNIVERSE
        case App(f, a):
            return nonbound(f).intersect(nonbound(a))
        case Abs(x, body):
            return nonbound(body).remove(x)
    raise TypeError(t)


def proviso_beta(a: Term, d: Term) -> bool:
    """No binder of ``a`` occurs free in ``d``."""
    return nonbound(a).union(nonfree(d)).is_universe


def pick_fresh(avoid: CofiniteVarSet = EMPTY, want_in: Iterable[CofiniteVarSet] = ()) -> VarId:
    """Least-index variable lying in every set of ``want_in`` and outside ``avoid``.

    New variables are interned when every existing one is excluded.
    """
    target = UNIVERSE
    for s in want_in:
        target = target.intersect(s)
    target = target.difference(avoid)
    if not target.is_cofinite:
        if not target.basis:
            raise InternalError("no variable satisfies the freshness constraints")
        return min(target.basis)
    pool = interner()
    for v in pool:
        if v not in target.basis:
            return v
    while True:
        v = pool.new_variable()
        if v not in target.basis:
            return v
