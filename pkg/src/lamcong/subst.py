"""Substitution: the naive capturing one, the capture-free one, and binder freshening."""

from __future__ import annotations

from .terms import Abs, App, Term, Var, VarId, term_size
from .varsets import CofiniteVarSet, free_vars, nonbound, nonfree, pick_fresh, cofinite

__all__ = ["subst_simple", "subst_capture_free", "freshen", "rename_bound"]


def subst_simple(d: Term, x: VarId, a: Term) -> Term:
    """Replace free ``x`` in ``a`` by ``d`` without renaming; may capture."""
    match a:
        case Var(v):
            return d if v == x else a
        case App(f, arg):
            return App(subst_simple(d, x, f), subst_simple(d, x, arg))
        case Abs(y, body):
            if y == x:
                return a
            return Abs(y, subst_simple(d, x, body))
    raise TypeError(a)


def subst_capture_free(d: Term, x: VarId, a: Term) -> Term:
    """Replace free ``x`` in ``a`` by ``d``, renaming binders that would capture.

    A renamed binder becomes the least-index variable free in neither the
    body nor ``d``.
    """
    match a:
        case Var(v):
            return d if v == x else a
        case App(f, arg):
            return App(subst_capture_free(d, x, f), subst_capture_free(d, x, arg))
        case Abs(y, body):
            if y == x:
                return a
            body_free = free_vars(body)
            if x not in body_free:
                return a
            d_free = free_vars(d)
            if y not in d_free:
                return Abs(y, subst_capture_free(d, x, body))
            z = pick_fresh(want_in=[cofinite(body_free | d_free)])
            renamed = subst_capture_free(Var(z), y, body)
            # the size measure is what makes this recursion well founded
            assert term_size(renamed) == term_size(body), "renaming changed term size"
            return Abs(z, subst_capture_free(d, x, renamed))
    raise TypeError(a)


def freshen(a: Term, d: Term) -> Term:
    """An alpha-variant of ``a`` none of whose binders occurs free in ``d``.

    Works bottom-up: each colliding binder ``y`` of ``λy.M`` is renamed to a
    variable neither free nor bound in ``M`` and not free in ``d``.
    """
    return _freshen(a, nonfree(d))


def _freshen(a: Term, d_nonfree: CofiniteVarSet) -> Term:
    match a:
        case Var():
            return a
        case App(f, arg):
            return App(_freshen(f, d_nonfree), _freshen(arg, d_nonfree))
        case Abs(y, body):
            m = _freshen(body, d_nonfree)
            if y in d_nonfree:
                return Abs(y, m)
            w = pick_fresh(want_in=[nonbound(m), nonfree(m), d_nonfree])
            return Abs(w, subst_simple(Var(w), y, m))
    raise TypeError(a)


def rename_bound(a: Abs, w: VarId) -> Abs:
    """``λy.M`` to ``λw.⟨w/y⟩M``; safe when ``w`` is neither free nor bound in ``M``."""
    return Abs(w, subst_simple(Var(w), a.binder, a.body))
