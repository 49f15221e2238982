"""A library of derivation builders for the calculus of explicit conditions.

Each builder returns a complete :class:`DerivationTree` that the checker
accepts in the mode recorded in :data:`SCRIPTS`.  A builder raises
:class:`BindingError` when its side conditions fail.  Where a step needs a
fresh variable, the builder picks one that occurs nowhere in the inputs.

"``x`` is independent of ``A``" below means a derivation of
``[λx.A]w ∼ A`` for some variable ``w ≠ x`` is at hand.  Such a derivation is
called a witness and ``w`` its witness variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .derivations import (
    BindingError,
    CheckMode,
    DerivationTree,
    alpha,
    alpha_e,
    beta,
    beta1,
    beta2,
    beta3,
    beta4,
    beta5,
    cong_app,
    ell,
    eta,
    eta_e,
    load_derivation,
    refl,
    sym,
    trans,
)
from .terms import Abs, App, Term, TermSyntaxError, Var, VarId, intern, parse_term, variables
from .varsets import finite, free_vars, nonbound, nonfree, pick_fresh, proviso_beta

__all__ = [
    "Script",
    "SCRIPTS",
    "script",
    "fresh_for",
    "identity_renaming",
    "transfer_independence",
    "independence_of_nonfree",
    "independent_of_other_variable",
    "independent_in_application",
    "independent_in_abstraction",
    "beta5_from_independence",
    "independence_from_convertible",
    "independent_but_free",
    "alpha_same_binder",
    "alpha_from_independence",
    "abstraction_extensionality",
    "alpha_gives_equal_applications",
    "eta_from_independence",
    "alpha_in_extensional",
    "term_extensionality",
    "eta_instance_applications",
    "beta_by_conditions",
    "alpha_rule_from_conditions",
    "renaming",
    "beta1_in_theory",
    "beta2_in_theory",
    "beta3_in_theory",
    "beta4_in_theory",
    "beta5_in_theory",
    "eta_e_in_theory",
]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise BindingError(message)


def fresh_for(*terms: Term, avoid: tuple[VarId, ...] = ()) -> VarId:
    """Least variable occurring nowhere in ``terms`` and not in ``avoid``."""
    used = set(avoid)
    for t in terms:
        used |= variables(t)
    return pick_fresh(avoid=finite(used))


def _witness_variable(premise: DerivationTree, x: VarId, a: Term) -> VarId:
    lhs = premise.lhs
    if (
        premise.rhs == a
        and isinstance(lhs, App)
        and isinstance(lhs.fun, Abs)
        and lhs.fun.binder == x
        and lhs.fun.body == a
        and isinstance(lhs.arg, Var)
        and lhs.arg.v != x
    ):
        return lhs.arg.v
    raise BindingError(f"premise {premise.conclusion} is not of the form [λ{x}.A]w ∼ A with w ≠ {x}")


def _independence(x: VarId, a: Term, premise: DerivationTree | None, *avoid: VarId) -> DerivationTree:
    """A witness that ``x`` is independent of ``a``, built from non-freeness if none is given."""
    if premise is not None:
        _witness_variable(premise, x, a)
        return premise
    _require(x not in free_vars(a), f"{x} occurs free in {a}; supply an independence premise")
    return independence_of_nonfree(x, a, fresh_for(a, avoid=(x, *avoid)))


# --- independence -----------------------------------------------------------


def transfer_independence(
    x: VarId, a: Term, z: VarId | None, d: Term, premise: DerivationTree | None = None
) -> DerivationTree:
    """From ``[λx.A]z ∼ A`` derive ``[λx.A]D ∼ A`` for any ``D``."""
    if premise is None:
        _require(z is not None, "either a witness variable or a premise is needed")
        premise = independence_of_nonfree(x, a, z)
    w = _witness_variable(premise, x, a)
    _require(z is None or z == w, f"premise uses witness {w}, not {z}")
    lam_a = Abs(x, a)
    step1 = sym(cong_app(ell(x, premise), refl(d)))
    step2 = beta3(x, lam_a, Var(w), d)
    step3 = cong_app(beta4(x, a, d), beta2(x, w, d))
    return trans(step1, step2, step3, premise)


def independence_of_nonfree(x: VarId, a: Term, z: VarId) -> DerivationTree:
    """``[λx.A]z ∼ A`` when ``x`` has no free occurrence in ``A`` and ``z ≠ x``."""
    _require(x in nonfree(a), f"{x} occurs free in {a}")
    _require(z != x, "the witness variable must differ from the abstracted one")
    match a:
        case Var(y):
            return beta2(x, y, Var(z))
        case App(b, c):
            return trans(
                beta3(x, b, c, Var(z)),
                cong_app(independence_of_nonfree(x, b, z), independence_of_nonfree(x, c, z)),
            )
        case Abs(y, b):
            if y == x:
                return beta4(x, b, Var(z))
            if y == z:
                other = fresh_for(a, avoid=(x, z))
                return transfer_independence(x, a, other, Var(z), independence_of_nonfree(x, a, other))
            head = beta5(x, y, b, Var(z), beta2(y, z, Var(x)))
            return trans(head, ell(y, independence_of_nonfree(x, b, z)))
    raise TypeError(a)


def independent_of_other_variable(x: VarId, y: VarId) -> DerivationTree:
    """``y`` is independent of the variable ``x`` when ``x ≠ y``."""
    _require(x != y, "x and y must differ")
    return beta2(y, x, Var(x))


def independent_in_application(
    y: VarId, b: Term, c: Term, z: VarId, premise_b: DerivationTree, premise_c: DerivationTree
) -> DerivationTree:
    """Independence of ``B`` and of ``C`` gives ``[λy.(B C)]z ∼ B C``."""
    _require(z != y, "z must differ from y")
    left = transfer_independence(y, b, None, Var(z), premise_b)
    right = transfer_independence(y, c, None, Var(z), premise_c)
    return trans(beta3(y, b, c, Var(z)), cong_app(left, right))


def independent_in_abstraction(
    x: VarId, y: VarId, b: Term, z: VarId, premise: DerivationTree | None = None
) -> DerivationTree:
    """``[λy.λx.B]z ∼ λx.B``, from independence of ``y`` in ``B`` unless ``x = y``."""
    _require(z != y, "z must differ from y")
    if x == y:
        return beta4(x, b, Var(z))
    _require(z != x, "z must differ from x")
    premise = _independence(y, b, premise, x, z)
    inner = transfer_independence(y, b, None, Var(z), premise)
    head = beta5(y, x, b, Var(z), beta2(x, z, Var(y)))
    return trans(head, ell(x, inner))


def beta5_from_independence(
    x: VarId, y: VarId, a: Term, d: Term, premise: DerivationTree | None = None
) -> DerivationTree:
    """``[λx.λy.A]D ∼ λy.[λx.A]D`` when ``y`` is independent of ``D``."""
    _require(x != y, "x and y must differ")
    premise = _independence(y, d, premise, x)
    return beta5(x, y, a, d, transfer_independence(y, d, None, Var(x), premise))


def independence_from_convertible(
    x: VarId, a: Term, b: Term, z: VarId, premise: DerivationTree
) -> DerivationTree:
    """``[λx.A]z ∼ A`` from ``B ∼ A`` where ``x`` is not free in ``B``."""
    _require(premise.lhs == b and premise.rhs == a, f"premise must conclude {b} ∼ {a}")
    to_b = sym(cong_app(ell(x, premise), refl(Var(z))))
    return trans(to_b, independence_of_nonfree(x, b, z), premise)


def independent_but_free(x: VarId, y: VarId, z: VarId) -> DerivationTree:
    """``x`` is independent of ``[λx.y]x`` although it occurs free there."""
    _require(x != y, "x and y must differ")
    a = App(Abs(x, Var(y)), Var(x))
    return independence_from_convertible(x, a, Var(y), z, sym(beta2(x, y, Var(x))))


def identity_renaming(x: VarId, y: VarId) -> DerivationTree:
    """``λx.x ∼ λy.y``."""
    _require(x != y, "x and y must differ")
    head = alpha_e(x, y, Var(x), beta2(y, x, Var(x)))
    return trans(head, ell(y, beta1(x, Var(y))))


# --- renaming and extensionality -------------------------------------------


def alpha_same_binder(x: VarId, a: Term, premise: DerivationTree) -> DerivationTree:
    """``λx.A ∼ λx.[λx.A]x`` from ``[λx.A]x ∼ A``."""
    target = App(Abs(x, a), Var(x))
    _require(premise.lhs == target and premise.rhs == a, f"premise must conclude {target} ∼ {a}")
    return sym(ell(x, premise))


def alpha_from_independence(
    x: VarId, y: VarId, a: Term, premise: DerivationTree | None = None
) -> DerivationTree:
    """``λx.A ∼ λy.[λx.A]y`` when ``y`` is independent of ``A``."""
    premise = _independence(y, a, premise, x)
    return alpha_e(x, y, a, transfer_independence(y, a, None, Var(x), premise))


def abstraction_extensionality(
    x: VarId,
    a: Term,
    y: VarId,
    b: Term,
    z: VarId,
    premise: DerivationTree,
    premise_a: DerivationTree | None = None,
    premise_b: DerivationTree | None = None,
) -> DerivationTree:
    """``λx.A ∼ λy.B`` from ``(λx.A) z ∼ (λy.B) z`` with ``z`` independent of both bodies."""
    e, f = Abs(x, a), Abs(y, b)
    _require(
        premise.lhs == App(e, Var(z)) and premise.rhs == App(f, Var(z)),
        f"premise must conclude {App(e, Var(z))} ∼ {App(f, Var(z))}",
    )
    left = alpha_from_independence(x, z, a, premise_a)
    right = alpha_from_independence(y, z, b, premise_b)
    return trans(left, ell(z, premise), sym(right))


def _apply_to(g: Term, z: VarId, d: Term) -> DerivationTree:
    """``[λz.(G z)]D ∼ G D`` when ``z`` is not free in ``G``."""
    w = fresh_for(g, d, avoid=(z,))
    ind = transfer_independence(z, g, None, d, independence_of_nonfree(z, g, w))
    return trans(beta3(z, g, Var(z), d), cong_app(ind, beta1(z, d)))


def alpha_gives_equal_applications(
    x: VarId, y: VarId, a: Term, d: Term, premise: DerivationTree
) -> DerivationTree:
    """``(λx.A) D ∼ (λy.(λx.A) y) D`` from ``[λy.A]x ∼ A``."""
    e = Abs(x, a)
    f = Abs(y, App(e, Var(y)))
    if x == y:
        return cong_app(alpha_same_binder(x, a, premise), refl(d))
    target = App(Abs(y, a), Var(x))
    _require(premise.lhs == target and premise.rhs == a, f"premise must conclude {target} ∼ {a}")
    z = fresh_for(a, d, avoid=(x, y))
    m_to_e = trans(
        beta5(y, x, a, Var(z), beta2(x, z, Var(y))),
        ell(x, transfer_independence(y, a, None, Var(z), premise)),
    )
    fz_to_ez = trans(beta3(y, e, Var(y), Var(z)), cong_app(m_to_e, beta1(y, Var(z))))
    lifted = cong_app(ell(z, sym(fz_to_ez)), refl(d))
    return trans(sym(_apply_to(e, z, d)), lifted, _apply_to(f, z, d))


def eta_from_independence(
    a: Term, y: VarId, x: VarId | None = None, premise: DerivationTree | None = None
) -> DerivationTree:
    """``A ∼ λy.(A y)`` when ``y`` is independent of ``A``; uses an auxiliary ``x ≠ y``."""
    if x is None:
        x = fresh_for(a, avoid=(y,))
    _require(x != y, "the auxiliary variable must differ from y")
    premise = _independence(y, a, premise, x)
    xy = App(Var(x), Var(y))
    d_prime = Abs(x, Abs(y, xy))
    start = sym(beta1(x, a))  # A ∼ [λx.x]A
    expand = cong_app(ell(x, eta_e(y, x)), refl(a))  # ∼ [λx.λy.(x y)]A
    push = beta5_from_independence(x, y, xy, a, premise)  # ∼ λy.[λx.(x y)]A
    body = trans(beta3(x, Var(x), Var(y), a), cong_app(beta1(x, a), beta2(x, y, a)))
    out = trans(start, expand, push, ell(y, body))
    assert expand.rhs == App(d_prime, a)
    return out


def alpha_in_extensional(
    x: VarId, y: VarId, a: Term, premise: DerivationTree | None = None
) -> DerivationTree:
    """``λx.A ∼ λy.[λx.A]y`` from independence of ``y`` in ``A``, without ``alpha_e``."""
    if x == y:
        _require(premise is not None, "with equal variables the premise [λx.A]x ∼ A is required")
        return alpha_same_binder(x, a, premise)
    b = Abs(x, a)
    z = fresh_for(a, avoid=(x, y))
    premise = _independence(y, a, premise, x, z)
    return eta_from_independence(b, y, x, independent_in_abstraction(x, y, a, z, premise))


def term_extensionality(
    a: Term,
    b: Term,
    z: VarId,
    premise: DerivationTree,
    premise_a: DerivationTree | None = None,
    premise_b: DerivationTree | None = None,
) -> DerivationTree:
    """``A ∼ B`` from ``A z ∼ B z`` with ``z`` independent of both."""
    _require(
        premise.lhs == App(a, Var(z)) and premise.rhs == App(b, Var(z)),
        f"premise must conclude {App(a, Var(z))} ∼ {App(b, Var(z))}",
    )
    return trans(
        eta_from_independence(a, z, None, premise_a),
        ell(z, premise),
        sym(eta_from_independence(b, z, None, premise_b)),
    )


def eta_instance_applications(x: VarId, y: VarId, d: Term) -> DerivationTree:
    """``y D ∼ (λx.(y x)) D``."""
    _require(x != y, "x and y must differ")
    expanded = trans(beta3(x, Var(y), Var(x), d), cong_app(beta2(x, y, d), beta1(x, d)))
    return sym(expanded)


# --- relating the two presentations -----------------------------------------


def beta_by_conditions(x: VarId, a: Term, d: Term) -> DerivationTree:
    """``[λx.A]D ∼ ⟨D/x⟩A`` using only the explicit conditions, under the usual proviso."""
    _require(proviso_beta(a, d), f"a binder of {a} occurs free in {d}")
    match a:
        case Var(y):
            return beta1(x, d) if y == x else beta2(x, y, d)
        case App(b, c):
            return trans(beta3(x, b, c, d), cong_app(beta_by_conditions(x, b, d), beta_by_conditions(x, c, d)))
        case Abs(y, b):
            if y == x:
                return beta4(x, b, d)
            return trans(beta5_from_independence(x, y, b, d), ell(y, beta_by_conditions(x, b, d)))
    raise TypeError(a)


def alpha_rule_from_conditions(x: VarId, y: VarId, a: Term) -> DerivationTree:
    """``λx.A ∼ λy.⟨y/x⟩A`` for ``y`` neither free nor bound in ``A``."""
    _require(y in nonfree(a) and y in nonbound(a), f"{y} must be neither free nor bound in {a}")
    return trans(alpha_from_independence(x, y, a), ell(y, beta_by_conditions(x, a, Var(y))))


def renaming(a: Term, d: Term) -> DerivationTree:
    """``G ∼ A`` where ``G`` is the freshened variant of ``A`` for ``D``, by ``alpha`` and congruence."""
    match a:
        case Var():
            return refl(a)
        case App(f, arg):
            return cong_app(renaming(f, d), renaming(arg, d))
        case Abs(y, b):
            inner = renaming(b, d)
            m = inner.lhs
            kept = ell(y, inner)
            d_nonfree = nonfree(d)
            if y in d_nonfree:
                return kept
            w = pick_fresh(want_in=[nonbound(m), nonfree(m), d_nonfree])
            return trans(sym(alpha(y, w, m)), kept)
    raise TypeError(a)


def beta1_in_theory(x: VarId, d: Term) -> DerivationTree:
    """``[λx.x]D ∼ D`` by one ``beta`` step."""
    return beta(x, Var(x), d)


def beta2_in_theory(x: VarId, y: VarId, d: Term) -> DerivationTree:
    """``[λx.y]D ∼ y`` by one ``beta`` step."""
    _require(x != y, "x and y must differ")
    return beta(x, Var(y), d)


def _beta_after_renaming(x: VarId, a: Term, d: Term) -> DerivationTree:
    """``[λx.A]D ∼ ⟨D/x⟩G`` with ``G ∼ A`` free of capture; returns the chain from the redex."""
    ren = renaming(a, d)
    g = ren.lhs
    return trans(cong_app(ell(x, sym(ren)), refl(d)), beta(x, g, d))


def beta3_in_theory(x: VarId, a: Term, b: Term, d: Term) -> DerivationTree:
    """``[λx.(A B)]D ∼ [λx.A]D [λx.B]D``."""
    whole = _beta_after_renaming(x, App(a, b), d)
    left = _beta_after_renaming(x, a, d)
    right = _beta_after_renaming(x, b, d)
    return trans(whole, sym(cong_app(left, right)))


def beta4_in_theory(x: VarId, a: Term, d: Term) -> DerivationTree:
    """``[λx.λx.A]D ∼ λx.A``."""
    whole = Abs(x, a)
    return trans(_beta_after_renaming(x, whole, d), renaming(whole, d))


def beta5_in_theory(
    x: VarId, y: VarId, a: Term, d: Term, premise: DerivationTree | None = None
) -> DerivationTree:
    """``[λx.λy.A]D ∼ λy.[λx.A]D`` for ``y`` not free in ``D``.

    The premise ``[λy.D]x ∼ D`` is then derivable, so it is optional.
    """
    _require(x != y, "x and y must differ")
    _require(y not in free_vars(d), f"{y} occurs free in {d}; only the non-free case is derived")
    if premise is not None:
        target = App(Abs(y, d), Var(x))
        _require(premise.lhs == target and premise.rhs == d, f"premise must conclude {target} ∼ {d}")
    lhs = _beta_after_renaming(x, Abs(y, a), d)
    rhs = ell(y, _beta_after_renaming(x, a, d))
    return trans(lhs, sym(rhs))


def eta_e_in_theory(x: VarId, y: VarId) -> DerivationTree:
    """``y ∼ λx.(y x)`` by the ordinary eta rule."""
    _require(x != y, "x and y must differ")
    return eta(Var(y), x)


# --- registry ---------------------------------------------------------------


@dataclass(frozen=True)
class Script:
    name: str
    build: Callable[..., DerivationTree]
    mode: CheckMode
    params: tuple[str, ...]
    doc: str


def _s(name, build, mode, params):
    doc = (build.__doc__ or "").strip().splitlines()[0] if build.__doc__ else ""
    return name, Script(name, build, mode, tuple(params), doc)


_P, _L, _E = CheckMode.PRELAMBDA, CheckMode.LAMBDA, CheckMode.EXTENSIONAL
_LT, _ET = CheckMode.LAMBDA_THEORY, CheckMode.EXTENSIONAL_THEORY

# the registry keys are the published labels of these results
SCRIPTS: dict[str, Script] = dict(
    [
        _s("idprop", identity_renaming, _L, ["x", "y"]),
        _s("IND", transfer_independence, _P, ["x", "A", "z", "D", "premise"]),
        _s("propfree", independence_of_nonfree, _P, ["x", "A", "z"]),
        _s("lemmalpha_i", independent_of_other_variable, _P, ["x", "y"]),
        _s("lemmalpha_ii", independent_in_application, _P, ["y", "B", "C", "z", "premise_B", "premise_C"]),
        _s("lemmalpha_iii", independent_in_abstraction, _P, ["x", "y", "B", "z", "premise"]),
        _s("beta5rev", beta5_from_independence, _P, ["x", "y", "A", "D", "premise"]),
        _s("EQ", independence_from_convertible, _P, ["x", "A", "B", "z", "premise"]),
        _s("coroind", independent_but_free, _P, ["x", "y", "z"]),
        _s("remalpha", alpha_same_binder, _P, ["x", "A", "premise"]),
        _s("alpharev", alpha_from_independence, _L, ["x", "y", "A", "premise"]),
        _s("thmalpha", abstraction_extensionality, _L, ["x", "A", "y", "B", "z", "premise", "premise_A", "premise_B"]),
        _s("thmalpha_converse", alpha_gives_equal_applications, _P, ["x", "y", "A", "D", "premise"]),
        _s("propeta", eta_from_independence, _E, ["A", "y", "x", "premise"]),
        _s("alpha", alpha_in_extensional, _E, ["x", "y", "A", "premise"]),
        _s("propeqext2", term_extensionality, _E, ["A", "B", "z", "premise", "premise_A", "premise_B"]),
        _s("propeqext2_converse", eta_instance_applications, _P, ["x", "y", "D"]),
        _s("betaconv", beta_by_conditions, _P, ["x", "A", "D"]),
        _s("T1_beta", beta_by_conditions, _L, ["x", "A", "D"]),
        _s("T1_alpha", alpha_rule_from_conditions, _L, ["x", "y", "A"]),
        _s("renam", renaming, _LT, ["A", "D"]),
        _s("T2_beta1", beta1_in_theory, _LT, ["x", "D"]),
        _s("T2_beta2", beta2_in_theory, _LT, ["x", "y", "D"]),
        _s("T2_beta3", beta3_in_theory, _LT, ["x", "A", "B", "D"]),
        _s("T2_beta4", beta4_in_theory, _LT, ["x", "A", "D"]),
        _s("T2_beta5", beta5_in_theory, _LT, ["x", "y", "A", "D", "premise"]),
        _s("T3_eta", eta_from_independence, _E, ["A", "y", "x", "premise"]),
        _s("T4_eta_e", eta_e_in_theory, _ET, ["x", "y"]),
    ]
)


def _coerce(name: str, value: object) -> object:
    if value is None or isinstance(value, (VarId, Var, App, Abs, DerivationTree)):
        if name[0].islower() and not name.startswith("premise") and isinstance(value, Var):
            return value.v
        return value
    if not isinstance(value, str):
        raise BindingError(f"cannot use {value!r} for {name}")
    if name.startswith("premise"):
        return load_derivation(value)
    try:
        if name[0].islower():
            return intern(value)
        return parse_term(value)
    except (ValueError, TermSyntaxError) as e:
        raise BindingError(f"bad value for {name}: {e}") from None


def script(name: str, bindings: Mapping[str, object]) -> DerivationTree:
    """Build the named derivation.  String bindings are parsed; ``premise*`` strings are file paths."""
    try:
        entry = SCRIPTS[name]
    except KeyError:
        raise BindingError(f"unknown script {name!r}; known: {', '.join(SCRIPTS)}") from None
    unknown = set(bindings) - set(entry.params)
    if unknown:
        raise BindingError(f"script {name} takes {', '.join(entry.params)}; got unexpected {sorted(unknown)}")
    args = []
    for p in entry.params:
        args.append(_coerce(p, bindings.get(p)))
    while args and args[-1] is None:
        args.pop()
    try:
        return entry.build(*args)
    except TypeError as e:
        raise BindingError(f"script {name}: {e}") from None
