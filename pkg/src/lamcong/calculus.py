"""Rewriting with the substitution-free beta rules, plus alpha and eta.

The five beta rules push a pending argument through the body of an
abstraction one constructor at a time, so no substitution is ever needed:

    beta1  [λx.x]D        -> D
    beta2  [λx.y]D        -> y                    (x != y)
    beta3  [λx.(A B)]D    -> ([λx.A]D) ([λx.B]D)
    beta4  [λx.λx.A]D     -> λx.A
    beta5  [λx.λy.A]D     -> λy.([λx.A]D)         (x != y, y not free in D)

When ``beta5`` is blocked because ``y`` is free in ``D``, the prelambda mode
leaves the redex alone.  The lambda and extensional modes first rename the
inner binder and then fire ``beta5``.  The extensional mode also contracts
``λx.(M x)`` to ``M`` when ``x`` is not free in ``M``.

Reduction is leftmost-outermost.  Paths are Dewey strings: ``0`` is the
function (or abstraction body) and ``1`` the argument.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from itertools import count

from .subst import freshen, subst_simple
from .terms import Abs, App, Term, Var, VarId, intern, print_term
from .varsets import finite, free_vars, nonbound, nonfree, pick_fresh, proviso_beta

__all__ = [
    "TheoryMode",
    "Status",
    "Step",
    "NormalizationResult",
    "Equal",
    "DistinctNormalForms",
    "Unknown",
    "Yes",
    "DEFAULT_FUEL",
    "MAX_DEPTH",
    "MAX_SIZE",
    "STRATEGIES",
    "default_fuel",
    "reduce_step",
    "normalize",
    "alpha_canonical",
    "alpha_equivalent",
    "equivalent",
    "independent",
    "traditional_beta_step",
    "traditional_normalize",
    "traditional_equivalent",
    "format_trace",
    "is_normal",
]

DEFAULT_FUEL = 10_000
# terms are compared and traversed recursively; deeper or larger ones are abandoned like fuel exhaustion
MAX_DEPTH = 400
MAX_SIZE = 50_000
ROOT = "ε"


class TheoryMode(Enum):
    PRELAMBDA = "pre"
    LAMBDA = "lambda"
    EXTENSIONAL = "ext"

    @classmethod
    def parse(cls, text: str | TheoryMode) -> TheoryMode:
        if isinstance(text, TheoryMode):
            return text
        aliases = {
            "pre": cls.PRELAMBDA,
            "prelambda": cls.PRELAMBDA,
            "lambda": cls.LAMBDA,
            "ext": cls.EXTENSIONAL,
            "extensional": cls.EXTENSIONAL,
        }
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown theory mode {text!r}") from None


class Status(Enum):
    NORMAL = "Normal"
    FUEL_EXHAUSTED = "FuelExhausted"


def default_fuel() -> int:
    raw = os.environ.get("LAMCONG_FUEL")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"LAMCONG_FUEL must be a positive integer, got {raw!r}") from None
        if value >= 1:
            return value
        raise ValueError(f"LAMCONG_FUEL must be a positive integer, got {raw!r}")
    return DEFAULT_FUEL


@dataclass(frozen=True)
class Step:
    rule: str
    path: str
    term: Term


@dataclass
class NormalizationResult:
    status: Status
    term: Term
    steps: int
    trace: list[Step] | None = None
    reason: str = ""

    @property
    def normal(self) -> bool:
        return self.status is Status.NORMAL


# --- one step ---------------------------------------------------------------


def _contract(t: Term, mode: TheoryMode, beta5_normalize: bool) -> tuple[Term, str] | None:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        x, body, d = t.fun.binder, t.fun.body, t.arg
        match body:
            case Var(v) if v == x:
                return d, "beta1"
            case Var():
                return body, "beta2"
            case App(a, b):
                return App(App(Abs(x, a), d), App(Abs(x, b), d)), "beta3"
            case Abs(y, _) if y == x:
                return body, "beta4"
            case Abs(y, a):
                if y in nonfree(d) or (beta5_normalize and _free_after_normalizing(y, d, mode)):
                    return Abs(y, App(Abs(x, a), d)), "beta5"
                if mode is TheoryMode.PRELAMBDA:
                    return None
                w = pick_fresh(avoid=finite((x,)), want_in=[nonfree(a), nonbound(a), nonfree(d)])
                return Abs(w, App(Abs(x, subst_simple(Var(w), y, a)), d)), "alpha+beta5"
    if mode is TheoryMode.EXTENSIONAL and isinstance(t, Abs):
        match t.body:
            case App(m, Var(v)) if v == t.binder and t.binder in nonfree(m):
                return m, "eta"
    return None


def _free_after_normalizing(y: VarId, d: Term, mode: TheoryMode) -> bool:
    result = normalize(d, mode, fuel=default_fuel())
    return result.normal and y in nonfree(result.term)


def _find(
    t: Term,
    mode: TheoryMode,
    beta5_normalize: bool,
    path: list[str],
    residual_of: tuple[VarId, Term] | None = None,
) -> tuple[Term, str, Term] | None:
    """Leftmost-outermost contraction: (new term, rule, redex).

    With ``residual_of=(x, D)`` only redexes ``[λx.M]D`` carrying that very
    argument object are considered.
    """
    if residual_of is None or (
        isinstance(t, App)
        and t.arg is residual_of[1]
        and isinstance(t.fun, Abs)
        and t.fun.binder == residual_of[0]
    ):
        hit = _contract(t, mode, beta5_normalize)
        if hit is not None:
            return hit[0], hit[1], t
    match t:
        case App(f, a):
            path.append("0")
            hit = _find(f, mode, beta5_normalize, path, residual_of)
            if hit is not None:
                return App(hit[0], a), hit[1], hit[2]
            path[-1] = "1"
            hit = _find(a, mode, beta5_normalize, path, residual_of)
            if hit is not None:
                return App(f, hit[0]), hit[1], hit[2]
            path.pop()
        case Abs(x, body):
            path.append("0")
            hit = _find(body, mode, beta5_normalize, path, residual_of)
            if hit is not None:
                return Abs(x, hit[0]), hit[1], hit[2]
            path.pop()
    return None


def reduce_step(
    t: Term, mode: TheoryMode = TheoryMode.PRELAMBDA, *, beta5_normalize: bool = False
) -> tuple[Term, str, str] | None:
    """Contract the leftmost-outermost redex of ``mode``.

    Returns ``(new_term, rule, path)`` or ``None`` when ``t`` is normal.
    With ``beta5_normalize`` a blocked ``beta5`` redex is retried after
    normalizing its argument, which can remove spurious free occurrences.
    """
    path: list[str] = []
    hit = _find(t, mode, beta5_normalize, path)
    if hit is None:
        return None
    return hit[0], hit[1], ".".join(path) or ROOT


def is_normal(t: Term, mode: TheoryMode = TheoryMode.PRELAMBDA) -> bool:
    return reduce_step(t, mode) is None


STRATEGIES = ("normal", "outermost")


def normalize(
    t: Term,
    mode: TheoryMode = TheoryMode.PRELAMBDA,
    fuel: int | None = None,
    *,
    trace: bool = False,
    beta5_normalize: bool = False,
    strategy: str = "normal",
) -> NormalizationResult:
    """Rewrite until no rule applies or ``fuel`` steps are spent.

    Every step contracts one redex.  Under ``"outermost"`` it is always the
    leftmost-outermost one.  That order can loop forever on terms with a
    normal form: ``(λy.(λx.x z) y)(w w)`` keeps distributing ``w w`` into a
    redex that is never finished.  The default ``"normal"`` strategy picks a
    leftmost-outermost redex ``[λx.M]D`` and then keeps contracting the
    redexes it spawns (those still carrying ``x`` and that same ``D``) until
    ``D`` has been pushed all the way through ``M``.  That finishing phase
    always terminates, and the whole behaves like ordinary normal-order
    reduction with substitution spelled out step by step.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    fuel = default_fuel() if fuel is None else fuel
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    steps: list[Step] | None = [] if trace else None
    measure = _Measure()
    pending: tuple[VarId, Term] | None = None
    for n in range(fuel):
        path: list[str] = []
        hit = None
        if pending is not None:
            hit = _find(t, mode, beta5_normalize, path, pending)
            if hit is None:
                pending, path = None, []
        if hit is None:
            hit = _find(t, mode, beta5_normalize, path)
            if hit is None:
                return NormalizationResult(Status.NORMAL, t, n, steps)
            redex = hit[2]
            if strategy == "normal" and isinstance(redex, App):
                pending = (redex.fun.binder, redex.arg)
        t = hit[0]
        if steps is not None:
            steps.append(Step(hit[1], ".".join(path) or ROOT, t))
        if too_big := measure.check(t, n + 1):
            return NormalizationResult(Status.FUEL_EXHAUSTED, t, n + 1, steps, too_big)
    if reduce_step(t, mode, beta5_normalize=beta5_normalize) is None:
        return NormalizationResult(Status.NORMAL, t, fuel, steps)
    return NormalizationResult(Status.FUEL_EXHAUSTED, t, fuel, steps)


class _Measure:
    """Size and depth of terms that share most of their structure step to step.

    Results are memoized per node object, so measuring the next term in a
    reduction only visits the nodes that step built.  Sharing also means a
    term's unfolded size can grow exponentially while its memory stays small.
    """

    def __init__(self) -> None:
        # the node itself is kept so its id cannot be reused
        self._memo: dict[int, tuple[Term, int, int]] = {}

    def size_depth(self, t: Term) -> tuple[int, int]:
        memo = self._memo
        stack = [t]
        while stack:
            node = stack[-1]
            if id(node) in memo:
                stack.pop()
                continue
            if isinstance(node, Var):
                memo[id(node)] = (node, 1, 1)
                stack.pop()
                continue
            kids = (node.fun, node.arg) if isinstance(node, App) else (node.body,)
            missing = [k for k in kids if id(k) not in memo]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            measured = [memo[id(k)] for k in kids]
            memo[id(node)] = (node, 1 + sum(m[1] for m in measured), 1 + max(m[2] for m in measured))
        _, size, depth = memo[id(t)]
        return size, depth

    def check(self, t: Term, steps: int) -> str:
        size, depth = self.size_depth(t)
        if depth > MAX_DEPTH:
            return f"term depth passed {MAX_DEPTH} after {steps} steps"
        if size > MAX_SIZE:
            return f"term size passed {MAX_SIZE} after {steps} steps"
        return ""


def format_trace(result: NormalizationResult, style: str = "minimal") -> list[str]:
    return [
        f"step {i}: {s.rule} at {s.path} ⇒ {print_term(s.term, style)}"
        for i, s in enumerate(result.trace or (), start=1)
    ]


# --- alpha ------------------------------------------------------------------


def alpha_canonical(t: Term) -> Term:
    """Rename binders to v0, v1, ... in pre-order, leaving free variables alone.

    Names that occur free in ``t`` are skipped so no renamed binder can
    capture anything.
    """
    free = free_vars(t)
    fresh = (v for v in (intern(f"v{k}") for k in count()) if v not in free)

    def go(u: Term, env: dict[VarId, VarId]) -> Term:
        match u:
            case Var(v):
                return Var(env.get(v, v))
            case App(f, a):
                return App(go(f, env), go(a, env))
            case Abs(x, body):
                c = next(fresh)
                return Abs(c, go(body, {**env, x: c}))
        raise TypeError(u)

    return go(t, {})


def alpha_equivalent(a: Term, b: Term) -> bool:
    return alpha_canonical(a) == alpha_canonical(b)


# --- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class Equal:
    normal_form: Term | None = None
    witness: object | None = None  # a DerivationTree when one is supplied


@dataclass(frozen=True)
class DistinctNormalForms:
    """Both sides reached different normal forms.

    This refutes equality only if the rewrite system is confluent, which is
    not known for the beta rules; read it as strong evidence, not proof.
    """

    left: Term
    right: Term


@dataclass(frozen=True)
class Unknown:
    reason: str


@dataclass(frozen=True)
class Yes:
    method: str  # "nonfree" or "rewrite"
    z: VarId | None = None
    normal_form: Term | None = None


EqVerdict = Equal | DistinctNormalForms | Unknown


def _compare(ra: NormalizationResult, rb: NormalizationResult, up_to_alpha: bool) -> EqVerdict:
    if not (ra.normal and rb.normal):
        side, r = ("left", ra) if not ra.normal else ("right", rb)
        return Unknown(f"{side} side: {r.reason or f'fuel exhausted after {r.steps} steps'}")
    a, b = ra.term, rb.term
    if up_to_alpha:
        a, b = alpha_canonical(a), alpha_canonical(b)
    if a == b:
        return Equal(normal_form=ra.term)
    return DistinctNormalForms(ra.term, rb.term)


def equivalent(
    a: Term,
    b: Term,
    mode: TheoryMode = TheoryMode.PRELAMBDA,
    fuel: int | None = None,
    *,
    beta5_normalize: bool = False,
    strategy: str = "normal",
) -> EqVerdict:
    ra = normalize(a, mode, fuel, beta5_normalize=beta5_normalize, strategy=strategy)
    rb = normalize(b, mode, fuel, beta5_normalize=beta5_normalize, strategy=strategy)
    return _compare(ra, rb, up_to_alpha=mode is not TheoryMode.PRELAMBDA)


def independent(
    x: VarId,
    a: Term,
    mode: TheoryMode = TheoryMode.PRELAMBDA,
    fuel: int | None = None,
    *,
    fast_path: bool = True,
) -> Yes | Unknown:
    """Is ``[λx.a]z`` convertible with ``a`` for some ``z != x``?

    Not occurring free settles it at once; otherwise a fresh ``z`` is tried
    by rewriting both sides.
    """
    if fast_path and x in nonfree(a):
        return Yes("nonfree")
    z = pick_fresh(avoid=finite((x,)), want_in=[nonfree(a), nonbound(a)])
    verdict = equivalent(App(Abs(x, a), Var(z)), a, mode, fuel)
    if isinstance(verdict, Equal):
        return Yes("rewrite", z, verdict.normal_form)
    if isinstance(verdict, Unknown):
        return verdict
    return Unknown(f"[λ{x}.A]{z} and A reach different normal forms")


# --- ordinary beta with substitution ----------------------------------------


def _traditional_find(t: Term, eta: bool) -> Term | None:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        x, a, d = t.fun.binder, t.fun.body, t.arg
        if not proviso_beta(a, d):
            a = freshen(a, d)
        return subst_simple(d, x, a)
    if eta and isinstance(t, Abs):
        match t.body:
            case App(m, Var(v)) if v == t.binder and t.binder in nonfree(m):
                return m
    match t:
        case App(f, a):
            hit = _traditional_find(f, eta)
            if hit is not None:
                return App(hit, a)
            hit = _traditional_find(a, eta)
            if hit is not None:
                return App(f, hit)
        case Abs(x, body):
            hit = _traditional_find(body, eta)
            if hit is not None:
                return Abs(x, hit)
    return None


def traditional_beta_step(t: Term) -> Term | None:
    """Leftmost-outermost beta step using substitution, freshening binders when needed."""
    return _traditional_find(t, eta=False)


def traditional_normalize(t: Term, fuel: int | None = None, *, eta: bool = False) -> NormalizationResult:
    fuel = default_fuel() if fuel is None else fuel
    measure = _Measure()
    for n in range(fuel):
        nxt = _traditional_find(t, eta)
        if nxt is None:
            return NormalizationResult(Status.NORMAL, t, n)
        t = nxt
        if too_big := measure.check(t, n + 1):
            return NormalizationResult(Status.FUEL_EXHAUSTED, t, n + 1, reason=too_big)
    if _traditional_find(t, eta) is None:
        return NormalizationResult(Status.NORMAL, t, fuel)
    return NormalizationResult(Status.FUEL_EXHAUSTED, t, fuel)


def traditional_equivalent(a: Term, b: Term, fuel: int | None = None, *, eta: bool = False) -> EqVerdict:
    """Equality of ordinary beta (or beta-eta) normal forms up to renaming of binders."""
    return _compare(traditional_normalize(a, fuel, eta=eta), traditional_normalize(b, fuel, eta=eta), True)
