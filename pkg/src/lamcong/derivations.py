"""Proof trees for judgments ``A ∼ B`` and a rule-by-rule checker.

Every node names its rule and carries an explicit instantiation of the
rule's schematic names: lower-case names (x, y, z, w) are variables and
upper-case names (A, B, C, D) are terms.  The checker rebuilds the
conclusion and premise shapes from that instantiation and compares them
with what the tree states, so nothing is inferred.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Mapping, TextIO

from .calculus import TheoryMode
from .subst import subst_simple
from .terms import Abs, App, Term, TermSyntaxError, Var, VarId, intern, parse_term, print_term
from .varsets import nonbound, nonfree, proviso_beta

__all__ = [
    "Rule",
    "CheckMode",
    "Judgment",
    "DerivationTree",
    "Valid",
    "Invalid",
    "FormatError",
    "BindingError",
    "validate",
    "schema_names",
    "to_json",
    "from_json",
    "dumps",
    "loads",
    "save_derivation",
    "load_derivation",
    "refl",
    "sym",
    "trans",
    "ell",
    "cong_app",
    "beta1",
    "beta2",
    "beta3",
    "beta4",
    "beta5",
    "alpha_e",
    "eta_e",
    "beta",
    "alpha",
    "eta",
]


class Rule(Enum):
    R = "r"
    S = "s"
    T = "t"
    ELL = "ell"
    APP = "app"
    BETA1 = "beta1"
    BETA2 = "beta2"
    BETA3 = "beta3"
    BETA4 = "beta4"
    BETA5 = "beta5"
    ALPHA_E = "alpha_e"
    ETA_E = "eta_e"
    BETA = "beta"
    ALPHA = "alpha"
    ETA = "eta"


STRUCTURAL = frozenset({Rule.R, Rule.S, Rule.T, Rule.ELL, Rule.APP})
BETA_CONDITIONS = frozenset({Rule.BETA1, Rule.BETA2, Rule.BETA3, Rule.BETA4, Rule.BETA5})


class CheckMode(Enum):
    PRELAMBDA = "pre"
    LAMBDA = "lambda"
    EXTENSIONAL = "ext"
    LAMBDA_THEORY = "lambda-theory"
    EXTENSIONAL_THEORY = "ext-theory"

    @property
    def rules(self) -> frozenset[Rule]:
        return _MODE_RULES[self]

    @classmethod
    def parse(cls, mode: str | TheoryMode | CheckMode) -> CheckMode:
        if isinstance(mode, CheckMode):
            return mode
        if isinstance(mode, TheoryMode):
            return cls(mode.value)
        text = mode.lower()
        aliases = {
            "prelambda": "pre",
            "extensional": "ext",
            "theory-lambda": "lambda-theory",
            "theory-ext": "ext-theory",
            "extensional-theory": "ext-theory",
        }
        try:
            return cls(aliases.get(text, text))
        except ValueError:
            raise ValueError(f"unknown check mode {mode!r}") from None


_MODE_RULES = {
    CheckMode.PRELAMBDA: STRUCTURAL | BETA_CONDITIONS,
    CheckMode.LAMBDA: STRUCTURAL | BETA_CONDITIONS | {Rule.ALPHA_E},
    # alpha_e is derivable from eta_e, so it is admitted here as a derived rule
    CheckMode.EXTENSIONAL: STRUCTURAL | BETA_CONDITIONS | {Rule.ETA_E, Rule.ALPHA_E},
    CheckMode.LAMBDA_THEORY: STRUCTURAL | {Rule.BETA, Rule.ALPHA},
    CheckMode.EXTENSIONAL_THEORY: STRUCTURAL | {Rule.BETA, Rule.ALPHA, Rule.ETA},
}


class FormatError(ValueError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.message = message
        self.location = location


class BindingError(ValueError):
    """A proof builder was given bindings that violate one of its side conditions."""


@dataclass(frozen=True)
class Judgment:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} ∼ {print_term(self.rhs)}"


Binding = VarId | Term


@dataclass(frozen=True, eq=True)
class DerivationTree:
    rule: Rule
    conclusion: Judgment
    bind: Mapping[str, Binding] = field(default_factory=dict)
    premises: tuple[DerivationTree, ...] = ()

    __hash__ = None  # the binding map is a dict

    @property
    def lhs(self) -> Term:
        return self.conclusion.lhs

    @property
    def rhs(self) -> Term:
        return self.conclusion.rhs

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def rules_used(self) -> set[Rule]:
        out = {self.rule}
        for p in self.premises:
            out |= p.rules_used()
        return out

    def nodes(self) -> Iterable[tuple[str, DerivationTree]]:
        """Pre-order walk yielding (path, node)."""
        stack: list[tuple[str, DerivationTree]] = [("", self)]
        while stack:
            path, node = stack.pop()
            yield path or ROOT, node
            for i in reversed(range(len(node.premises))):
                stack.append((f"{path}.{i}" if path else str(i), node.premises[i]))


ROOT = "ε"


# --- rule schemas -----------------------------------------------------------

Conditions = list[tuple[str, bool]]
Instance = tuple[Judgment, list[Judgment], Conditions]


def _lam(x: VarId, body: Term) -> Abs:
    return Abs(x, body)


def _redex(x: VarId, body: Term, d: Term) -> App:
    return App(Abs(x, body), d)


def _schema_r(b) -> Instance:
    return Judgment(b["A"], b["A"]), [], []


def _schema_s(b) -> Instance:
    return Judgment(b["B"], b["A"]), [Judgment(b["A"], b["B"])], []


def _schema_t(b) -> Instance:
    return Judgment(b["A"], b["C"]), [Judgment(b["A"], b["B"]), Judgment(b["B"], b["C"])], []


def _schema_ell(b) -> Instance:
    x = b["x"]
    return Judgment(_lam(x, b["A"]), _lam(x, b["B"])), [Judgment(b["A"], b["B"])], []


def _schema_app(b) -> Instance:
    return (
        Judgment(App(b["A"], b["C"]), App(b["B"], b["D"])),
        [Judgment(b["A"], b["B"]), Judgment(b["C"], b["D"])],
        [],
    )


def _schema_beta1(b) -> Instance:
    x, d = b["x"], b["D"]
    return Judgment(_redex(x, Var(x), d), d), [], []


def _schema_beta2(b) -> Instance:
    x, y, d = b["x"], b["y"], b["D"]
    return Judgment(_redex(x, Var(y), d), Var(y)), [], [("x ≠ y", x != y)]


def _schema_beta3(b) -> Instance:
    x, a, bb, d = b["x"], b["A"], b["B"], b["D"]
    return Judgment(_redex(x, App(a, bb), d), App(_redex(x, a, d), _redex(x, bb, d))), [], []


def _schema_beta4(b) -> Instance:
    x, a, d = b["x"], b["A"], b["D"]
    return Judgment(_redex(x, _lam(x, a), d), _lam(x, a)), [], []


def _schema_beta5(b) -> Instance:
    x, y, a, d = b["x"], b["y"], b["A"], b["D"]
    return (
        Judgment(_redex(x, _lam(y, a), d), _lam(y, _redex(x, a, d))),
        [Judgment(_redex(y, d, Var(x)), d)],
        [("x ≠ y", x != y)],
    )


def _schema_alpha_e(b) -> Instance:
    x, y, a = b["x"], b["y"], b["A"]
    return (
        Judgment(_lam(x, a), _lam(y, _redex(x, a, Var(y)))),
        [Judgment(_redex(y, a, Var(x)), a)],
        [],
    )


def _schema_eta_e(b) -> Instance:
    x, y = b["x"], b["y"]
    return Judgment(Var(y), _lam(x, App(Var(y), Var(x)))), [], [("x ≠ y", x != y)]


def _schema_beta(b) -> Instance:
    x, a, d = b["x"], b["A"], b["D"]
    return (
        Judgment(_redex(x, a, d), subst_simple(d, x, a)),
        [],
        [("B(A) ∪ F(D) = V", proviso_beta(a, d))],
    )


def _schema_alpha(b) -> Instance:
    x, y, a = b["x"], b["y"], b["A"]
    ok = y in nonfree(a) and y in nonbound(a)
    return Judgment(_lam(x, a), _lam(y, subst_simple(Var(y), x, a))), [], [("y ∈ F(A) ∩ B(A)", ok)]


def _schema_eta(b) -> Instance:
    a, y = b["A"], b["y"]
    return Judgment(a, _lam(y, App(a, Var(y)))), [], [("y ∈ F(A)", y in nonfree(a))]


_SCHEMAS: dict[Rule, tuple[tuple[str, ...], Callable[[Mapping[str, Binding]], Instance]]] = {
    Rule.R: (("A",), _schema_r),
    Rule.S: (("A", "B"), _schema_s),
    Rule.T: (("A", "B", "C"), _schema_t),
    Rule.ELL: (("x", "A", "B"), _schema_ell),
    Rule.APP: (("A", "B", "C", "D"), _schema_app),
    Rule.BETA1: (("x", "D"), _schema_beta1),
    Rule.BETA2: (("x", "y", "D"), _schema_beta2),
    Rule.BETA3: (("x", "A", "B", "D"), _schema_beta3),
    Rule.BETA4: (("x", "A", "D"), _schema_beta4),
    Rule.BETA5: (("x", "y", "A", "D"), _schema_beta5),
    Rule.ALPHA_E: (("x", "y", "A"), _schema_alpha_e),
    Rule.ETA_E: (("x", "y"), _schema_eta_e),
    Rule.BETA: (("x", "A", "D"), _schema_beta),
    Rule.ALPHA: (("x", "y", "A"), _schema_alpha),
    Rule.ETA: (("A", "y"), _schema_eta),
}


def schema_names(rule: Rule) -> tuple[str, ...]:
    return _SCHEMAS[rule][0]


def _is_var_name(name: str) -> bool:
    return name[:1].islower()


# --- checking ---------------------------------------------------------------


@dataclass(frozen=True)
class Valid:
    def __bool__(self) -> bool:
        return True

    def __str__(self) -> str:
        return "Valid"


@dataclass(frozen=True)
class Invalid:
    path: str
    reason: str

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"Invalid at {self.path}: {self.reason}"


Verdict = Valid | Invalid


def _check_node(node: DerivationTree, mode: CheckMode) -> str | None:
    rule = node.rule
    if rule not in mode.rules:
        return f"rule {rule.value} is not available in {mode.value} mode"
    names, build = _SCHEMAS[rule]
    for name in names:
        if name not in node.bind:
            return f"unbound schematic name {name}"
        value = node.bind[name]
        if _is_var_name(name) and not isinstance(value, VarId):
            return f"{name} must be bound to a variable"
        if not _is_var_name(name) and not isinstance(value, (Var, App, Abs)):
            return f"{name} must be bound to a term"
    extra = set(node.bind) - set(names)
    if extra:
        return f"unexpected schematic names {sorted(extra)} for rule {rule.value}"
    conclusion, premise_shapes, conditions = build(node.bind)
    if len(node.premises) != len(premise_shapes):
        return f"rule {rule.value} takes {len(premise_shapes)} premises, got {len(node.premises)}"
    if node.conclusion != conclusion:
        return f"conclusion does not match rule {rule.value}: expected {conclusion}, found {node.conclusion}"
    for i, (premise, shape) in enumerate(zip(node.premises, premise_shapes)):
        if premise.conclusion != shape:
            return f"premise {i} must conclude {shape}, found {premise.conclusion}"
    for name, holds in conditions:
        if not holds:
            return f"side condition {name} fails"
    return None


def validate(d: DerivationTree, mode: str | TheoryMode | CheckMode = CheckMode.PRELAMBDA) -> Verdict:
    """Check every node, pre-order; report the first failure."""
    mode = CheckMode.parse(mode)
    for path, node in d.nodes():
        reason = _check_node(node, mode)
        if reason is not None:
            return Invalid(path, reason)
    return Valid()


# --- builders ---------------------------------------------------------------


def _node(rule: Rule, bind: dict[str, Binding], *premises: DerivationTree) -> DerivationTree:
    conclusion, _, _ = _SCHEMAS[rule][1](bind)
    return DerivationTree(rule, conclusion, bind, tuple(premises))


def refl(a: Term) -> DerivationTree:
    return _node(Rule.R, {"A": a})


def sym(d: DerivationTree) -> DerivationTree:
    return _node(Rule.S, {"A": d.lhs, "B": d.rhs}, d)


def trans(*ds: DerivationTree) -> DerivationTree:
    """Chain ``A ∼ B``, ``B ∼ C``, ... into ``A ∼ Z`` with nested ``t`` nodes."""
    if not ds:
        raise ValueError("trans needs at least one derivation")
    out = ds[0]
    for d in ds[1:]:
        if out.rhs != d.lhs:
            raise BindingError(f"cannot chain {out.conclusion} with {d.conclusion}")
        out = _node(Rule.T, {"A": out.lhs, "B": out.rhs, "C": d.rhs}, out, d)
    return out


def ell(x: VarId, d: DerivationTree) -> DerivationTree:
    return _node(Rule.ELL, {"x": x, "A": d.lhs, "B": d.rhs}, d)


def cong_app(d1: DerivationTree, d2: DerivationTree) -> DerivationTree:
    return _node(Rule.APP, {"A": d1.lhs, "B": d1.rhs, "C": d2.lhs, "D": d2.rhs}, d1, d2)


def beta1(x: VarId, d: Term) -> DerivationTree:
    return _node(Rule.BETA1, {"x": x, "D": d})


def beta2(x: VarId, y: VarId, d: Term) -> DerivationTree:
    return _node(Rule.BETA2, {"x": x, "y": y, "D": d})


def beta3(x: VarId, a: Term, b: Term, d: Term) -> DerivationTree:
    return _node(Rule.BETA3, {"x": x, "A": a, "B": b, "D": d})


def beta4(x: VarId, a: Term, d: Term) -> DerivationTree:
    return _node(Rule.BETA4, {"x": x, "A": a, "D": d})


def beta5(x: VarId, y: VarId, a: Term, d: Term, premise: DerivationTree) -> DerivationTree:
    return _node(Rule.BETA5, {"x": x, "y": y, "A": a, "D": d}, premise)


def alpha_e(x: VarId, y: VarId, a: Term, premise: DerivationTree) -> DerivationTree:
    return _node(Rule.ALPHA_E, {"x": x, "y": y, "A": a}, premise)


def eta_e(x: VarId, y: VarId) -> DerivationTree:
    return _node(Rule.ETA_E, {"x": x, "y": y})


def beta(x: VarId, a: Term, d: Term) -> DerivationTree:
    return _node(Rule.BETA, {"x": x, "A": a, "D": d})


def alpha(x: VarId, y: VarId, a: Term) -> DerivationTree:
    return _node(Rule.ALPHA, {"x": x, "y": y, "A": a})


def eta(a: Term, y: VarId) -> DerivationTree:
    return _node(Rule.ETA, {"A": a, "y": y})


# --- JSON -------------------------------------------------------------------


def _render(value: Binding) -> str:
    return value.name if isinstance(value, VarId) else print_term(value)


def to_json(d: DerivationTree) -> dict:
    names = _SCHEMAS[d.rule][0]
    ordered = [n for n in names if n in d.bind] + sorted(n for n in d.bind if n not in names)
    return {
        "rule": d.rule.value,
        "conclusion": {"lhs": print_term(d.lhs), "rhs": print_term(d.rhs)},
        "bind": {n: _render(d.bind[n]) for n in ordered},
        "premises": [to_json(p) for p in d.premises],
    }


def _parse_at(text: object, where: str) -> Term:
    if not isinstance(text, str):
        raise FormatError("expected a term string", where)
    try:
        return parse_term(text)
    except TermSyntaxError as e:
        raise FormatError(f"bad term: {e}", where) from None


def from_json(obj: object, where: str = "$") -> DerivationTree:
    if not isinstance(obj, dict):
        raise FormatError("expected an object", where)
    unknown = set(obj) - {"rule", "conclusion", "bind", "premises"}
    if unknown:
        raise FormatError(f"unknown keys {sorted(unknown)}", where)
    raw_rule = obj.get("rule")
    try:
        rule = Rule(raw_rule)
    except ValueError:
        raise FormatError(f"unknown rule {raw_rule!r}", f"{where}.rule") from None
    concl = obj.get("conclusion")
    if not isinstance(concl, dict) or set(concl) != {"lhs", "rhs"}:
        raise FormatError("conclusion needs exactly lhs and rhs", f"{where}.conclusion")
    judgment = Judgment(
        _parse_at(concl["lhs"], f"{where}.conclusion.lhs"),
        _parse_at(concl["rhs"], f"{where}.conclusion.rhs"),
    )
    raw_bind = obj.get("bind", {})
    if not isinstance(raw_bind, dict):
        raise FormatError("bind must be an object", f"{where}.bind")
    names = _SCHEMAS[rule][0]
    for name in names:
        if name not in raw_bind:
            raise FormatError(f"unbound schematic name {name} for rule {rule.value}", f"{where}.bind")
    bind: dict[str, Binding] = {}
    for name, text in raw_bind.items():
        at = f"{where}.bind.{name}"
        if name not in names:
            raise FormatError(f"rule {rule.value} has no schematic name {name}", at)
        if _is_var_name(name):
            if not isinstance(text, str):
                raise FormatError("expected a variable name", at)
            try:
                bind[name] = intern(text)
            except ValueError:
                raise FormatError(f"not a variable name: {text!r}", at) from None
        else:
            bind[name] = _parse_at(text, at)
    raw_premises = obj.get("premises", [])
    if not isinstance(raw_premises, list):
        raise FormatError("premises must be a list", f"{where}.premises")
    premises = tuple(from_json(p, f"{where}.premises[{i}]") for i, p in enumerate(raw_premises))
    return DerivationTree(rule, judgment, bind, premises)


def dumps(d: DerivationTree) -> str:
    return json.dumps(to_json(d), ensure_ascii=False, indent=2) + "\n"


def loads(text: str) -> DerivationTree:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from None
    return from_json(obj)


def save_derivation(d: DerivationTree, file: str | Path | TextIO) -> None:
    text = dumps(d)
    if isinstance(file, (str, Path)):
        Path(file).write_text(text, encoding="utf-8")
    else:
        file.write(text)


def load_derivation(file: str | Path | TextIO) -> DerivationTree:
    if isinstance(file, (str, Path)):
        return loads(Path(file).read_text(encoding="utf-8"))
    return loads(file.read())
