"""Untyped lambda calculus with substitution-free beta conditions.

Terms, cofinite variable sets, two substitutions, a rewriting engine for the
beta conditions, a derivation checker with a library of proofs, and a graph
model with a membership oracle.
"""

from .calculus import (
    DistinctNormalForms,
    Equal,
    TheoryMode,
    Unknown,
    Yes,
    alpha_canonical,
    alpha_equivalent,
    equivalent,
    independent,
    normalize,
    reduce_step,
    traditional_equivalent,
    traditional_normalize,
)
from .derivations import (
    BindingError,
    CheckMode,
    DerivationTree,
    FormatError,
    Invalid,
    Judgment,
    Rule,
    Valid,
    load_derivation,
    save_derivation,
    validate,
)
from .model import (
    Atom,
    Environment,
    Membership,
    SearchBudget,
    Seq,
    check_beta_soundness,
    enumerate_interpretation,
    member,
    refute,
)
from .proofs import SCRIPTS, script
from .subst import freshen, subst_capture_free, subst_simple
from .terms import Abs, App, Var, VarId, intern, parse_term, print_term, term_size
from .varsets import CofiniteVarSet, bound_vars, free_vars, nonbound, nonfree, pick_fresh, proviso_beta

__all__ = [
    "DistinctNormalForms",
    "Equal",
    "TheoryMode",
    "Unknown",
    "Yes",
    "alpha_canonical",
    "alpha_equivalent",
    "equivalent",
    "independent",
    "normalize",
    "reduce_step",
    "traditional_equivalent",
    "traditional_normalize",
    "BindingError",
    "CheckMode",
    "DerivationTree",
    "FormatError",
    "Invalid",
    "Judgment",
    "Rule",
    "Valid",
    "load_derivation",
    "save_derivation",
    "validate",
    "Atom",
    "Environment",
    "Membership",
    "SearchBudget",
    "Seq",
    "check_beta_soundness",
    "enumerate_interpretation",
    "member",
    "refute",
    "SCRIPTS",
    "script",
    "freshen",
    "subst_capture_free",
    "subst_simple",
    "Abs",
    "App",
    "Var",
    "VarId",
    "intern",
    "parse_term",
    "print_term",
    "term_size",
    "CofiniteVarSet",
    "bound_vars",
    "free_vars",
    "nonbound",
    "nonfree",
    "pick_fresh",
    "proviso_beta",
]

__version__ = "0.1.0"
