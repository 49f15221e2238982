import io
import json

import pytest

from lamcong.calculus import TheoryMode
from lamcong.derivations import (
    BindingError,
    CheckMode,
    DerivationTree,
    FormatError,
    Invalid,
    Judgment,
    Rule,
    Valid,
    alpha,
    alpha_e,
    beta,
    beta1,
    beta2,
    beta3,
    beta5,
    cong_app,
    dumps,
    ell,
    eta,
    eta_e,
    load_derivation,
    loads,
    refl,
    save_derivation,
    schema_names,
    sym,
    trans,
    validate,
)
from lamcong.terms import Var, intern, parse_term

x, y, z = intern("x"), intern("y"), intern("z")
P = parse_term


def idprop():
    return trans(alpha_e(x, y, Var(x), beta2(y, x, Var(x))), ell(y, beta1(x, Var(y))))


def test_idprop_valid_in_lambda_not_in_prelambda():
    d = idprop()
    assert d.conclusion == Judgment(P("\\x.x"), P("\\y.y"))
    assert d.size() == 5
    assert validate(d, CheckMode.LAMBDA) == Valid()
    v = validate(d, "pre")
    assert isinstance(v, Invalid) and v.path == "0" and "alpha_e" in v.reason
    assert validate(d, TheoryMode.EXTENSIONAL)


def test_beta_with_failing_proviso_is_invalid():
    d = DerivationTree(
        Rule.BETA,
        Judgment(P("(\\x.\\y.x) y"), P("\\y.y")),
        {"x": x, "A": P("\\y.x"), "D": Var(y)},
    )
    v = validate(d, "lambda-theory")
    assert isinstance(v, Invalid) and "B(A) ∪ F(D) = V" in v.reason


def test_wrong_conclusion_is_reported_with_path():
    bad = DerivationTree(Rule.BETA1, Judgment(P("(\\x.x) y"), Var(z)), {"x": x, "D": Var(y)})
    d = sym(bad)
    v = validate(d)
    assert v.path == "0" and "conclusion" in v.reason


def test_premise_mismatch():
    good = beta2(y, x, Var(x))
    d = DerivationTree(Rule.ALPHA_E, alpha_e(x, z, Var(x), good).conclusion, {"x": x, "y": z, "A": Var(x)}, (good,))
    v = validate(d, "lambda")
    assert isinstance(v, Invalid) and v.path == "ε" and "premise 0" in v.reason


def test_side_conditions():
    assert not validate(beta2(x, x, Var(y)))
    assert not validate(eta_e(x, x), "ext")
    assert validate(eta_e(x, y), "ext")
    assert not validate(alpha(x, y, P("x y")), "lambda-theory")
    assert validate(alpha(x, z, P("x y")), "lambda-theory")
    assert not validate(eta(P("x y"), x), "ext-theory")
    assert validate(eta(P("x y"), z), "ext-theory")
    prem = beta2(y, x, Var(x))
    assert not validate(beta5(x, x, Var(y), Var(x), prem))


def test_trans_checks_middle_terms():
    with pytest.raises(BindingError):
        trans(beta1(x, Var(y)), beta1(x, Var(z)))


def test_mode_rule_sets():
    assert Rule.ALPHA_E not in CheckMode.PRELAMBDA.rules
    assert Rule.ETA_E in CheckMode.EXTENSIONAL.rules
    assert Rule.BETA1 not in CheckMode.LAMBDA_THEORY.rules
    assert Rule.ETA in CheckMode.EXTENSIONAL_THEORY.rules
    assert CheckMode.parse(TheoryMode.LAMBDA) is CheckMode.LAMBDA
    with pytest.raises(ValueError):
        CheckMode.parse("bogus")


def test_theory_rule_in_condition_mode_is_rejected():
    d = beta(x, Var(x), Var(y))
    assert validate(d, "lambda-theory")
    assert not validate(d, "lambda")


def test_round_trip_is_exact():
    d = idprop()
    text = dumps(d)
    back = loads(text)
    assert back == d
    assert dumps(back) == text
    assert list(json.loads(text)) == ["rule", "conclusion", "bind", "premises"]
    assert list(json.loads(text)["bind"]) == list(schema_names(Rule.T))


def test_save_and_load_files(tmp_path):
    d = cong_app(ell(x, refl(Var(y))), beta3(x, Var(y), Var(x), Var(z)))
    path = tmp_path / "d.json"
    save_derivation(d, path)
    assert load_derivation(path) == d
    buf = io.StringIO()
    save_derivation(d, buf)
    buf.seek(0)
    assert load_derivation(buf) == d
    assert path.read_text(encoding="utf-8").endswith("\n")


def _node(**over):
    base = {
        "rule": "beta1",
        "conclusion": {"lhs": "(\\x.x) y", "rhs": "y"},
        "bind": {"x": "x", "D": "y"},
        "premises": [],
    }
    base.update(over)
    return json.dumps(base)


@pytest.mark.parametrize(
    "text, where",
    [
        (_node(rule="beta9"), "$.rule"),
        (_node(bind={"x": "x"}), "$.bind"),
        (_node(bind={"x": "x", "D": "y", "Q": "z"}), "$.bind.Q"),
        (_node(conclusion={"lhs": "(\\x.x y"}), "$.conclusion"),
        (_node(conclusion={"lhs": "(\\x.x y", "rhs": "y"}), "$.conclusion.lhs"),
        (_node(bind={"x": "x y", "D": "y"}), "$.bind.x"),
        (_node(premises={}), "$.premises"),
        ("[1, 2]", "$"),
        ("{", "line 1 column 2"),
    ],
)
def test_format_errors(text, where):
    with pytest.raises(FormatError) as info:
        loads(text)
    assert info.value.location == where


def test_nested_format_error_location():
    inner = json.loads(_node(rule="nope"))
    outer = json.loads(_node(rule="s", bind={"A": "y", "B": "y"}))
    outer["premises"] = [inner]
    with pytest.raises(FormatError) as info:
        loads(json.dumps(outer))
    assert info.value.location == "$.premises[0].rule"


def test_validate_is_total_on_odd_trees():
    d = DerivationTree(Rule.R, Judgment(Var(x), Var(x)), {"A": x})
    assert not validate(d)
    d = DerivationTree(Rule.R, Judgment(Var(x), Var(x)), {})
    assert "unbound" in validate(d).reason
    d = DerivationTree(Rule.R, Judgment(Var(x), Var(x)), {"A": Var(x)}, (refl(Var(x)),))
    assert "premises" in validate(d).reason


def test_nodes_walk_preorder_paths():
    d = idprop()
    assert [p for p, _ in d.nodes()] == ["ε", "0", "0.0", "1", "1.0"]
    assert d.rules_used() == {Rule.T, Rule.ALPHA_E, Rule.BETA2, Rule.ELL, Rule.BETA1}
