import pytest

from lamcong import calculus

from lamcong.calculus import (
    DistinctNormalForms,
    Equal,
    Status,
    TheoryMode,
    Unknown,
    Yes,
    alpha_canonical,
    alpha_equivalent,
    default_fuel,
    equivalent,
    format_trace,
    independent,
    is_normal,
    normalize,
    reduce_step,
    traditional_beta_step,
    traditional_normalize,
)
from lamcong.subst import freshen, subst_capture_free
from lamcong.terms import Abs, App, Var, intern, parse_term
from lamcong.varsets import proviso_beta

from oracles import alpha_eq, corpus, to_debruijn

x, y, z = intern("x"), intern("y"), intern("z")
PRE, LAM, EXT = TheoryMode.PRELAMBDA, TheoryMode.LAMBDA, TheoryMode.EXTENSIONAL
P = parse_term


@pytest.mark.parametrize(
    "text, rule, result, path",
    [
        ("(\\x.x) (y z)", "beta1", "y z", "ε"),
        ("(\\x.y) z", "beta2", "y", "ε"),
        ("(\\x.y x) z", "beta3", "(\\x.y) z ((\\x.x) z)", "ε"),
        ("(\\x.\\x.y) z", "beta4", "\\x.y", "ε"),
        ("(\\x.\\y.x) z", "beta5", "\\y.(\\x.x) z", "ε"),
        ("w ((\\x.x) y)", "beta1", "w y", "1"),
    ],
)
def test_single_steps(text, rule, result, path):
    t, r, p = reduce_step(P(text), PRE)
    assert (t, r, p) == (P(result), rule, path)


def test_eta_only_in_extensional_mode():
    t = P("\\x.y x")
    assert reduce_step(t, PRE) is None
    assert reduce_step(t, EXT)[:2] == (Var(y), "eta")
    assert reduce_step(P("\\x.x x"), EXT) is None


def test_beta5_blocked_in_prelambda_renamed_elsewhere():
    t = P("(\\x.\\y.x) y")
    assert reduce_step(t, PRE) is None
    nt, rule, _ = reduce_step(t, LAM)
    assert rule == "alpha+beta5"
    assert nt.binder not in {x, y}
    assert normalize(t, LAM).term == Abs(nt.binder, Var(y))


def test_normalize_examples():
    r = normalize(P("(\\x.y) x"), PRE)
    assert r.normal and r.term == Var(y) and r.steps == 1
    assert normalize(P("(\\x.\\y.x y) z"), LAM).term == P("\\y.z y")


def test_omega_exhausts_fuel():
    r = normalize(P("(\\x.x x)(\\x.x x)"), PRE, fuel=200)
    assert r.status is Status.FUEL_EXHAUSTED
    first = normalize(P("(\\x.x x)(\\x.x x)"), PRE, fuel=3, trace=True)
    assert [s.rule for s in first.trace] == ["beta3", "beta1", "beta1"]
    outer = normalize(P("(\\x.x x)(\\x.x x)"), PRE, fuel=3, trace=True, strategy="outermost")
    assert [s.rule for s in outer.trace] == ["beta3", "beta1", "beta3"]


def test_finishing_a_substitution_avoids_outermost_loop():
    t = P("(\\y.(\\x.x z) y) (w w)")
    r = normalize(t, PRE, 2000)
    assert r.normal and r.term == P("w w z")
    loop = normalize(t, PRE, 2000, strategy="outermost")
    assert loop.status is Status.FUEL_EXHAUSTED and "size" in loop.reason
    t = P("(\\y.(\\x.y) x) (z y)")
    assert normalize(t, PRE).term == P("z y")
    with pytest.raises(ValueError):
        normalize(t, PRE, strategy="sideways")


def test_finishing_phase_trace_paths():
    r = normalize(P("(\\x.x x)(\\x.x x)"), PRE, fuel=3, trace=True)
    assert [s.path for s in r.trace] == ["ε", "0", "1"]


def test_growing_term_stops_at_depth_limit(monkeypatch):
    monkeypatch.setattr(calculus, "MAX_DEPTH", 60)
    t = P("(\\x.f (x x))(\\x.f (x x))")
    r = normalize(t, PRE, fuel=100_000)
    assert r.status is Status.FUEL_EXHAUSTED
    assert "depth" in r.reason and r.steps < 100_000
    assert isinstance(equivalent(t, t, PRE, 100_000), Unknown)
    assert "depth" in traditional_normalize(t, 100_000).reason


def test_trace_format():
    r = normalize(P("(\\x.\\y.x y) z"), LAM, trace=True)
    lines = format_trace(r)
    assert lines[0].startswith("step 1: beta5 at ε ⇒ ")
    assert len(lines) == r.steps


def test_fuel_from_environment(monkeypatch):
    monkeypatch.setenv("LAMCONG_FUEL", "7")
    assert default_fuel() == 7
    assert normalize(P("(\\x.x x)(\\x.x x)")).steps == 7
    monkeypatch.setenv("LAMCONG_FUEL", "lots")
    with pytest.raises(ValueError):
        default_fuel()


def test_alpha_canonical():
    assert alpha_canonical(P("\\x.x")) == alpha_canonical(P("\\y.y"))
    assert alpha_canonical(P("\\x.x z")) == alpha_canonical(P("\\y.y z"))
    assert alpha_canonical(P("\\x.x z")) != alpha_canonical(P("\\x.x w"))
    t = P("(\\x.\\y.x) y")
    assert alpha_equivalent(t, freshen(t, Var(y)))
    # a free v0 must not be captured by a renamed binder
    assert not alpha_equivalent(P("\\x.v0"), P("\\x.x"))
    assert alpha_canonical(P("\\x.v0")) != alpha_canonical(P("\\x.x"))


def test_alpha_canonical_matches_de_bruijn_on_corpus():
    terms = corpus(5)
    canon = {}
    for t in terms:
        canon.setdefault(alpha_canonical(t), []).append(t)
    for group in canon.values():
        assert all(alpha_eq(group[0], t) for t in group)
    assert len(canon) == len({to_debruijn(t) for t in terms})


def test_equivalent_examples():
    assert isinstance(equivalent(P("\\x.x"), P("\\y.y"), PRE), DistinctNormalForms)
    assert isinstance(equivalent(P("\\x.x"), P("\\y.y"), LAM), Equal)
    assert isinstance(equivalent(Var(y), P("\\x.y x"), EXT), Equal)
    assert isinstance(equivalent(P("(\\x.x x)(\\x.x x)"), Var(y), PRE, 50), Unknown)


def test_independent_examples():
    assert independent(y, Var(x), PRE) == Yes("nonfree")
    assert isinstance(independent(y, Var(x), PRE, fast_path=False), Yes)
    assert isinstance(independent(x, P("\\x.y x"), PRE, fast_path=False), Yes)
    a = P("(\\x.y) x")
    v = independent(x, a, PRE)
    assert isinstance(v, Yes) and v.method == "rewrite"
    assert isinstance(independent(x, Var(x), PRE), Unknown)


def test_traditional_steps():
    t = traditional_beta_step(P("(\\x.\\y.x) y"))
    assert isinstance(t, Abs) and t.binder not in {x, y} and t.body == Var(y)
    assert traditional_beta_step(P("(\\x.x) (y y)")) == P("y y")
    for a in corpus(4):
        for d in corpus(3):
            if proviso_beta(a, d):
                assert traditional_beta_step(App(Abs(x, a), d)) == subst_capture_free(d, x, a)


def test_traditional_normalize_with_eta():
    r = traditional_normalize(P("\\x.y x"), eta=True)
    assert r.term == Var(y)


def test_normal_forms_have_no_redexes():
    for t in corpus(5):
        for mode in (PRE, LAM, EXT):
            r = normalize(t, mode, 500)
            if r.normal:
                assert is_normal(r.term, mode)


def test_theory_mode_parse():
    assert TheoryMode.parse("lambda") is LAM
    assert TheoryMode.parse("extensional") is EXT
    with pytest.raises(ValueError):
        TheoryMode.parse("nope")
