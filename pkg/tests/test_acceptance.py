"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]`` or ``[FAIL]`` line with its measured
numbers and runtime against the allowed limit, then asserts.  Run
``pytest -s tests/test_acceptance.py`` or ``python tests/test_acceptance.py``
to see the lines on their own.
"""

import random
import sys
import time
from contextlib import contextmanager

from lamcong.calculus import (
    DistinctNormalForms,
    Equal,
    TheoryMode,
    Unknown,
    Yes,
    alpha_canonical,
    equivalent,
    independent,
    normalize,
    traditional_beta_step,
    traditional_equivalent,
    traditional_normalize,
)
from lamcong.derivations import validate
from lamcong.model import (
    BETA_RULES,
    Atom,
    Separated,
    beta_instances,
    check_beta_soundness,
    random_environment,
    refute,
)
from lamcong.proofs import SCRIPTS, script
from lamcong.subst import subst_capture_free, subst_simple
from lamcong.terms import Abs, App, Var, parse_term
from lamcong.varsets import nonfree, proviso_beta

import test_properties
from oracles import WINDOW3, W, X, Y, Z, corpus, terms_of_size

PRE, LAM, EXT = TheoryMode.PRELAMBDA, TheoryMode.LAMBDA, TheoryMode.EXTENSIONAL
P = parse_term
CORPUS_SIZE = 7


def _pairs_with_proviso():
    """(A, D) with size(A) + size(D) <= 7 and the beta proviso."""
    by_size = {n: terms_of_size(n) for n in range(1, CORPUS_SIZE + 1)}
    for size_a in range(1, CORPUS_SIZE):
        for size_d in range(1, CORPUS_SIZE + 1 - size_a):
            for a in by_size[size_a]:
                for d in by_size[size_d]:
                    if proviso_beta(a, d):
                        yield a, d


class Outcome:
    def __init__(self):
        self.ok = True
        self.detail = ""


@contextmanager
def criterion(number, title, limit_s, capsys=None):
    out = Outcome()
    start = time.perf_counter()
    try:
        yield out
    except AssertionError as e:
        out.ok = False
        out.detail = out.detail or f"assertion failed: {e}"
    finally:
        elapsed = time.perf_counter() - start
        in_time = elapsed < limit_s
        verdict = "PASS" if out.ok and in_time else "FAIL"
        line = f"[{verdict}] criterion {number} {title}: {out.detail} ({elapsed:.1f} s, limit {limit_s} s)"
        if capsys is not None:
            with capsys.disabled():
                print("\n" + line)
        else:
            print(line)
    assert out.ok, line
    assert in_time, line


def test_1_prelambda_separates_identities(capsys):
    with criterion(1, "prelambda keeps λx.x and λy.y apart", 1, capsys) as out:
        a, b = P("\\x.x"), P("\\y.y")
        verdict = equivalent(a, b, PRE)
        rng = random.Random(1)
        envs = [random_environment(rng, (X, Y, Z)) for _ in range(20)]
        witnesses = [refute(a, b, [sigma]) for sigma in envs]
        separated = sum(isinstance(s, Separated) and s.formula == Atom(X) for s in witnesses)
        out.detail = f"verdict {type(verdict).__name__}, separated by atom x under {separated} of {len(envs)} environments"
        assert isinstance(verdict, DistinctNormalForms)
        assert separated == len(envs) >= 20


def test_2_alpha_recovered_in_lambda_mode(capsys):
    with criterion(2, "lambda mode identifies λx.x and λy.y", 1, capsys) as out:
        verdict = equivalent(P("\\x.x"), P("\\y.y"), LAM)
        d = script("idprop", {"x": "x", "y": "y"})
        in_lambda, in_pre = validate(d, "lambda"), validate(d, "pre")
        out.detail = (
            f"verdict {type(verdict).__name__}, derivation of {d.size()} nodes "
            f"valid in lambda: {bool(in_lambda)}, valid in pre: {bool(in_pre)}"
        )
        assert isinstance(verdict, Equal)
        assert in_lambda and not in_pre


def test_3_beta_conditions_agree_with_substitution(capsys):
    with criterion(3, "beta conditions reach the substitution result", 120, capsys) as out:
        total = equal = exhausted = distinct = 0
        for a, d in _pairs_with_proviso():
            for x in WINDOW3:
                total += 1
                v = equivalent(App(Abs(x, a), d), subst_simple(d, x, a), PRE, 10_000)
                if isinstance(v, Equal):
                    equal += 1
                elif isinstance(v, Unknown):
                    exhausted += 1
                else:
                    distinct += 1
        rate = exhausted / total
        out.detail = (
            f"{total} instances, {equal} Equal, {distinct} distinct, "
            f"{exhausted} fuel-exhausted ({100 * rate:.3f}%)"
        )
        assert distinct == 0 and equal + exhausted == total
        assert rate < 0.01


def test_4_substitutions_coincide_under_proviso(capsys):
    with criterion(4, "simple and capture-free substitution coincide", 30, capsys) as out:
        total = same = 0
        for a, d in _pairs_with_proviso():
            for x in WINDOW3:
                total += 1
                same += subst_simple(d, x, a) == subst_capture_free(d, x, a)
        a = P("\\y.x")
        simple = subst_simple(Var(Y), X, a)
        careful = subst_capture_free(Var(Y), X, a)
        out.detail = (
            f"{same} of {total} agree; on y for x in λy.x: simple gives {simple}, capture-free gives {careful}"
        )
        assert same == total
        assert simple == P("\\y.y")
        assert isinstance(careful, Abs) and careful.binder not in {X, Y} and careful.body == Var(Y)


def test_5_nonfree_variables_are_independent(capsys):
    with criterion(5, "independence by rewriting for every non-free variable", 120, capsys) as out:
        checked = failures = 0
        for a in corpus(CORPUS_SIZE):
            nf = nonfree(a)
            for v in (X, Y, Z, W):
                if v in nf:
                    checked += 1
                    r = independent(v, a, PRE, fast_path=False)
                    failures += not (isinstance(r, Yes) and r.method == "rewrite")
        example = P("(\\x.y) x")
        r = independent(X, example, PRE)
        out.detail = (
            f"{checked} checks, {failures} failures; [λx.y]x: {r.method if isinstance(r, Yes) else r}, "
            f"x non-free there: {X in nonfree(example)}"
        )
        assert failures == 0
        assert isinstance(r, Yes) and X not in nonfree(example)


EXTENSIONALITY_SCRIPTS = {
    "thmalpha": {"x": "x", "A": "x", "y": "y", "B": "y", "z": "z"},
    "thmalpha_converse": {"x": "x", "y": "y", "A": "x z", "D": "w w"},
    "propeqext2_converse": {"x": "x", "y": "y", "D": "z"},
    "alpha": {"x": "x", "y": "y", "A": "x z"},
    "alpharev": {"x": "x", "y": "y", "A": "x z"},
    "propeta": {"A": "x z", "y": "y", "x": "w"},
}


def _extensionality_scripts():
    from lamcong.derivations import beta1, sym, trans
    from lamcong.proofs import eta_instance_applications, independence_of_nonfree

    x, y, z = X, Y, Z
    out = dict(EXTENSIONALITY_SCRIPTS)
    out["thmalpha"] = dict(out["thmalpha"], premise=trans(beta1(x, Var(z)), sym(beta1(y, Var(z)))))
    out["thmalpha_converse"] = dict(out["thmalpha_converse"], premise=independence_of_nonfree(y, P("x z"), x))
    out["propeqext2"] = {
        "A": "y",
        "B": "\\x.y x",
        "z": "z",
        "premise": eta_instance_applications(x, y, Var(z)),
    }
    return out


def test_6_extensionality_equivalences(capsys):
    with criterion(6, "extensionality scripts and lambda-to-extensional agreement", 60, capsys) as out:
        scripts = _extensionality_scripts()
        bad_scripts = [name for name, b in scripts.items() if not validate(script(name, b), SCRIPTS[name].mode)]
        eta = equivalent(Var(Y), P("\\x.y x"), EXT)
        classes = {}
        exhausted = 0
        for t in corpus(CORPUS_SIZE):
            r = normalize(t, LAM)
            if not r.normal:
                exhausted += 1
                continue
            classes.setdefault(alpha_canonical(r.term), []).append(t)
        split = 0
        pairs = 0
        for group in classes.values():
            if len(group) > 1:
                pairs += len(group) * (len(group) - 1) // 2
                forms = {alpha_canonical(normalize(t, EXT).term) for t in group}
                split += len(forms) > 1
        out.detail = (
            f"{len(scripts) - len(bad_scripts)} of {len(scripts)} scripts valid, "
            f"y vs λx.y x: {type(eta).__name__}, {pairs} lambda-equal pairs in {len(classes)} classes, "
            f"{split} classes split in extensional mode"
        )
        assert not bad_scripts
        assert isinstance(eta, Equal)
        assert split == 0 and exhausted == 0


def test_7_model_validates_beta_conditions(capsys):
    with criterion(7, "interpretations agree on both sides of every beta condition", 300, capsys) as out:
        alphabet = (X, Y, Z)
        reports = []
        for rule in BETA_RULES:
            rng = random.Random(rule)
            instances = beta_instances(rule, 200, alphabet, rng)
            samples = [random_environment(rng, alphabet) for _ in range(2)]
            reports.append(check_beta_soundness(rule, instances, samples, rank_bound=3, alphabet=alphabet))
        test_properties.test_update_laws()
        test_properties.test_membership_is_monotone_in_the_environment()
        found = sum(len(r.discrepancies) for r in reports)
        inexact = sum(r.inexact for r in reports)
        out.detail = (
            f"{sum(r.instances for r in reports)} instances, {sum(r.comparisons for r in reports)} comparisons, "
            f"{found} discrepancies, {inexact} inexact; update and monotonicity properties held at 1000 cases"
        )
        assert found == 0


def _random_pairs(count, seed=2024):
    rng = random.Random(seed)
    by_size = {n: terms_of_size(n) for n in range(1, 7)}

    def pick(lo=1, hi=6):
        return rng.choice(by_size[rng.randint(lo, hi)])

    while True:
        if rng.random() < 0.7:
            t = App(Abs(rng.choice(WINDOW3), pick()), pick(1, 4))
        else:
            t = App(pick(), pick())
        kind = rng.randrange(3)
        if kind == 0:
            u = traditional_beta_step(t) or t
        elif kind == 1:
            u = traditional_normalize(t, 200).term
        else:
            u = App(pick(), pick())
        if traditional_normalize(t, 1000).normal and traditional_normalize(u, 1000).normal:
            yield t, u
            count -= 1
            if not count:
                return


def test_8_lambda_mode_matches_ordinary_beta(capsys):
    with criterion(8, "lambda mode agrees with ordinary beta and renaming", 180, capsys) as out:
        both = disagree = equal = 0
        for a, b in _random_pairs(500):
            mine = equivalent(a, b, LAM, 10_000)
            theirs = traditional_equivalent(a, b, 10_000)
            if isinstance(mine, Unknown) or isinstance(theirs, Unknown):
                continue
            both += 1
            equal += isinstance(theirs, Equal)
            disagree += isinstance(mine, Equal) != isinstance(theirs, Equal)
        out.detail = f"500 pairs, {both} definitive on both sides ({equal} equal), {disagree} disagreements"
        assert disagree == 0


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_")):
        try:
            fn(None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
