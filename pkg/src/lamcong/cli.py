"""Command-line front end.

Exit status: 0 for success, Equal, Valid or NotSeparated.  1 for Distinct,
Invalid, Separated or a soundness discrepancy.  2 for bad input.  3 when the
answer is unknown because the fuel or step budget ran out.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from . import calculus, derivations, model, proofs
from .calculus import TheoryMode
from .terms import TermSyntaxError, intern, parse_term, print_term, term_size, variables
from .varsets import bound_vars, finite, free_vars, nonbound, nonfree

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    pass


def _term(text: str):
    try:
        return parse_term(text)
    except TermSyntaxError as e:
        raise InputError(f"syntax error: {e.message} at position {e.position}\n{e.caret()}") from None


def _show(t, args) -> str:
    style = getattr(args, "style", "minimal")
    lam = "\\" if getattr(args, "ascii", False) else "λ"
    return print_term(t, style=style, lam=lam)


# --- term commands ----------------------------------------------------------


def cmd_parse(args) -> int:
    print(f"OK: {_show(_term(args.term), args)}")
    return EXIT_OK


def cmd_print(args) -> int:
    print(_show(_term(args.term), args))
    return EXIT_OK


def cmd_vars(args) -> int:
    t = _term(args.term)
    print(f"free: {finite(free_vars(t)).render()}; bound: {finite(bound_vars(t)).render()}")
    print(f"nonfree: {nonfree(t).render()}")
    print(f"nonbound: {nonbound(t).render()}")
    print(f"independent without rewriting: {nonfree(t).render()}")
    return EXIT_OK


LAST_TERM_CHARS = 400


def cmd_normalize(args) -> int:
    t = _term(args.term)
    result = calculus.normalize(
        t,
        args.theory,
        args.fuel,
        trace=args.trace,
        beta5_normalize=args.beta5_normalize,
        strategy=args.strategy,
    )
    if args.trace:
        for line in calculus.format_trace(result, "minimal"):
            print(line)
    if result.normal:
        print(f"normal form: {_show(result.term, args)}")
        print(f"steps: {result.steps}")
        return EXIT_OK
    print(f"FuelExhausted after {result.steps} steps{': ' + result.reason if result.reason else ''}")
    last = _show(result.term, args)
    if len(last) > LAST_TERM_CHARS:
        last = f"{last[:LAST_TERM_CHARS]}... ({term_size(result.term)} nodes)"
    print(f"last term: {last}")
    return EXIT_UNKNOWN


def cmd_eq(args) -> int:
    a, b = _term(args.left), _term(args.right)
    if args.traditional:
        verdict = calculus.traditional_equivalent(a, b, args.fuel, eta=args.theory is TheoryMode.EXTENSIONAL)
    else:
        verdict = calculus.equivalent(
            a, b, args.theory, args.fuel, beta5_normalize=args.beta5_normalize, strategy=args.strategy
        )
    if isinstance(verdict, calculus.Equal):
        print(f"Equal: both reach {_show(verdict.normal_form, args)}")
        return EXIT_OK
    if isinstance(verdict, calculus.DistinctNormalForms):
        print(f"Distinct: {_show(verdict.left, args)} vs {_show(verdict.right, args)}")
        return EXIT_NO
    print(f"Unknown: {verdict.reason}")
    return EXIT_UNKNOWN


def cmd_independent(args) -> int:
    t = _term(args.term)
    x = _var(args.var)
    verdict = calculus.independent(x, t, args.theory, args.fuel, fast_path=not args.no_fast_path)
    if isinstance(verdict, calculus.Yes):
        extra = f" with z = {verdict.z}" if verdict.z is not None else ""
        print(f"Yes ({verdict.method}{extra})")
        return EXIT_OK
    print(f"Unknown: {verdict.reason}")
    return EXIT_UNKNOWN


def _var(name: str):
    try:
        return intern(name)
    except ValueError:
        raise InputError(f"not a variable name: {name!r}") from None


# --- derivations ------------------------------------------------------------


def cmd_check(args) -> int:
    try:
        d = derivations.load_derivation(args.file)
    except OSError as e:
        raise InputError(f"cannot read {args.file}: {e.strerror}") from None
    except derivations.FormatError as e:
        raise InputError(f"format error at {e.location}: {e.message}") from None
    verdict = derivations.validate(d, args.mode)
    print(verdict)
    return EXIT_OK if verdict else EXIT_NO


def _parse_bindings(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            name, sep, value = part.partition("=")
            if not sep:
                raise InputError(f"binding {part!r} is not of the form name=value")
            out[name.strip()] = value.strip().strip('"').strip("'")
    return out


def cmd_script(args) -> int:
    if args.list or not args.name:
        for entry in proofs.SCRIPTS.values():
            print(f"{entry.name} [{entry.mode.value}] ({', '.join(entry.params)}): {entry.doc}")
        return EXIT_OK
    bindings = _parse_bindings(args.bind)
    try:
        d = proofs.script(args.name, bindings)
    except derivations.BindingError as e:
        raise InputError(f"binding error: {e}") from None
    except (OSError, derivations.FormatError) as e:
        raise InputError(f"cannot load premise: {e}") from None
    mode = proofs.SCRIPTS[args.name].mode
    if args.out:
        derivations.save_derivation(d, args.out)
        print(f"wrote {args.out}: {d.conclusion} ({d.size()} nodes, {mode.value} mode)", file=sys.stderr)
    else:
        sys.stdout.write(derivations.dumps(d))
    return EXIT_OK


# --- model ------------------------------------------------------------------


def _env(text: str | None) -> model.Environment:
    if not text:
        return model.Environment()
    try:
        if Path(text).is_file():
            return model.load_environment(text)
        return model.parse_environment(text)
    except (ValueError, model.FormulaSyntaxError) as e:
        raise InputError(f"bad environment: {e}") from None


def _formula(text: str) -> model.Formula:
    try:
        return model.parse_formula(text)
    except model.FormulaSyntaxError as e:
        raise InputError(f"bad formula: {e}") from None


def _budget(args) -> model.SearchBudget:
    return model.SearchBudget(width=args.width, steps=args.steps)


def cmd_model_member(args) -> int:
    verdict = model.member(_formula(args.formula), _term(args.term), _env(args.env), _budget(args))
    print(verdict)
    return EXIT_UNKNOWN if verdict is model.Membership.UNKNOWN else EXIT_OK


def cmd_model_enum(args) -> int:
    t = _term(args.term)
    sigma = _env(args.env)
    alphabet = [_var(v) for v in args.alphabet.split(",")] if args.alphabet else None
    result = model.enumerate_interpretation(t, sigma, alphabet, args.rank, _budget(args))
    for f in result:
        print(model.format_formula(f))
    print(f"{len(result)} formulas, {'exact' if result.exact else 'inexact'}")
    return EXIT_OK if result.exact else EXIT_UNKNOWN


def _samples(rng: random.Random, count: int, alphabet) -> list[model.Environment]:
    envs = [model.Environment()]
    while len(envs) < count:
        envs.append(model.random_environment(rng, alphabet))
    return envs[:count]


def cmd_model_refute(args) -> int:
    a, b = _term(args.left), _term(args.right)
    alphabet = sorted(variables(a) | variables(b))
    rng = random.Random(args.seed)
    samples = [_env(args.env)] if args.env else _samples(rng, args.samples, alphabet)
    separated = []
    exact = True
    for sigma in samples:
        result = model.refute(a, b, [sigma], _budget(args), rank_bound=args.rank)
        if isinstance(result, model.Separated):
            separated.append(result)
        elif not result.exact:
            exact = False
    if separated:
        first = separated[0]
        print(first)
        print(f"witness: {model.format_formula(first.formula)}")
        print(f"separated under {len(separated)} of {len(samples)} environments")
        return EXIT_NO
    print(f"NotSeparated under {len(samples)} environments ({'exact' if exact else 'some unknown'})")
    return EXIT_OK if exact else EXIT_UNKNOWN


def cmd_model_soundness(args) -> int:
    rng = random.Random(args.seed)
    names = ["x", "y", "z"][: args.alphabet_size]
    alphabet = [intern(n) for n in names]
    rules = model.BETA_RULES if args.rule == "all" else (args.rule,)
    bad = 0
    for rule in rules:
        start = time.perf_counter()
        instances = model.beta_instances(rule, args.samples, alphabet, rng)
        found = []
        comparisons = inexact = 0
        for lhs, rhs in instances:
            sigma = model.random_environment(rng, alphabet)
            rep = model.check_beta_soundness(rule, [(lhs, rhs)], [sigma], _budget(args), rank_bound=args.rank)
            comparisons += rep.comparisons
            inexact += rep.inexact
            found.extend(rep.discrepancies)
        total = model.SoundnessReport(rule, len(instances), comparisons, inexact, tuple(found))
        print(f"{total} ({time.perf_counter() - start:.1f}s)")
        for d in found[:5]:
            print(f"  {d}")
        bad += len(found)
    print(f"{bad} discrepancies")
    return EXIT_OK if bad == 0 else EXIT_NO


# --- argument parsing -------------------------------------------------------


def _theory(text: str) -> TheoryMode:
    try:
        return TheoryMode.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _check_mode(text: str) -> derivations.CheckMode:
    try:
        return derivations.CheckMode.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lamcong", description="Lambda terms under substitution-free beta conditions.")
    p.add_argument("--seed", type=int, default=0, help="seed for every sampling step")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def term_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("term")
        sp.add_argument("--style", choices=["minimal", "full"], default="minimal")
        sp.add_argument("--ascii", action="store_true", help="print lambda as a backslash")
        sp.set_defaults(func=func)
        return sp

    def rewriting(sp):
        sp.add_argument("--theory", type=_theory, default=TheoryMode.PRELAMBDA, help="pre, lambda or ext")
        sp.add_argument("--fuel", type=int, default=None, help="rewrite step limit (default $LAMCONG_FUEL or 10000)")
        sp.add_argument("--beta5-normalize", action="store_true", help="normalize D before testing the beta5 side condition")
        sp.add_argument(
            "--strategy",
            choices=calculus.STRATEGIES,
            default="normal",
            help="normal: finish pushing each argument through before the next redex; outermost: always leftmost-outermost",
        )

    term_cmd("parse", cmd_parse, "parse a term and echo it")
    term_cmd("print", cmd_print, "print a term in a chosen style")
    term_cmd("vars", cmd_vars, "free, bound, non-free and non-bound variables")
    sp = term_cmd("normalize", cmd_normalize, "rewrite to normal form")
    rewriting(sp)
    sp.add_argument("--trace", action="store_true")

    sp = sub.add_parser("eq", help="compare two terms by normalizing both")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--style", choices=["minimal", "full"], default="minimal")
    sp.add_argument("--ascii", action="store_true")
    sp.add_argument("--traditional", action="store_true", help="use capture-avoiding beta instead")
    rewriting(sp)
    sp.set_defaults(func=cmd_eq)

    sp = sub.add_parser("independent", help="is [λx.A]z convertible with A for some z != x")
    sp.add_argument("var")
    sp.add_argument("term")
    sp.add_argument("--no-fast-path", action="store_true")
    rewriting(sp)
    sp.set_defaults(func=cmd_independent)

    sp = sub.add_parser("check", help="validate a derivation file")
    sp.add_argument("file")
    sp.add_argument("--mode", type=_check_mode, default=derivations.CheckMode.PRELAMBDA)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("script", help="build a named derivation")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--bind", action="append", default=[], help="name=value pairs, comma separated")
    sp.add_argument("--out", help="write here instead of stdout")
    sp.add_argument("--list", action="store_true")
    sp.set_defaults(func=cmd_script)

    mp = sub.add_parser("model", help="the graph model")
    msub = mp.add_subparsers(dest="model_command", required=True, parser_class=_Parser)

    def budgeted(sp):
        sp.add_argument("--width", type=int, default=2, help="antecedent size cap for enumeration")
        sp.add_argument("--steps", type=int, default=10_000, help="head-reduction step budget")

    sp = msub.add_parser("member")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--term", required=True)
    sp.add_argument("--env", help="JSON object or a file holding one")
    budgeted(sp)
    sp.set_defaults(func=cmd_model_member)

    sp = msub.add_parser("enum")
    sp.add_argument("--term", required=True)
    sp.add_argument("--env")
    sp.add_argument("--alphabet", help="comma separated variables")
    sp.add_argument("--rank", type=int, default=2)
    budgeted(sp)
    sp.set_defaults(func=cmd_model_enum)

    sp = msub.add_parser("refute")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--env", help="use this environment instead of sampling")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--rank", type=int, default=2)
    budgeted(sp)
    sp.set_defaults(func=cmd_model_refute)

    sp = msub.add_parser("soundness")
    sp.add_argument("--rule", choices=[*model.BETA_RULES, "all"], default="all")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--rank", type=int, default=2)
    sp.add_argument("--alphabet-size", type=int, choices=[1, 2, 3], default=3)
    budgeted(sp)
    sp.set_defaults(func=cmd_model_soundness)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # usage errors and --help end here
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
