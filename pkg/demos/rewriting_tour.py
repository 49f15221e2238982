"""
Rewriting with beta conditions
==============================

Substitution is never performed in one go.  A redex [λx.M]D is taken apart
one constructor of M at a time.
"""

from lamcong import TheoryMode, equivalent, normalize, parse_term, print_term
from lamcong.calculus import format_trace

# a redex whose body is an application gets split first
t = parse_term("(\\x.\\y.x y) z")
result = normalize(t, TheoryMode.LAMBDA, trace=True)
for line in format_trace(result):
    print(line)
print("normal form:", print_term(result.term))

# without renaming, an abstraction can block the argument
stuck = parse_term("(\\x.\\y.x) y")
print(print_term(normalize(stuck, TheoryMode.PRELAMBDA).term))
print(print_term(normalize(stuck, TheoryMode.LAMBDA).term))

# the three modes disagree on the identity functions
for mode in TheoryMode:
    print(mode.value, equivalent(parse_term("\\x.x"), parse_term("\\y.y"), mode))

# eta only in the extensional mode
print(equivalent(parse_term("y"), parse_term("\\x.y x"), TheoryMode.EXTENSIONAL))

# always picking the outermost redex loops here, finishing each substitution first does not
loop = parse_term("(\\y.(\\x.x z) y) (w w)")
print(normalize(loop, strategy="outermost").reason)
print(print_term(normalize(loop).term))
