"""
A model where renaming bound variables matters
==============================================

Formulas are atoms or sequents F |- m.  Every abstraction holds its own
bound variable as an atom, which is enough to tell λx.x from λy.y.
"""

import random

from lamcong import Atom, Environment, intern, member, parse_term, refute
from lamcong.model import beta_instances, check_beta_soundness, enumerate_interpretation, parse_formula, random_environment

x, y, z = (intern(n) for n in "xyz")

print(member(Atom(x), parse_term("\\x.x")))
print(member(Atom(x), parse_term("\\y.y")))
print(member(parse_formula("{z} |- z"), parse_term("\\x.x")))

# the whole bounded slice of an interpretation
e = enumerate_interpretation(parse_term("\\y.y"), Environment(), {y}, rank_bound=2)
print(sorted(map(str, e)), "exact" if e.exact else "partial")

# the witness is the same atom under any environment
rng = random.Random(0)
for sigma in (random_environment(rng, (x, y, z)) for _ in range(3)):
    print(refute(parse_term("\\x.x"), parse_term("\\y.y"), [sigma]))

# beta conditions hold in the model
instances = beta_instances("beta3", 20, (x, y, z), rng)
print(check_beta_soundness("beta3", instances, [Environment({x: [Atom(z)]})], rank_bound=2))
