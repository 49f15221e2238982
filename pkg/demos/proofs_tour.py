"""
Derivations and their checker
=============================

Build a proof of λx.x ∼ λy.y by hand, check it in two modes, then let the
script library do the same.
"""

from lamcong import Var, intern, script, validate
from lamcong.derivations import alpha_e, beta1, beta2, dumps, ell, trans

x, y = intern("x"), intern("y")

# [λy.x]x ∼ x licenses renaming λx.x to λy.([λx.x]y)
rename = alpha_e(x, y, Var(x), beta2(y, x, Var(x)))
# and [λx.x]y ∼ y under the binder
collapse = ell(y, beta1(x, Var(y)))
proof = trans(rename, collapse)
print(proof.conclusion)

# renaming is not a beta condition
print("lambda:", validate(proof, "lambda"))
print("pre:", validate(proof, "pre"))

# the same tree, as stored on disk
print(dumps(proof)[:120], "...")

# the library builds it from bindings alone
print(script("idprop", {"x": "x", "y": "y"}) == proof)

# a longer one: independence of x in A carries over to every argument
ind = script("IND", {"x": "x", "A": "y", "D": "z z", "z": "w"})
print(ind.conclusion, f"({ind.size()} nodes)", validate(ind, "pre"))
