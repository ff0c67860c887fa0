"""
Distribution relations and normal forms
=======================================

Formal Eisenstein symbols modulo e(u) = d^k sum e(x), and what happens at
composite level.
"""

from adeliceis.arith import is_primitive
from adeliceis.eisenstein import FormalEisensteinClass
from adeliceis.relations import relation_module

eps = FormalEisensteinClass.symbol

# One rewrite step: e((3,0), 9) at weight 1 becomes 3 times nine primitive symbols
x = eps((3, 0), 9, 1)
print(x.rewrite((3, 0), 3).to_json())

# Any rewrite order gives the same normal form
a = eps((21, 0), 63, 0)
by3 = a.rewrite((21, 0), 3).normal_form()
by7 = a.rewrite((21, 0), 7).normal_form()
by21 = a.rewrite((21, 0), 21).normal_form()
print("orders agree:", by3.identical(by7) and by7.identical(by21))

# Refinement is compatible with the relations
print(eps((1, 0), 3, 2).refine(9) == eps((1, 0), 3, 2))

# At prime-power level the primitive symbols span.  At composite level the
# relations also tie primitive symbols together: some non-primitive symbols stay
# free at weight 0, and at weight 2 some leads are divisible by p = 5
# (5 divides 1 - 3^12).
for N in (27, 63):
    for k in (0, 1, 2):
        R = relation_module(1, N, k, 5)
        stuck = [u for u in R.free_symbols() if not is_primitive(u, N)]
        print(f"N={N} k={k}: relations of rank {len(R.pivots)}, "
              f"free non-primitive symbols {len(stuck)}, p-torsion leads {len(R.torsion())}")
