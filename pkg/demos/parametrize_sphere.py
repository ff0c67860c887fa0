"""
From Schwartz functions to Eisenstein classes
=============================================

Three independent ways to evaluate the map, and its equivariance.
"""

from itertools import product

from adeliceis.cosets import CompactOpenSet
from adeliceis.parametrize import parametrize
from adeliceis.schwartz import SchwartzFunction
from adeliceis.symplectic import AdelicGroupElement, CongruenceSubgroup

# ch(3V minus 9V), invariant under the full group at level 9
S = frozenset(v for v in product(range(9), repeat=2) if any(v) and v[0] % 3 == 0 == v[1] % 3)
phi = SchwartzFunction.from_set(CompactOpenSet(1, 1, 9, S))
G9 = CongruenceSubgroup.full(1, 9)

for path in ("canonical", "orbit", "stabilizer"):
    out = parametrize(phi, 1, G9, path)
    print(path, out.level, len(out.coeffs), set(out.coeffs.values()))

# 'all' raises unless the three paths agree term by term
E = parametrize(phi, 1, G9, "all")

# The same function is z_3 applied to ch(V minus 3V); z_3 acts by 3^k on classes
psi = SchwartzFunction.from_set(CompactOpenSet(1, 1, 3, frozenset(
    v for v in product(range(3), repeat=2) if any(v))))
z3 = AdelicGroupElement.center(1, 3)
assert psi.act(z3) == phi
print(parametrize(psi, 1, CongruenceSubgroup.full(1, 3)).act(z3) == E)

# Basis functions go to N^k times a symbol
K3 = CongruenceSubgroup.principal_subgroup(1, 3)
print(parametrize(SchwartzFunction.xi((1, 0), 3), 2, K3).to_json())
