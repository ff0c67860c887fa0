"""
Orbits of congruence subgroups on V/NV
======================================

The closed form for K_M-orbits, checked against brute force.
"""

from itertools import product

from adeliceis.orbits import (euclidean_reduce, global_orbit_set, local_orbit,
                              orbit_bfs_oracle, sphere_difference_decomposition)
from adeliceis.symplectic import kernel_generators

# Any integer vector can be moved to (gcd, 0, ..., 0) by an integral similitude
alpha, W = euclidean_reduce((4, 6))
print("gcd", alpha, "witness", W)

# Locally the orbit is either a sphere or a coset
print(local_orbit((3, 0), 3, 0, 2))
print(local_orbit((1, 0), 3, 1, 3))

# Globally the two cases are glued prime by prime.  Compare with BFS for every
# vector mod 21 and every M | 21.
for M in (1, 3, 7, 21):
    gens = kernel_generators(1, 21, M)
    sizes = set()
    for v in product(range(21), repeat=2):
        C = global_orbit_set(v, M, 21)
        assert C.residues == orbit_bfs_oracle(v, gens, 21)
        sizes.add(len(C))
    print(f"M={M}: orbit sizes {sorted(sizes)}")

# Spheres are differences of lattices, so every orbit is a signed sum of cosets
for sign, coset in sphere_difference_decomposition((3, 0), 1, 63):
    print("+" if sign > 0 else "-", coset)
