from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from adeliceis.arith import divisors
from adeliceis.cosets import CompactOpenSet
from adeliceis.matrix import identity, mat_vec
from adeliceis.orbits import (euclidean_reduce, fixed_vectors, global_orbit_set,
                              invariant_set_to_orbit_sum, local_orbit, orbit_bfs_oracle,
                              sphere_difference_decomposition)
from adeliceis.symplectic import (CongruenceSubgroup, generators_mod_N, is_symplectic_similitude,
                                  kernel_generators)


def test_euclidean_examples():
    alpha, W = euclidean_reduce((4, 6))
    assert alpha == 2 and mat_vec(W, (4, 6)) == (2, 0)
    assert euclidean_reduce((0, 5, 0, 3))[0] == 1
    assert euclidean_reduce((0, 0)) == (0, identity(2))


@given(st.lists(st.integers(-100, 100), min_size=2, max_size=2)
       | st.lists(st.integers(-100, 100), min_size=4, max_size=4))
def test_euclidean_property(v):
    from math import gcd
    alpha, W = euclidean_reduce(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    assert alpha == g
    assert list(mat_vec(W, v)) == [g] + [0] * (len(v) - 1)
    ok, c = is_symplectic_similitude(W)
    assert ok and c in (1, -1)


def test_local_orbit_examples():
    d = local_orbit((1, 0), 3, 1, 3)
    assert (d.kind, d.exponent, d.base) == ("coset", 1, (1, 0))
    assert len(d.residues(3)) == 81
    assert d.residues(3) == orbit_bfs_oracle((1, 0), kernel_generators(1, 27, 3), 27)
    d = local_orbit((3, 0), 3, 0, 2)
    assert (d.kind, d.exponent) == ("sphere", 1)
    assert d.residues(2) == orbit_bfs_oracle((3, 0), generators_mod_N(1, 9), 9)
    assert len(d.residues(2)) == 8
    assert len(local_orbit((1, 0), 3, 0, 1).residues(1)) == 8


def test_global_orbit_examples():
    assert len(global_orbit_set((1, 0), 1, 3)) == 8
    C = global_orbit_set((1, 0), 3, 9)
    assert len(C) == 9 and all(v[0] % 3 == 1 and v[1] % 3 == 0 for v in C.residues)
    assert global_orbit_set((3, 0), 3, 9).residues == frozenset({(3, 0)})


def test_oracle_trivial_cases():
    assert len(orbit_bfs_oracle((1, 0), generators_mod_N(1, 3), 3)) == 8
    assert orbit_bfs_oracle((2, 5), [], 9) == frozenset({(2, 5)})
    assert orbit_bfs_oracle((0, 0), generators_mod_N(1, 9), 9) == frozenset({(0, 0)})


@pytest.mark.parametrize("N", [9, 21])
def test_closed_form_matches_oracle(N):
    for M in divisors(N):
        gens = kernel_generators(1, N, M)
        for v in product(range(N), repeat=2):
            assert global_orbit_set(v, M, N).residues == orbit_bfs_oracle(v, gens, N)


def test_genus2_closed_form():
    for M in (1, 3):
        gens = kernel_generators(2, 3, M)
        for v in product(range(3), repeat=4):
            assert global_orbit_set(v, M, 3).residues == orbit_bfs_oracle(v, gens, 3)


def test_invariant_set_to_orbits():
    G3 = CongruenceSubgroup.full(1, 3)
    nz = frozenset(v for v in product(range(3), repeat=2) if any(v))
    orbs = invariant_set_to_orbit_sum(CompactOpenSet(1, 1, 3, nz), G3)
    assert len(orbs) == 1 and orbs[0][1].residues == nz
    K9 = CongruenceSubgroup.principal_subgroup(1, 9)
    C = CompactOpenSet(1, 1, 9, frozenset({(1, 0), (2, 2), (0, 3)}))
    assert len(invariant_set_to_orbit_sum(C, K9)) == 3
    two = frozenset(v for v in product(range(9), repeat=2) if any(x % 3 for x in v) or
                    (any(v) and all(x % 3 == 0 for x in v)))
    orbs = invariant_set_to_orbit_sum(CompactOpenSet(1, 1, 9, two), CongruenceSubgroup.full(1, 9))
    assert sorted(len(o) for _, o in orbs) == [8, 72]


def _signed_sum(terms, N):
    total = {}
    for sign, c in terms:
        for r in c.as_set().in_frame(1, N):
            total[r] = total.get(r, 0) + sign
    return {r for r, x in total.items() if x}, set(total.values()) - {0}


def test_sphere_differences():
    terms = sphere_difference_decomposition((1, 0), 1, 3)
    assert sorted((s, c.level, c.residue) for s, c in terms) == [(-1, 3, (0, 0)), (1, 1, (0, 0))]
    terms = sphere_difference_decomposition((1, 0), 3, 9)
    assert [(s, c.level, c.residue) for s, c in terms] == [(1, 3, (1, 0))]
    terms = sphere_difference_decomposition((3, 0), 1, 9)
    assert sorted((s, c.level) for s, c in terms) == [(-1, 9), (1, 3)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(1, 3), (1, 9), (3, 9), (1, 21), (3, 21), (7, 21), (3, 63), (1, 63)]),
       st.integers(0, 62), st.integers(0, 62))
def test_sphere_difference_sums_to_orbit(MN, a, b):
    M, N = MN
    v = (a % N, b % N)
    support, values = _signed_sum(sphere_difference_decomposition(v, M, N), N)
    assert support == set(global_orbit_set(v, M, N).residues)
    assert values <= {1}


def test_fixed_vectors():
    got = fixed_vectors(kernel_generators(1, 9, 3), 9, 1)
    assert got == frozenset(v for v in product(range(9), repeat=2) if v[0] % 3 == 0 == v[1] % 3)
