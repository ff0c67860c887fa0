import random
from itertools import product

import pytest

from adeliceis.arith import is_primitive
from adeliceis.config import EngineConfig
from adeliceis.cosets import CompactOpenSet
from adeliceis.eisenstein import FormalEisensteinClass
from adeliceis.parametrize import PATHS, parametrize
from adeliceis.schwartz import NotInvariantError, SchwartzFunction
from adeliceis.symplectic import AdelicGroupElement, CongruenceSubgroup

eps = FormalEisensteinClass.symbol
xi = SchwartzFunction.xi


def sphere(d, N):
    return SchwartzFunction.from_set(CompactOpenSet(1, 1, N, frozenset(
        v for v in product(range(N), repeat=2) if any(v) and all(x % d == 0 for x in v))))


@pytest.mark.parametrize("path", PATHS)
def test_basis_examples(path):
    K3 = CongruenceSubgroup.principal_subgroup(1, 3)
    assert parametrize(xi((1, 0), 3), 0, K3, path).identical(eps((1, 0), 3))
    assert parametrize(xi((1, 0), 3), 2, K3, path).identical(eps((1, 0), 3, 2, 9))


def test_sphere_example_all_paths():
    G9 = CongruenceSubgroup.full(1, 9)
    got = parametrize(sphere(3, 9), 1, G9, "all")
    prim = [u for u in product(range(9), repeat=2) if is_primitive(u, 9)]
    assert len(prim) == 72
    want = FormalEisensteinClass(1, 1, 9, {u: 27 for u in prim})
    assert got == want
    # center path: z_3 . ch(V minus 3V), weight 1 picks up 3^1
    base = parametrize(sphere(1, 3), 1, CongruenceSubgroup.full(1, 3), "canonical")
    assert base.act(AdelicGroupElement.center(1, 3)) == got


def test_non_invariant_rejected():
    with pytest.raises(NotInvariantError):
        parametrize(xi((1, 0), 3), 0, CongruenceSubgroup.full(1, 3))


def test_inadmissible_level_rejected():
    with pytest.raises(ValueError):
        parametrize(xi((1, 0), 5), 0, CongruenceSubgroup.principal_subgroup(1, 5))


def test_paths_agree_on_random_functions():
    from adeliceis.acceptance import random_invariant_function, random_subgroup
    rng = random.Random(3)
    cfg = EngineConfig()
    for N in (3, 9):
        for K in (CongruenceSubgroup.principal_subgroup(1, N),
                  CongruenceSubgroup.full(1, N).stabilizer((1, 0)), random_subgroup(1, N, rng)):
            phi = random_invariant_function(K, rng, cfg.p)
            out = parametrize(phi, 1, K, "all", cfg)
            assert out.is_integral()
