import random
from fractions import Fraction
from itertools import product

from hypothesis import given, settings, strategies as st

from adeliceis.cosets import CompactOpenSet, ElementaryCoset
from adeliceis.matrix import diag
from adeliceis.symplectic import AdelicGroupElement, CongruenceSubgroup

F = Fraction
NONZERO3 = frozenset(v for v in product(range(3), repeat=2) if any(v))


def test_refinement_and_dedup():
    C = ElementaryCoset(1, 3, (1, 0)).as_set()
    assert C.in_frame(1, 9) == frozenset(((1 + 3 * a) % 9, 3 * b) for a in range(3) for b in range(3))
    assert C.union(C) == C
    assert len(CompactOpenSet.from_cosets([ElementaryCoset(1, 3, (1, 0))] * 2)) == 1


def test_mixed_scale_union_membership():
    A = ElementaryCoset(1, 3, (1, 0)).as_set()
    B = ElementaryCoset(3, 3, (1, 0)).as_set()
    U = A.union(B)
    assert U.scale == 3
    rng = random.Random(0)
    for _ in range(200):
        x = [F(rng.randint(-30, 30), rng.choice([1, 3, 9])) for _ in range(2)]
        assert U.contains(x) == (A.contains(x) or B.contains(x))


def test_set_ops():
    V = CompactOpenSet.lattice(1)
    assert V.subtract(CompactOpenSet.lattice(1, 3)).in_frame(1, 3) == NONZERO3
    got = ElementaryCoset(1, 3, (1, 0)).as_set().intersect(ElementaryCoset(1, 9, (1, 3)).as_set())
    assert got == ElementaryCoset(1, 9, (1, 3)).as_set()


def test_apply_element():
    V = CompactOpenSet.lattice(1)
    assert V.apply_element(AdelicGroupElement.identity(1)) == V
    assert V.apply_element(AdelicGroupElement.center(1, 3)) == CompactOpenSet.lattice(1, 3)
    g = AdelicGroupElement.from_rational(diag(1, F(1, 3)))
    S = ElementaryCoset(1, 3, (1, 0)).as_set()
    # preimage under x -> g^{-1} x = diag(1,3) x
    assert S.apply_element(g, "preimage") == CompactOpenSet(1, 1, 3, frozenset({(1, 0), (1, 1), (1, 2)}))
    assert S.apply_element(g, "image") == CompactOpenSet(1, 1, 9, frozenset({(1, 0), (4, 0), (7, 0)}))


def test_invariance():
    G3 = CongruenceSubgroup.full(1, 3)
    assert CompactOpenSet(1, 1, 3, NONZERO3).is_invariant(G3)
    assert not ElementaryCoset(1, 3, (1, 0)).as_set().is_invariant(G3)
    assert ElementaryCoset(1, 9, (2, 5)).as_set().is_invariant(CongruenceSubgroup.principal_subgroup(1, 9))


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=1, max_size=12),
       st.sets(st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=1, max_size=12))
def test_set_algebra_matches_pointwise(a, b):
    A, B = CompactOpenSet(1, 1, 9, frozenset(a)), CompactOpenSet(1, 1, 9, frozenset(b))
    pts = list(product(range(9), repeat=2))
    for op, f in (("union", lambda x, y: x or y), ("intersect", lambda x, y: x and y),
                  ("subtract", lambda x, y: x and not y)):
        C = A.set_op(B, op)
        assert all(C.contains(p) == f(p in a, p in b) for p in pts)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=9),
       st.sampled_from([2, F(1, 3), 7]))
def test_image_then_preimage(a, q):
    A = CompactOpenSet(1, 1, 3, frozenset(a))
    g = AdelicGroupElement.from_rational(diag(q, 1))
    assert A.apply_element(g, "preimage").apply_element(g, "image") == A


def test_json_roundtrip():
    A = CompactOpenSet(1, 3, 9, frozenset({(1, 0), (4, 4)}))
    assert CompactOpenSet.from_json(A.to_json()) == A
