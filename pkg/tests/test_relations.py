from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from adeliceis.relations import relation_module, rewrite_terms


def test_rewrite_terms_shape():
    terms = rewrite_terms((3, 0), 9, 3, 1)
    assert len(terms) == 9 and {c for _, c in terms} == {3}
    assert sorted(t for t, _ in terms) == sorted(((1 + 3 * a) % 9, (3 * b) % 9)
                                                 for a in range(3) for b in range(3))
    with pytest.raises(ValueError):
        rewrite_terms((1, 0), 9, 3, 0)
    with pytest.raises(ValueError):
        rewrite_terms((3, 0), 9, 2, 0)


@pytest.mark.parametrize("N,k", [(9, 0), (9, 1), (21, 0), (21, 2), (63, 1)])
def test_every_rewrite_is_in_the_relation_module(N, k):
    R = relation_module(1, N, k, 5)
    for u in product(range(N), repeat=2):
        if not any(u):
            continue
        for d in (3, 7, 9, 21, 63):
            if N % d == 0 and all(x % d == 0 for x in u):
                vec = {u: Fraction(1)}
                for t, c in rewrite_terms(u, N, d, k):
                    vec[t] = vec.get(t, 0) - c
                assert R.reduce(vec) == {}, (u, d)


def _vec(coeffs):
    return {u: Fraction(c) for u, c in coeffs.items() if c}


SYMS = [u for u in product(range(21), repeat=2) if any(u)]


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.sampled_from(SYMS), st.integers(-4, 4), max_size=5),
       st.dictionaries(st.sampled_from(SYMS), st.integers(-4, 4), max_size=5),
       st.sampled_from([0, 1, 2]))
def test_reduction_is_linear_and_idempotent(a, b, k):
    R = relation_module(1, 21, k, 5)
    ra, rb = R.reduce(_vec(a)), R.reduce(_vec(b))
    assert R.reduce(ra) == ra
    s = dict(_vec(a))
    for t, c in _vec(b).items():
        s[t] = s.get(t, 0) + c
    total = dict(ra)
    for t, c in rb.items():
        total[t] = total.get(t, 0) + c
    assert R.reduce({t: c for t, c in s.items() if c}) == R.reduce({t: c for t, c in total.items() if c})


def test_prime_power_levels_have_no_torsion():
    for N in (9, 27):
        for k in (0, 1, 2):
            assert not relation_module(1, N, k, 5).torsion()
