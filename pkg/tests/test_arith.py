from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from adeliceis.arith import (IntegralityError, as_coefficient, coeff_arith, coeff_div, content,
                             crt_combine, divisors, factorize, is_primitive, lcm, p_valuation,
                             parse_coeff, format_coeff)
from adeliceis.matrix import (cokernel_representatives, det, mat_inv, mat_mul, identity,
                              smith_normal_form, sparse_rank)

F = Fraction


def test_coeff_arith_examples():
    assert coeff_arith(F(1, 3), F(1, 3), "add", 5) == F(2, 3)
    assert coeff_arith(F(7, 3), 0, "mul", 5) == 0
    assert coeff_arith(F(1, 2), F(2, 7), "mul", 5) == F(1, 7)


def test_coefficients_must_be_p_integral():
    with pytest.raises(IntegralityError):
        as_coefficient(F(1, 5), 5)
    with pytest.raises(IntegralityError):
        coeff_div(1, 10, 5)
    assert coeff_div(1, 3, 5) == F(1, 3)


def test_p_valuation():
    assert p_valuation(F(25, 3), 5) == 2
    assert p_valuation(1, 7) == 0
    assert p_valuation(F(7, 2), 5) == 0
    assert p_valuation(F(3, 25), 5) == -2
    with pytest.raises(ValueError):
        p_valuation(0, 5)


def test_crt():
    assert crt_combine([(1, 9), (3, 7)]) == (10, 63)
    assert crt_combine([(0, 9), (0, 7)]) == (0, 63)
    assert crt_combine([(2, 3)]) == (2, 3)
    with pytest.raises(ValueError):
        crt_combine([(1, 3), (2, 9)])


@given(st.integers(0, 8), st.integers(0, 6), st.integers(0, 10))
def test_crt_property(a, b, c):
    x, m = crt_combine([(a, 9), (b, 7), (c, 11)])
    assert m == 693 and x % 9 == a and x % 7 == b and x % 11 == c


def test_small_number_theory():
    assert factorize(63) == {3: 2, 7: 1}
    assert divisors(21) == [1, 3, 7, 21]
    assert lcm(9, 21) == 63
    assert content([0, 6, 4]) == 2
    assert is_primitive((1, 3), 9) and not is_primitive((3, 6), 9)


@given(st.fractions(max_denominator=50))
def test_coeff_text_roundtrip(q):
    assert parse_coeff(format_coeff(q)) == q


def test_smith_examples():
    _, D, _ = smith_normal_form(((1, 0), (0, 3)))
    assert [D[0][0], D[1][1]] == [1, 3]
    _, D, _ = smith_normal_form(((2, 1), (0, 2)))
    assert [D[0][0], D[1][1]] == [1, 4]
    _, D, _ = smith_normal_form(identity(2))
    assert D == identity(2)
    assert len(cokernel_representatives(((1, 0), (0, 3)))) == 3
    assert cokernel_representatives(identity(2)) == [(0, 0)]


@given(st.lists(st.integers(-9, 9), min_size=9, max_size=9))
def test_smith_property(xs):
    m = (tuple(xs[0:3]), tuple(xs[3:6]), tuple(xs[6:9]))
    if det(m) == 0:
        with pytest.raises(ValueError):
            smith_normal_form(m)
        return
    U, D, W = smith_normal_form(m)
    assert mat_mul(mat_mul(U, m), W) == D
    assert abs(det(U)) == 1 and abs(det(W)) == 1
    ds = [D[i][i] for i in range(3)]
    assert all(d > 0 for d in ds) and ds[1] % ds[0] == 0 and ds[2] % ds[1] == 0
    assert ds[0] * ds[1] * ds[2] == abs(det(m))
    assert len(cokernel_representatives(m)) == abs(det(m))


def test_inverse():
    a = ((2, 1), (1, 1))
    assert mat_mul(a, mat_inv(a)) == identity(2)


def test_sparse_rank():
    rows = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}]
    assert sparse_rank(rows) == 2
    assert sparse_rank([{0: 5}], 5) == 0
    assert sparse_rank([{0: F(1, 3)}]) == 1
    assert sparse_rank([]) == 0
