from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ..errors import InexactDivision
from ..polynomial import ONE, T, IntPolynomial

coeff_lists = st.lists(st.integers(min_value=-50, max_value=50), max_size=8)


def test_basics():
    p = IntPolynomial([1, 0, 1, 0, 0])
    assert p.coeffs == (1, 0, 1)
    assert p.degree() == 2
    assert IntPolynomial().degree() == -1
    assert IntPolynomial().is_zero()
    assert p[5] == 0
    assert IntPolynomial.monomial(3) == T ** 3
    assert IntPolynomial.parse("1, 0, 1") == p
    assert IntPolynomial.from_json(["1", "0", "1"]) == p
    assert ONE == 1
    with pytest.raises(ValueError):
        IntPolynomial([1.5])


def test_arithmetic():
    assert (ONE + T) ** 2 == IntPolynomial([1, 2, 1])
    assert (ONE + T) * (ONE - T) == ONE - T ** 2
    assert 2 * T - 1 == IntPolynomial([-1, 2])
    assert (ONE + T).shift(2) == IntPolynomial([0, 0, 1, 1])
    # big coefficients stay exact
    assert ((ONE + T) ** 200)[100] == 90548514656103281165404177077484163874504589675413336841320


def test_division():
    numerator = (ONE + T ** 3) ** 4 - T ** 4 * (ONE + T) ** 4
    denominator = (ONE - T ** 2) * (ONE - T ** 4)
    assert numerator.exact_div(denominator) == IntPolynomial([1, 0, 1, 4, 1, 0, 1])
    quot, rem = (T ** 2 + 1).divmod(T + 1)
    assert quot * (T + 1) + rem == T ** 2 + 1
    with pytest.raises(InexactDivision) as e:
        (T ** 2 + 1).exact_div(T + 1)
    assert e.value.remainder == IntPolynomial([2])
    with pytest.raises(ZeroDivisionError):
        T.divmod(IntPolynomial())


@given(coeff_lists, coeff_lists)
def test_product_divides_exactly(a, b):
    a, b = IntPolynomial(a), IntPolynomial(b) + T ** 9
    assert (a * b).exact_div(b) == a


def test_evaluation():
    p = IntPolynomial([1, 0, 2, 0, 1])
    assert p(-1) == 4
    assert p(1) == 4
    assert p(Fraction(1, 2)) == Fraction(25, 16)
    with pytest.raises(ValueError):
        p(0.5)


def test_palindromy():
    p = IntPolynomial([1, 0, 2, 4, 2, 4, 2, 0, 1])
    assert p.is_palindromic(8)
    assert not p.is_palindromic(9)
    assert (ONE + T).reversed_to(3) == IntPolynomial([0, 0, 1, 1])


def test_str():
    assert str(IntPolynomial([1, 0, 1, 4, 1, 0, 1])) == "1 + t^2 + 4t^3 + t^4 + t^6"
    assert str(T) == "t"
    assert str(IntPolynomial()) == "0"
    assert str(IntPolynomial([0, -1, 3])) == "-t + 3t^2"
    assert str(IntPolynomial([2, -2])) == "2 - 2t"
    assert IntPolynomial([1, 0, 1]).to_json() == ["1", "0", "1"]
