from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dbrackets.scalars import Eps, rationalize, scalar_from_string, scalar_to_string


def test_parse_and_format_roundtrip():
    for s in ["0", "3", "-7", "2/3", "-11/4"]:
        assert scalar_to_string(scalar_from_string(s)) == s


def test_eps_basic_ring():
    e = Eps.var(2)
    x = 1 + 2 * e
    assert x.coeffs == (Fraction(1), Fraction(2), Fraction(0))
    assert (x * x).coeffs == (Fraction(1), Fraction(4), Fraction(4))
    y = x * x * x  # truncation at order 2
    assert y.coeffs == (Fraction(1), Fraction(6), Fraction(12))


def test_eps_truncation_drops_high_order():
    e = Eps.var(1)
    assert (e * e) == Eps.const(0, 1)
    assert not (e * e)


def test_eps_mixed_orders_rejected():
    with pytest.raises(ValueError):
        Eps.var(1) + Eps.var(2)


def test_eps_inverse():
    e = Eps.var(3)
    x = 2 + e
    xi = x.inverse()
    assert (x * xi) == Eps.const(1, 3)
    with pytest.raises(ZeroDivisionError):
        e.inverse()


def test_eps_division():
    e = Eps.var(2)
    assert ((1 + e) / (1 + e)) == Eps.const(1, 2)
    # geometric series: 1/(1-e) = 1 + e + e^2
    assert (1 / (1 - e)).coeffs == (Fraction(1), Fraction(1), Fraction(1))


small = st.integers(min_value=-6, max_value=6)


@given(st.lists(small, min_size=3, max_size=3),
       st.lists(small, min_size=3, max_size=3),
       st.lists(small, min_size=3, max_size=3))
def test_eps_ring_axioms(a, b, c):
    x, y, z = Eps(a, 2), Eps(b, 2), Eps(c, 2)
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x * y == y * x


def test_rationalize():
    assert rationalize(0.5) == Fraction(1, 2)
    assert rationalize(1 / 3, 100) == Fraction(1, 3)
    assert rationalize(-2.0) == Fraction(-2)
