from fractions import Fraction

import pytest

from canonical_heights.core.padic import (
    PadicNumber,
    is_square_qp,
    padic_add,
    padic_div,
    padic_from_rational,
    padic_mul,
    unit_residue,
    valuation,
)
from canonical_heights.errors import PadicDivisionByZero, PrecisionExhausted


def test_valuation():
    assert valuation(Fraction(100, 129), 5) == 2
    assert valuation(Fraction(3, 250), 5) == -3
    assert valuation(-1728, 2) == 6
    assert valuation(0, 7) == float("inf")


def test_from_rational_splits_valuation_and_unit():
    """100/129 = 5^2 * (4/129), the unit known modulo 5^4."""
    x = padic_from_rational(Fraction(100, 129), 5, 4)
    assert x.valuation == 2
    assert x.precision_k == 4
    assert x.unit_digits * 129 % 625 == 4
    assert x.absolute_precision == 6


def test_from_rational_zero_is_exact():
    zero = padic_from_rational(0, 3, 10)
    assert zero.is_zero
    assert not zero
    assert zero.to_rational() == 0


def test_from_rational_rejects_empty_precision():
    with pytest.raises(ValueError, match="at least one digit"):
        PadicNumber.from_rational(5, 5, 0)


def test_multiplication_by_inverse():
    a = padic_from_rational(3, 7, 10)
    b = padic_from_rational(Fraction(1, 3), 7, 10)
    product = padic_mul(a, b)
    assert product.valuation == 0
    assert product.to_rational() == 1


def test_division_keeps_smaller_precision():
    a = padic_from_rational(Fraction(2, 3), 5, 8)
    b = padic_from_rational(10, 5, 5)
    quotient = padic_div(a, b)
    assert quotient.valuation == -1
    assert quotient.precision_k == 5
    assert quotient.unit_digits == unit_residue(Fraction(2, 30), 5, 5**5)


def test_addition_matches_rationals():
    a = padic_from_rational(Fraction(1, 4), 3, 12)
    b = padic_from_rational(Fraction(5, 9), 3, 12)
    total = padic_add(a, b)
    assert total.valuation == -2
    assert total.unit_digits == unit_residue(Fraction(29, 36), 3, 3**total.precision_k)


def test_addition_loses_cancelled_digits():
    """1 - 6 = -5: one leading digit cancels, so one digit of precision is gone."""
    diff = padic_from_rational(1, 5, 4) - padic_from_rational(6, 5, 4)
    assert diff.valuation == 1
    assert diff.precision_k == 3
    assert diff.unit_digits == unit_residue(-1, 5, 125)


def test_total_cancellation_is_an_inexact_zero():
    """1 - 126 = -5^3 is invisible at 3 digits: all that is left is O(5^3)."""
    diff = padic_from_rational(1, 5, 3) - padic_from_rational(126, 5, 3)
    assert diff.is_inexact_zero
    assert not diff.is_zero
    assert diff.valuation == 3
    assert diff.absolute_precision == 3
    assert diff.to_rational() == 0
    assert repr(diff) == "O(5^3)"


def test_inexact_zero_absorbs_further_terms():
    """(b8 t + 2 b6) = -16 + 16 cancels exactly, yet 1 - 0 * t^2 is still 1."""
    k = 20
    t = padic_from_rational(1, 2, k)
    inner = padic_from_rational(-16, 2, k) * t + 2 * padic_from_rational(8, 2, k)
    assert inner.is_inexact_zero
    assert inner.valuation == 4 + k
    z = 1 - inner * t * t
    assert z.valuation == 0
    assert z.precision_k == 4 + k
    assert z.to_rational() == 1


def test_inexact_zero_arithmetic():
    small = PadicNumber.inexact_zero(3, 4)
    x = padic_from_rational(Fraction(9, 2), 3, 10)
    assert (small * x).valuation == 6
    assert (small * x).is_inexact_zero
    assert (small / x).valuation == 2
    assert -small == small
    # x is known to 3^12, the sum only to 3^4.
    total = x + small
    assert total.valuation == 2
    assert total.precision_k == 2
    assert total.unit_digits == unit_residue(Fraction(1, 2), 3, 9)


def test_division_by_inexact_zero_needs_more_precision():
    a = padic_from_rational(1, 5, 3)
    with pytest.raises(PrecisionExhausted):
        a / (a - padic_from_rational(126, 5, 3))


def test_exact_zero_is_additive_identity():
    a = padic_from_rational(Fraction(7, 2), 3, 6)
    assert a + PadicNumber.zero(3, 6) == a
    assert 0 + a == a


def test_division_by_zero():
    a = padic_from_rational(1, 3, 5)
    with pytest.raises(PadicDivisionByZero):
        a / 0
    with pytest.raises(ZeroDivisionError):
        padic_div(a, PadicNumber.zero(3, 5))


def test_mixing_primes_is_refused():
    with pytest.raises(ValueError, match="Cannot mix"):
        padic_from_rational(1, 3, 5) + padic_from_rational(1, 5, 5)


def test_power():
    a = padic_from_rational(Fraction(3, 2), 3, 10)
    cube = a**3
    assert cube.valuation == 3
    assert cube.unit_digits == unit_residue(Fraction(27, 8), 3, 3**10)


@pytest.mark.parametrize(
    ("q", "p", "expected"),
    [
        (2, 7, True),
        (3, 7, False),
        (-1, 5, True),
        (-1, 3, False),
        (Fraction(4, 25), 5, True),
        (17, 2, True),
        (5, 2, False),
        (-7, 2, True),
        (8, 2, False),
        (12, 3, False),
        (0, 5, False),
    ],
)
def test_is_square_qp(q, p, expected):
    assert is_square_qp(q, p) is expected


def test_is_square_qp_needs_a_prime():
    with pytest.raises(ValueError, match="not prime"):
        is_square_qp(2, 9)
