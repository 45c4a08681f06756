"""Capped relative-precision p-adic numbers.

A nonzero value is ``p**valuation * unit_digits`` where ``unit_digits`` is a unit known
modulo ``p**precision_k``. Multiplication and division keep the smaller relative
precision; addition works at the smaller absolute precision and loses one digit per
cancelled leading digit. An exact zero (from the rational 0) has infinite valuation.
A sum that cancels every known digit is an inexact zero O(p**valuation): no relative
digits, only the absolute precision it is known to.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import sympy
from sympy.ntheory.residue_ntheory import is_quad_residue

from canonical_heights.errors import PadicDivisionByZero, PrecisionExhausted
def valuation(q: Fraction | int, p: int) -> int | float:
    """v_p(q) for a rational; +inf for zero."""
    q = Fraction(q)
    if q == 0:
        return math.inf
    return int(sympy.multiplicity(p, abs(q.numerator))) - int(sympy.multiplicity(p, q.denominator))


def unit_part(q: Fraction | int, p: int) -> Fraction:
    """q / p**v_p(q)."""
    q = Fraction(q)
    v = valuation(q, p)
    return q / Fraction(p) ** v


def unit_residue(q: Fraction | int, p: int, modulus: int) -> int:
    """Residue of the unit part of q modulo ``modulus`` (a power of p)."""
    u = unit_part(q, p)
    return u.numerator * pow(u.denominator, -1, modulus) % modulus


@dataclass(frozen=True, slots=True)
class PadicNumber:
    prime: int
    valuation: int | float
    unit_digits: int
    precision_k: int

    @classmethod
    def zero(cls, prime: int, precision_k: int) -> "PadicNumber":
        return cls(prime, math.inf, 0, precision_k)

    @classmethod
    def inexact_zero(cls, prime: int, absolute_precision: int) -> "PadicNumber":
        """O(p**absolute_precision)."""
        return cls(prime, absolute_precision, 0, 0)

    @classmethod
    def from_rational(cls, q: Any, prime: int, precision_k: int) -> "PadicNumber":
        if precision_k < 1:
            raise ValueError("p-adic precision must be at least one digit.")
        q = Fraction(q)
        if q == 0:
            return cls.zero(prime, precision_k)
        modulus = prime**precision_k
        return cls(prime, valuation(q, prime), unit_residue(q, prime, modulus), precision_k)

    @property
    def is_zero(self) -> bool:
        return self.valuation == math.inf

    @property
    def is_inexact_zero(self) -> bool:
        return self.precision_k == 0 and not self.is_zero

    @property
    def absolute_precision(self) -> int | float:
        return self.valuation + self.precision_k

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        if self.is_zero:
            return f"0_{self.prime}"
        if self.is_inexact_zero:
            return f"O({self.prime}^{self.valuation})"
        return f"({self.valuation}, {self.unit_digits} mod {self.prime}^{self.precision_k})_{self.prime}"

    def to_rational(self) -> Fraction:
        """The representative p**v * u with 0 <= u < p**k."""
        if self.is_zero or self.is_inexact_zero:
            return Fraction(0)
        return Fraction(self.prime) ** self.valuation * self.unit_digits

    def with_precision(self, precision_k: int) -> "PadicNumber":
        if self.is_zero or precision_k >= self.precision_k:
            return self
        return PadicNumber(self.prime, self.valuation, self.unit_digits % self.prime**precision_k, precision_k)

    def _coercion_precision(self) -> int:
        if self.is_inexact_zero:
            return max(1, int(self.valuation))
        return max(1, self.precision_k)

    def _coerce(self, other: Any) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError(f"Cannot mix {self.prime}-adic and {other.prime}-adic numbers.")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_rational(other, self.prime, self._coercion_precision())
        return NotImplemented

    def __neg__(self) -> "PadicNumber":
        if self.is_zero or self.is_inexact_zero:
            return self
        modulus = self.prime**self.precision_k
        return PadicNumber(self.prime, self.valuation, -self.unit_digits % modulus, self.precision_k)

    def __add__(self, other: Any) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        p = self.prime
        v_min = min(self.valuation, other.valuation)
        width = min(self.absolute_precision, other.absolute_precision) - v_min
        modulus = p**width
        total = (
            self.unit_digits * p ** (self.valuation - v_min) + other.unit_digits * p ** (other.valuation - v_min)
        ) % modulus
        if total == 0:
            return PadicNumber.inexact_zero(p, v_min + width)
        shift = int(sympy.multiplicity(p, total))
        return PadicNumber(p, v_min + shift, (total // p**shift) % p ** (width - shift), width - shift)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return self
        if other.is_zero:
            return other
        k = min(self.precision_k, other.precision_k)
        v = self.valuation + other.valuation
        if k == 0:
            return PadicNumber.inexact_zero(self.prime, v)
        modulus = self.prime**k
        return PadicNumber(self.prime, v, self.unit_digits * other.unit_digits % modulus, k)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise PadicDivisionByZero(f"Division by an exact {self.prime}-adic zero.")
        if other.is_inexact_zero:
            raise PrecisionExhausted(f"Division by {other!r}: no {self.prime}-adic digits of the divisor are known.")
        if self.is_zero:
            return self
        k = min(self.precision_k, other.precision_k)
        v = self.valuation - other.valuation
        if k == 0:
            return PadicNumber.inexact_zero(self.prime, v)
        modulus = self.prime**k
        unit = self.unit_digits * pow(other.unit_digits, -1, modulus) % modulus
        return PadicNumber(self.prime, v, unit, k)

    def __rtruediv__(self, other: Any) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "PadicNumber":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = PadicNumber.from_rational(1, self.prime, self._coercion_precision())
        for _ in range(n):
            result = result * self
        return result


def padic_from_rational(q: Any, p: int, k: int) -> PadicNumber:
    return PadicNumber.from_rational(q, p, k)


def padic_add(a: PadicNumber, b: PadicNumber) -> PadicNumber:
    return a + b


def padic_mul(a: PadicNumber, b: PadicNumber) -> PadicNumber:
    return a * b


def padic_div(a: PadicNumber, b: PadicNumber) -> PadicNumber:
    return a / b


def is_square_qp(q: Any, p: int) -> bool:
    """Whether a rational is a nonzero square in Q_p. Zero counts as not a square."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime.")
    q = Fraction(q)
    if q == 0:
        return False
    if valuation(q, p) % 2:
        return False
    if p == 2:
        return unit_residue(q, 2, 8) == 1
    return bool(is_quad_residue(unit_residue(q, p, p), p))
