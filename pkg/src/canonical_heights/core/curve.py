"""Exact arithmetic on Weierstrass curves over the rationals.

Curves and points are immutable and hashable; every operation here is exact
(``fractions.Fraction``). The polynomial helpers (``cubic_F``, ``duplication_x``,
``series_polynomials``) are written against any scalar type closed under ``+ - *``
so the real and p-adic places evaluate the same definitions.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Generic, TypeVar

import sympy

from canonical_heights.errors import PointAtInfinity, PointNotOnCurve, SingularCurve, TwoTorsion

logger = logging.getLogger(__name__)

S = TypeVar("S")
T = TypeVar("T")

RationalScalar = Fraction


def as_rational(value: Any) -> Fraction:
    """Coerce an int, Fraction or "n"/"n/d" string into a Fraction.

    Binary floats are refused.
    """
    if isinstance(value, bool):
        raise TypeError("Booleans are not rational scalars.")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not a rational number: {value!r}") from e
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"Cannot use {type(value).__name__} as an exact rational; pass a string like '3/4'.")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def log_abs(q: Fraction | int) -> float:
    """log|q| for a nonzero rational of any size (no float overflow on huge terms)."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("log|0| is undefined.")
    return math.log(abs(q.numerator)) - math.log(q.denominator)


@dataclass(frozen=True, slots=True)
class BInvariants(Generic[S]):
    """b2, b4, b6, b8 embedded in some scalar domain."""

    b2: S
    b4: S
    b6: S
    b8: S

    def map(self, embed: Callable[[S], T]) -> "BInvariants[T]":
        return BInvariants(embed(self.b2), embed(self.b4), embed(self.b6), embed(self.b8))


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6 with exact rational coefficients."""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction
    b2: Fraction = field(init=False, compare=False, repr=False)
    b4: Fraction = field(init=False, compare=False, repr=False)
    b6: Fraction = field(init=False, compare=False, repr=False)
    b8: Fraction = field(init=False, compare=False, repr=False)
    disc: Fraction = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise SingularCurve(f"Curve {self.ainvs_text} is singular (discriminant 0).")
        for name, value in (("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8), ("disc", disc)):
            object.__setattr__(self, name, value)

    @property
    def ainvs(self) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def ainvs_text(self) -> str:
        return "[" + ",".join(format_rational(a) for a in self.ainvs) + "]"

    @property
    def b(self) -> BInvariants[Fraction]:
        return BInvariants(self.b2, self.b4, self.b6, self.b8)

    @property
    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)


def new_curve(a1: Any, a2: Any, a3: Any, a4: Any, a6: Any) -> WeierstrassCurve:
    return WeierstrassCurve(*(as_rational(a) for a in (a1, a2, a3, a4, a6)))


# --- Points ---


@dataclass(frozen=True, slots=True)
class AffinePoint:
    x: Fraction
    y: Fraction


@dataclass(frozen=True, slots=True)
class InfinityPoint:
    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = InfinityPoint()

CurvePoint = AffinePoint | InfinityPoint


def point(x: Any, y: Any) -> AffinePoint:
    return AffinePoint(as_rational(x), as_rational(y))


def contains(curve: WeierstrassCurve, P: CurvePoint) -> bool:
    if isinstance(P, InfinityPoint):
        return True
    x, y = P.x, P.y
    lhs = y * y + curve.a1 * x * y + curve.a3 * y
    rhs = ((x + curve.a2) * x + curve.a4) * x + curve.a6
    return lhs == rhs


def require_on_curve(curve: WeierstrassCurve, P: CurvePoint) -> None:
    if not contains(curve, P):
        raise PointNotOnCurve(f"point not on curve: {P} does not satisfy {curve.ainvs_text}")


def require_affine(P: CurvePoint) -> AffinePoint:
    if isinstance(P, InfinityPoint):
        raise PointAtInfinity("The point at infinity has no affine coordinates.")
    return P


def negate(curve: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    if isinstance(P, InfinityPoint):
        return P
    return AffinePoint(P.x, -P.y - curve.a1 * P.x - curve.a3)


def add(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if isinstance(P, InfinityPoint):
        return Q
    if isinstance(Q, InfinityPoint):
        return P
    a1, a2, a3, a4, a6 = curve.ainvs
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return INFINITY
        denom = 2 * y1 + a1 * x1 + a3
        slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / denom
        intercept = (-x1**3 + a4 * x1 + 2 * a6 - a3 * y1) / denom
    else:
        slope = (y2 - y1) / (x2 - x1)
        intercept = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = slope * slope + a1 * slope - a2 - x1 - x2
    y3 = -(slope + a1) * x3 - intercept - a3
    return AffinePoint(x3, y3)


def double_point(curve: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    return add(curve, P, P)


def multiply(curve: WeierstrassCurve, n: int, P: CurvePoint) -> CurvePoint:
    """n*P by double-and-add; negative n uses -P."""
    if n < 0:
        return multiply(curve, -n, negate(curve, P))
    result: CurvePoint = INFINITY
    addend = P
    while n:
        if n & 1:
            result = add(curve, result, addend)
        addend = double_point(curve, addend)
        n >>= 1
    return result


# --- Scalar-generic polynomials ---


def cubic_F(b: BInvariants[Any], x: S) -> S:
    """F(x) = 4x^3 + b2 x^2 + 2 b4 x + b6, which equals Y^2 on the curve."""
    return ((4 * x + b.b2) * x + 2 * b.b4) * x + b.b6


def cubic_F_prime(b: BInvariants[Any], x: S) -> S:
    return (12 * x + 2 * b.b2) * x + 2 * b.b4


def duplication_numerator(b: BInvariants[Any], x: S) -> S:
    """x^4 - b4 x^2 - 2 b6 x - b8."""
    return ((x * x - b.b4) * x - 2 * b.b6) * x - b.b8


def duplication_x(b: BInvariants[Any], x: S) -> S:
    denom = cubic_F(b, x)
    if not denom:
        raise TwoTorsion(f"F({x}) = 0: the point has order 2, its double is at infinity.")
    return duplication_numerator(b, x) / denom


def series_polynomials(b: BInvariants[Any], t: S) -> tuple[S, S]:
    """(W, Z) at parameter t:
    W = 4t + b2 t^2 + 2 b4 t^3 + b6 t^4 = t^4 F(1/t),
    Z = 1 - b4 t^2 - 2 b6 t^3 - b8 t^4.
    """
    W = (((b.b6 * t + 2 * b.b4) * t + b.b2) * t + 4) * t
    Z = 1 - ((b.b8 * t + 2 * b.b6) * t + b.b4) * t * t
    return W, Z


def cubic_F_eval(curve: WeierstrassCurve, x: S) -> S:
    return cubic_F(curve.b, x)


def x_duplication(curve: WeierstrassCurve, x: S) -> S:
    return duplication_x(curve.b, x)


def y_prime(curve: WeierstrassCurve, P: CurvePoint) -> Fraction:
    """Y = 2y + a1 x + a3."""
    P = require_affine(P)
    return 2 * P.y + curve.a1 * P.x + curve.a3


# --- Coordinate shifts ---


@dataclass(frozen=True, slots=True)
class XTranslation:
    """Point map of the model change x' = x + r, y' = y."""

    r: Fraction

    def __call__(self, P: CurvePoint) -> CurvePoint:
        if isinstance(P, InfinityPoint):
            return P
        return AffinePoint(P.x + self.r, P.y)

    @property
    def inverse(self) -> "XTranslation":
        return XTranslation(-self.r)


_X, _Y = sympy.symbols("x y")


@lru_cache(maxsize=512)
def _shifted_ainvs(ainvs: tuple[Fraction, ...], r: Fraction) -> tuple[Fraction, ...]:
    a1, a2, a3, a4, a6 = (sympy.Rational(a.numerator, a.denominator) for a in ainvs)
    x = _X - sympy.Rational(r.numerator, r.denominator)
    equation = sympy.Poly(sympy.expand(_Y**2 + a1 * x * _Y + a3 * _Y - (x**3 + a2 * x**2 + a4 * x + a6)), _X, _Y)
    coeff = equation.coeff_monomial
    # y^2 + a1' x y + a3' y - x^3 - a2' x^2 - a4' x - a6'
    shifted = (coeff(_X * _Y), -coeff(_X**2), coeff(_Y), -coeff(_X), -coeff(1))
    return tuple(as_rational(sympy.Rational(c)) for c in shifted)


def shift_model(curve: WeierstrassCurve, r: Any) -> tuple[WeierstrassCurve, XTranslation]:
    """Model obtained by substituting x = x' - r; returns it with the point map P -> P + (r, 0)."""
    r = as_rational(r)
    if r == 0:
        return curve, XTranslation(r)
    shifted = WeierstrassCurve(*_shifted_ainvs(curve.ainvs, r))
    logger.debug("Shifted %s by r=%s -> %s", curve.ainvs_text, r, shifted.ainvs_text)
    return shifted, XTranslation(r)
