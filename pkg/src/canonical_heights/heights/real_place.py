"""Archimedean local height by the duplication series in binary64.

Every computation runs on a model shifted by an integer r with F(-r) < 0, chosen so that
x' = x + r >= 1 on all of E(R). Then t = 1/x' lies in (0, 1] and the iteration
t -> W(t)/Z(t) never overflows.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from canonical_heights.config import get_settings
from canonical_heights.core.curve import (
    BInvariants,
    CurvePoint,
    WeierstrassCurve,
    cubic_F,
    cubic_F_prime,
    log_abs,
    require_affine,
    require_on_curve,
    series_polynomials,
    shift_model,
)
from canonical_heights.errors import NoAdmissibleShift, RootIsolationFailure, ZVanished
from canonical_heights.models import (
    GammaCertificate,
    GammaKind,
    IterationTrace,
    LocalHeightResult,
    ShiftCertificate,
    TraceStep,
)

logger = logging.getLogger(__name__)

BISECTION_STEPS = 60
MAX_BRACKET_EXPONENT = 64

_x = sympy.Symbol("x")
_t = sympy.Symbol("t")


def _sym(q: Fraction | int) -> sympy.Rational:
    q = Fraction(q)
    return sympy.Rational(q.numerator, q.denominator)


def _cubic_poly(curve: WeierstrassCurve) -> sympy.Poly:
    b = curve.b.map(_sym)
    return sympy.Poly(4 * _x**3 + b.b2 * _x**2 + 2 * b.b4 * _x + b.b6, _x)


@lru_cache(maxsize=256)
def _smallest_root_bracket(curve: WeierstrassCurve, max_exponent: int) -> tuple[Fraction, Fraction, int]:
    """(lo, hi, k) with lo <= e_min <= hi and every real root of F inside [-2^k, 2^k]."""
    b = curve.b
    poly = _cubic_poly(curve)
    total_roots = poly.count_roots()
    k = 0
    while True:
        edge = 2**k
        if cubic_F(b, Fraction(-edge)) < 0 and poly.count_roots(-edge, edge) == total_roots:
            break
        k += 1
        if k > max_exponent:
            raise RootIsolationFailure(
                f"No bracket [-2^k, 2^k] with k <= {max_exponent} encloses the real roots of F for {curve.ainvs_text}."
            )
    lo, hi = Fraction(-(2**k)), Fraction(2**k)
    isolated = total_roots == 1
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        if isolated:
            value = cubic_F(b, mid)
            if value == 0:
                lo = hi = mid
                break
            if value < 0:
                lo = mid
            else:
                hi = mid
        else:
            if poly.count_roots(_sym(lo), _sym(mid)) >= 1:
                hi = mid
            else:
                lo = mid
            isolated = poly.count_roots(_sym(lo), _sym(hi)) == 1
    logger.debug("Smallest root of F for %s lies in [%s, %s]", curve.ainvs_text, float(lo), float(hi))
    return lo, hi, k


def smallest_real_root(curve: WeierstrassCurve) -> float:
    lo, hi, _ = _smallest_root_bracket(curve, MAX_BRACKET_EXPONENT)
    return float((lo + hi) / 2)


def is_admissible_real(curve: WeierstrassCurve, r: int) -> bool:
    return cubic_F(curve.b, Fraction(-r)) < 0


@lru_cache(maxsize=256)
def select_shift_real(curve: WeierstrassCurve, max_exponent: int = MAX_BRACKET_EXPONENT) -> tuple[int, float]:
    """Smallest integer r >= 1 - e_min with F(-r) < 0; returns (r, F(-r))."""
    b = curve.b
    lo, hi, k = _smallest_root_bracket(curve, max_exponent)
    poly = _cubic_poly(curve)
    r = math.ceil(1 - hi)

    def has_root_below(bound: int) -> bool:
        if bound <= -(2**k):
            return False
        on_bound = 1 if cubic_F(b, Fraction(bound)) == 0 else 0
        return poly.count_roots(-(2**k), bound) > on_bound

    while has_root_below(1 - r):
        r += 1
    while not is_admissible_real(curve, r):
        r += 1
    witness = cubic_F(b, Fraction(-r))
    logger.debug("Real shift for %s: r=%s, F(-r)=%s", curve.ainvs_text, r, witness)
    return r, float(witness)


def _beyond_critical(curve: WeierstrassCurve, x: Fraction) -> bool:
    """x lies to the right of the larger critical point of F (assumes Delta > 0)."""
    return x > -curve.b2 / 12 and cubic_F_prime(curve.b, x) > 0


def on_identity_component(curve: WeierstrassCurve, P: CurvePoint) -> bool:
    P = require_affine(P)
    if curve.disc < 0:
        return True
    return _beyond_critical(curve, P.x)


def gamma_certificate(curve: WeierstrassCurve, point: CurvePoint | None = None) -> GammaCertificate:
    """Pick the subgroup on which x never vanishes.

    With a point supplied, the identity-component certificate is only issued when the point
    lies on that component.
    """
    if curve.b6 < 0:
        return GammaCertificate(kind=GammaKind.FULL_GROUP_B6_NEGATIVE, shift=0, witness=float(curve.b6))
    # b6 >= 0 here, so e3 <= 0 exactly when 0 is past the larger critical point.
    if curve.disc > 0 and not _beyond_critical(curve, Fraction(0)):
        if point is None or on_identity_component(curve, point):
            return GammaCertificate(kind=GammaKind.IDENTITY_COMPONENT, shift=0, witness=float(curve.b6))
    r, witness = select_shift_real(curve)
    return GammaCertificate(kind=GammaKind.SHIFTED_FULL_GROUP, shift=r, witness=witness)


def series_step(b: BInvariants[float], t: float) -> tuple[float, float, float]:
    W, Z = series_polynomials(b, t)
    if Z == 0.0:
        raise ZVanished(f"Z vanished at t={t!r}: the shift is not admissible for this point.")
    return W, Z, W / Z


def _roots_in_unit_interval(poly: sympy.Poly) -> list[float]:
    if poly.is_zero or poly.degree() < 1:
        return []
    return [value for value in (float(root) for root in poly.real_roots()) if 0.0 <= value <= 1.0]


@lru_cache(maxsize=256)
def series_log_bound(shifted: WeierstrassCurve) -> float:
    """sup |log|Z(t)|| over every t = 1/x' with (x', y') a real point of the shifted model.

    Those t fill the part of [0, 1] where W(t) >= 0, and Z has no zero there since no real
    point has x' = 0. The supremum is reached at 0, 1, a root of W or a critical point of Z.
    """
    b = shifted.b.map(_sym)
    W = sympy.Poly(4 * _t + b.b2 * _t**2 + 2 * b.b4 * _t**3 + b.b6 * _t**4, _t)
    Z = sympy.Poly(1 - b.b4 * _t**2 - 2 * b.b6 * _t**3 - b.b8 * _t**4, _t)
    fb = shifted.b.map(float)
    on_locus = [0.0, *_roots_in_unit_interval(W)]
    if cubic_F(shifted.b, Fraction(1)) >= 0:
        on_locus.append(1.0)
    on_locus += [t for t in _roots_in_unit_interval(Z.diff(_t)) if series_polynomials(fb, t)[0] >= 0.0]
    bound = 0.0
    for t in on_locus:
        z = series_polynomials(fb, t)[1]
        if z == 0.0:
            raise ZVanished(f"Z vanishes at t={t!r} on {shifted.ainvs_text}: the shift is not admissible.")
        bound = max(bound, abs(math.log(abs(z))))
    logger.debug("sup |log|Z|| on %s is %.6g", shifted.ainvs_text, bound)
    return bound


@dataclass(frozen=True, slots=True)
class SeriesSum:
    mu: float
    iterations: int
    tail: float
    steps: list[TraceStep]
    observed_log_bound: float
    observed_t_bound: float


def mu_series(shifted: WeierstrassCurve, t: float, tol: float, n_max: int, *, trace: bool = False) -> SeriesSum:
    """mu = sum 4^-n log|Z(t_n)| from t_0 = t on a shifted model, with its tail bound.

    The tail after n terms is at most (4/3) 4^-(n+1) N, N = ``series_log_bound(shifted)``.
    """
    b = shifted.b.map(float)
    log_bound = series_log_bound(shifted)
    mu = 0.0
    observed = 0.0
    t_bound = abs(t)
    tail = 0.0
    steps: list[TraceStep] = []
    iterations = 0
    for n in range(n_max):
        W, Z, t_next = series_step(b, t)
        log_z = math.log(abs(Z))
        mu += log_z / 4**n
        observed = max(observed, abs(log_z))
        t_bound = max(t_bound, abs(t))
        iterations = n + 1
        if trace:
            steps.append(TraceStep(n=n, t=t, W=W, Z=Z, log_abs_Z=log_z))
        if W == 0.0:
            # 2^(n+1) P is the identity; t stays at the fixed point 0 with Z = 1.
            tail = 0.0
            break
        tail = 4.0 ** -(n + 1) * (4.0 / 3.0) * max(log_bound, observed)
        if tail < tol:
            break
        t = t_next
    else:
        logger.info("Real series for %s stopped at n_max=%s with tail %.3g", shifted.ainvs_text, n_max, tail)
    return SeriesSum(mu, iterations, tail, steps, observed, t_bound)


def lambda_real(
    curve: WeierstrassCurve,
    P: CurvePoint,
    tol: float | None = None,
    n_max: int | None = None,
    *,
    shift: int | None = None,
    trace: bool = False,
) -> LocalHeightResult:
    settings = get_settings()
    tol = settings.tol if tol is None else tol
    n_max = settings.real_max_iter if n_max is None else n_max
    if tol <= 0:
        raise ValueError("tol must be positive.")
    P = require_affine(P)
    require_on_curve(curve, P)

    certificate = gamma_certificate(curve, P)
    if shift is None:
        r, _ = select_shift_real(curve)
        reason = "x_plus_r_at_least_one"
    else:
        if not is_admissible_real(curve, shift):
            raise NoAdmissibleShift(f"r={shift} is not admissible over R: F(-r) >= 0.")
        r, reason = shift, "caller_supplied"
    shifted, to_shifted = shift_model(curve, r)
    x = to_shifted(P).x

    series = mu_series(shifted, float(1 / x), tol, n_max, trace=trace)
    return LocalHeightResult(
        lambda_=0.5 * log_abs(x) + series.mu / 8,
        mu=series.mu,
        iterations=series.iterations,
        truncation_error_bound=series.tail / 8,
        certificate=certificate,
        shift=ShiftCertificate(r=r, place="real", witness=cubic_F(curve.b, Fraction(-r)), reason=reason),
        trace=(
            IterationTrace(
                steps=series.steps,
                observed_log_bound=series.observed_log_bound,
                observed_t_bound=series.observed_t_bound,
            )
            if trace
            else None
        ),
    )
