"""p-adic local heights by the duplication series.

With log|z|_p = -v_p(z) log p the series becomes a sum of valuations, so the height is
``coefficient * log p`` with

    coefficient = -1/2 v_p(x'(P)) - 1/8 * sum_n 4^-n v_p(Z_n)

on a model shifted by r where F(-r) is a non-square in Q_p. On an integral model the sum
stops being interesting as soon as t_n enters the formal group (v_p(t_n) >= 1, or >= 3 at
p = 2): from there on every Z_m is a unit, so the coefficient is an exact rational.
"""

import logging
import math
from fractions import Fraction
from typing import Literal

from canonical_heights.config import get_settings
from canonical_heights.core.curve import (
    AffinePoint,
    CurvePoint,
    InfinityPoint,
    WeierstrassCurve,
    cubic_F,
    double_point,
    require_affine,
    require_on_curve,
    series_polynomials,
    shift_model,
)
from canonical_heights.core.padic import PadicNumber, is_square_qp, valuation
from canonical_heights.errors import NoAdmissibleShift, NonIntegralModel, PrecisionExhausted
from canonical_heights.heights.real_place import is_admissible_real
from canonical_heights.models import PadicHeightResult, ShiftCertificate

logger = logging.getLogger(__name__)

BASE_PRECISION = 32


def formal_group_threshold(p: int) -> int:
    return 3 if p == 2 else 1


def require_integral(curve: WeierstrassCurve) -> None:
    if not curve.is_integral:
        raise NonIntegralModel(f"p-adic heights need integer a-invariants, got {curve.ainvs_text}.")


def is_admissible_padic(curve: WeierstrassCurve, r: int, p: int) -> bool:
    witness = cubic_F(curve.b, Fraction(-r))
    return witness != 0 and not is_square_qp(witness, p)


def is_admissible_shift(curve: WeierstrassCurve, r: int, place: Literal["real"] | int) -> bool:
    """Whether no point of E over the place has x = -r."""
    if place == "real":
        return is_admissible_real(curve, r)
    return is_admissible_padic(curve, r, place)


def _shift_candidates(r_max: int):
    yield 0
    for r in range(1, r_max + 1):
        yield r
        yield -r


def select_shift_padic(curve: WeierstrassCurve, p: int, r_max: int | None = None) -> ShiftCertificate:
    """Smallest |r| (positive first) with F(-r) a nonzero non-square in Q_p."""
    require_integral(curve)
    r_max = get_settings().shift_limit if r_max is None else r_max
    for r in _shift_candidates(r_max):
        witness = cubic_F(curve.b, Fraction(-r))
        if witness == 0:
            continue
        if not is_square_qp(witness, p):
            reason = "odd_valuation" if valuation(witness, p) % 2 else "non_residue_unit"
            logger.debug("%s-adic shift for %s: r=%s (%s)", p, curve.ainvs_text, r, reason)
            return ShiftCertificate(r=r, place=p, witness=witness, reason=reason)
    raise NoAdmissibleShift(f"No r with |r| <= {r_max} makes F(-r) a non-square in Q_{p} for {curve.ainvs_text}.")


def _run_series(
    shifted: WeierstrassCurve, x: Fraction, p: int, n_max: int, precision_k: int
) -> tuple[list[int], Literal["formal_group", "good_reduction"] | None, int]:
    """Valuations v_p(Z_n) until a certificate fires or n_max terms are summed.

    Returns (valuations, termination, extra) where ``extra`` is the exact closed tail
    sum_{m >= n} 4^(n-m) v_p(Z_m) scaled by 4^n at the good-reduction closure (else 0).
    """
    b = shifted.b.map(lambda q: PadicNumber.from_rational(q, p, precision_k))
    t = PadicNumber.from_rational(1 / x, p, precision_k)
    threshold = formal_group_threshold(p)
    good = valuation(shifted.disc, p) == 0
    valuations: list[int] = []
    for _ in range(n_max):
        if t.valuation >= threshold:
            return valuations, "formal_group", 0
        if t.is_inexact_zero:
            raise PrecisionExhausted(f"t_n is only known to be {t!r}, short of the formal group.")
        W, Z = series_polynomials(b, t)
        if Z.is_zero or Z.is_inexact_zero:
            raise PrecisionExhausted(f"Z_n vanished to {precision_k} {p}-adic digits.")
        valuations.append(int(Z.valuation))
        t = W / Z
    if t.valuation >= threshold:
        return valuations, "formal_group", 0
    if good:
        if t.is_inexact_zero and t.valuation < 0:
            raise PrecisionExhausted(f"t_n is only known to be {t!r}.")
        # At good reduction lambda_p(Q) = max(0, -v(x'(Q))/2) log p, which fixes the tail of mu.
        return valuations, "good_reduction", -4 * max(0, int(-t.valuation))
    return valuations, None, 0


def _two_power_orbit(curve: WeierstrassCurve, P: AffinePoint) -> list[AffinePoint] | None:
    """[P, 2P, ..., 2^n P] if 2^(n+1) P is the identity, else None.

    Rational torsion of 2-power order has order at most 8, so three doublings decide it.
    """
    orbit = [P]
    for _ in range(3):
        Q = double_point(curve, orbit[-1])
        if isinstance(Q, InfinityPoint):
            return orbit
        orbit.append(Q)
    return None


def _good_reduction_height(x: Fraction, p: int) -> PadicHeightResult:
    """max(0, -v_p(x)) / 2 directly, for a prime of good reduction where no shift exists.

    Happens at p = 2 on curves such as y^2 + y = x^3 - x, where F(-r) = 1 mod 8 for every integer r.
    """
    v = valuation(x, p) if x else 0
    coefficient = Fraction(max(0, -v), 2)
    return PadicHeightResult(
        prime=p,
        coefficient=coefficient,
        mu_coefficient=Fraction(4 * max(0, v)),
        exact=True,
        tail_bound_coefficient=Fraction(0),
        iterations=1,
        termination="good_reduction",
        precision_k=0,
    )


def lambda_padic(
    curve: WeierstrassCurve,
    P: CurvePoint,
    p: int,
    n_max: int | None = None,
    *,
    shift: int | None = None,
    precision_k: int | None = None,
) -> PadicHeightResult:
    settings = get_settings()
    n_max = settings.padic_max_iter if n_max is None else n_max
    P = require_affine(P)
    require_integral(curve)
    require_on_curve(curve, P)

    if shift is None:
        try:
            certificate = select_shift_padic(curve, p)
        except NoAdmissibleShift:
            if valuation(curve.disc, p) != 0:
                raise
            logger.info("No %s-adic shift for %s; using the good-reduction closed form", p, curve.ainvs_text)
            return _good_reduction_height(P.x, p)
    else:
        if not is_admissible_padic(curve, shift, p):
            raise NoAdmissibleShift(f"r={shift} is not admissible over Q_{p}.")
        certificate = ShiftCertificate(
            r=shift, place=p, witness=cubic_F(curve.b, Fraction(-shift)), reason="caller_supplied"
        )
    shifted, to_shifted = shift_model(curve, certificate.r)
    x = to_shifted(P).x

    k = precision_k or BASE_PRECISION + 2 * n_max
    orbit = _two_power_orbit(curve, P)
    if orbit is not None:
        # W vanishes exactly on a 2-torsion point, so this orbit is summed in Q instead.
        valuations = [int(valuation(series_polynomials(shifted.b, 1 / to_shifted(Q).x)[1], p)) for Q in orbit]
        termination, closed_tail = "formal_group", 0
    else:
        for attempt in range(settings.precision_retries + 1):
            try:
                valuations, termination, closed_tail = _run_series(shifted, x, p, n_max, k)
                break
            except PrecisionExhausted:
                if attempt == settings.precision_retries:
                    raise
                logger.warning(
                    "%s-adic precision %s exhausted for %s; retrying with %s", p, k, curve.ainvs_text, 2 * k
                )
                k *= 2

    mu_coefficient = -sum((Fraction(v, 4**n) for n, v in enumerate(valuations)), Fraction(0))
    if termination == "good_reduction":
        mu_coefficient -= Fraction(closed_tail, 4 ** len(valuations))
    exact = termination is not None
    if exact:
        tail = Fraction(0)
    else:
        observed = max((abs(v) for v in valuations), default=0) + 1
        tail = Fraction(4, 3) * observed / Fraction(4) ** n_max
        logger.info("%s-adic series for %s truncated after %s terms", p, curve.ainvs_text, n_max)

    return PadicHeightResult(
        prime=p,
        coefficient=-Fraction(valuation(x, p)) / 2 + mu_coefficient / 8,
        mu_coefficient=mu_coefficient,
        exact=exact,
        tail_bound_coefficient=tail,
        iterations=max(len(valuations), 1),
        certificate=certificate,
        valuation_trace=valuations,
        termination=termination,
        precision_k=k,
    )


def padic_value(result: PadicHeightResult) -> float:
    return float(result.coefficient) * math.log(result.prime)
