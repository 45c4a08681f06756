"""Global canonical height over Q as the sum of local heights, plus an independent oracle."""

import logging
import math
from fractions import Fraction

from canonical_heights.config import get_settings
from canonical_heights.core.curve import (
    CurvePoint,
    InfinityPoint,
    WeierstrassCurve,
    add,
    double_point,
    log_abs,
    require_affine,
    require_on_curve,
)
from canonical_heights.core.factor import prime_factors
from canonical_heights.core.padic import valuation
from canonical_heights.errors import TorsionCollapse
from canonical_heights.heights.padic_place import lambda_padic, require_integral
from canonical_heights.heights.real_place import lambda_real
from canonical_heights.models import GlobalHeightResult

logger = logging.getLogger(__name__)

MAX_ORACLE_DOUBLINGS = 10


def candidate_primes(curve: WeierstrassCurve, P: CurvePoint) -> set[int]:
    """Primes of bad reduction together with primes in the denominator of x(P).

    Every other prime has good reduction and an integral abscissa, and contributes 0.
    """
    require_integral(curve)
    P = require_affine(P)
    primes = prime_factors(int(curve.disc))
    if P.x.denominator > 1:
        primes |= prime_factors(P.x.denominator)
    return primes


def order_check(curve: WeierstrassCurve, P: CurvePoint, max_order: int = 16) -> int | None:
    """Exact order of P if it is at most ``max_order``."""
    Q = P
    for n in range(1, max_order + 1):
        if isinstance(Q, InfinityPoint):
            return n
        Q = add(curve, Q, P)
    return None


def naive_height_limit(curve: WeierstrassCurve, P: CurvePoint, n: int) -> float:
    """4^-n * 1/2 * log H(x(2^n P)) by exact doubling."""
    if not 0 <= n <= MAX_ORACLE_DOUBLINGS:
        raise ValueError(f"n must be between 0 and {MAX_ORACLE_DOUBLINGS}.")
    Q = require_affine(P)
    for k in range(1, n + 1):
        Q = double_point(curve, Q)
        if isinstance(Q, InfinityPoint):
            raise TorsionCollapse(f"2^{k} P is the point at infinity; the height of P is 0.")
    naive = math.log(max(abs(Q.x.numerator), Q.x.denominator))
    return 0.5 * naive / 4**n


def product_formula_defect(q: Fraction) -> float:
    """log|q| - sum_p v_p(q) log p, which vanishes for every nonzero rational."""
    primes = prime_factors(q.numerator) if abs(q.numerator) > 1 else set()
    if q.denominator > 1:
        primes |= prime_factors(q.denominator)
    return log_abs(q) - sum(valuation(q, p) * math.log(p) for p in primes)


def canonical_height(
    curve: WeierstrassCurve,
    P: CurvePoint,
    tol: float | None = None,
    *,
    real_max_iter: int | None = None,
    padic_max_iter: int | None = None,
    detect_torsion: bool = True,
) -> GlobalHeightResult:
    tol = get_settings().tol if tol is None else tol
    require_integral(curve)
    P = require_affine(P)
    require_on_curve(curve, P)

    if detect_torsion:
        order = order_check(curve, P)
        if order is not None:
            logger.info("Point %s has order %s on %s; height is 0", P, order, curve.ainvs_text)
            return GlobalHeightResult(total=0.0, archimedean=0.0, torsion_order=order)

    real = lambda_real(curve, P, tol, real_max_iter)
    padic = {}
    for p in sorted(candidate_primes(curve, P)):
        logger.debug("Computing %s-adic local height of %s", p, P)
        padic[p] = lambda_padic(curve, P, p, padic_max_iter)

    finite_parts = {p: result.coefficient for p, result in padic.items()}
    total = real.lambda_ + sum(float(c) * math.log(p) for p, c in finite_parts.items())
    error_bound = real.truncation_error_bound + sum(
        float(result.tail_bound_coefficient) * math.log(p) for p, result in padic.items()
    )
    return GlobalHeightResult(
        total=total,
        archimedean=real.lambda_,
        finite_parts=finite_parts,
        error_bound=error_bound,
        exact_primes=[p for p, result in padic.items() if result.exact],
        real=real,
        padic=padic,
    )
