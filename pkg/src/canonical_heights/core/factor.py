import logging
import math

import sympy
from sympy.ntheory import pollard_rho

from canonical_heights.config import get_settings
from canonical_heights.errors import FactorizationOverflow

logger = logging.getLogger(__name__)

RHO_RETRIES = 8


def trial_division(n: int, bound: int) -> tuple[set[int], int]:
    """Strip every prime factor <= bound from |n|; returns (primes found, cofactor)."""
    remain = abs(n)
    found: set[int] = set()
    for p in sympy.primerange(2, bound + 1):
        if p * p > remain:
            break
        if remain % p == 0:
            found.add(p)
            while remain % p == 0:
                remain //= p
    if 1 < remain <= bound:
        found.add(remain)
        remain = 1
    return found, remain


def _split(n: int, max_steps: int) -> int | None:
    for seed in range(RHO_RETRIES):
        factor = pollard_rho(n, a=seed + 1, seed=1234 + seed, retries=2, max_steps=max_steps)
        if factor is not None and 1 < factor < n:
            return factor
    return None


def _large_prime_factors(n: int, factor_bound: int) -> set[int]:
    """Prime factors of a cofactor whose own prime factors are expected below factor_bound.

    Rho finds a factor q after about sqrt(q) steps, so the walk is capped at 4 sqrt(factor_bound).
    """
    if n == 1:
        return set()
    if sympy.isprime(n):
        return {n}
    factor = _split(n, 4 * math.isqrt(factor_bound))
    if factor is None:
        raise FactorizationOverflow(
            f"Pollard rho found no factor of the composite cofactor {n} below the factoring bound {factor_bound}."
        )
    return _large_prime_factors(factor, factor_bound) | _large_prime_factors(n // factor, factor_bound)


def prime_factors(n: int, trial_bound: int | None = None, factor_bound: int | None = None) -> set[int]:
    """Distinct primes dividing a nonzero integer.

    Trial division up to ``trial_bound``; a cofactor below trial_bound**2 is prime, larger
    cofactors go through a Miller-Rabin style primality test and then Pollard rho.
    """
    if n == 0:
        raise ValueError("0 has no finite factorization.")
    settings = get_settings()
    trial_bound = trial_bound or settings.trial_bound
    factor_bound = factor_bound or settings.factor_bound
    found, remain = trial_division(n, trial_bound)
    if remain == 1:
        return found
    if remain < trial_bound * trial_bound or sympy.isprime(remain):
        return found | {remain}
    logger.debug("Cofactor %s of %s needs Pollard rho", remain, n)
    return found | _large_prime_factors(remain, factor_bound)
