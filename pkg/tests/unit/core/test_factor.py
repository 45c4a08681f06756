import pytest

from canonical_heights.core import factor
from canonical_heights.core.factor import prime_factors, trial_division
from canonical_heights.errors import FactorizationOverflow


def test_trial_division():
    assert trial_division(360, 5) == ({2, 3, 5}, 1)
    assert trial_division(2 * 101, 10) == ({2}, 101)
    assert trial_division(-37, 100) == ({37}, 1)


@pytest.mark.parametrize(
    ("n", "expected"),
    [
        (1728, {2, 3}),
        (-1728, {2, 3}),
        (37, {37}),
        (1, set()),
        (-432, {2, 3}),
        (2**61 - 1, {2**61 - 1}),
    ],
)
def test_prime_factors(n, expected):
    assert prime_factors(n) == expected


def test_prime_factors_splits_large_semiprime():
    """Both factors lie beyond the trial-division bound, so Pollard rho has to find them."""
    assert prime_factors(1000003 * 1000033) == {1000003, 1000033}


def test_prime_factors_respects_explicit_bounds():
    assert prime_factors(7 * 11 * 13, trial_bound=7) == {7, 11, 13}


def test_prime_factors_rejects_zero():
    with pytest.raises(ValueError, match="no finite factorization"):
        prime_factors(0)


def test_unsplittable_cofactor_overflows(monkeypatch):
    monkeypatch.setattr(factor, "_split", lambda n, max_steps: None)
    with pytest.raises(FactorizationOverflow):
        prime_factors(1000003 * 1000033)


def test_trial_bound_comes_from_environment(monkeypatch):
    monkeypatch.setenv("CANONICAL_HEIGHTS_TRIAL_BOUND", "10")
    monkeypatch.setattr(factor, "_split", lambda n, max_steps: None)
    # 101 * 103 is past 10**2, so the cofactor needs splitting.
    with pytest.raises(FactorizationOverflow):
        prime_factors(101 * 103)


def test_factor_bound_caps_the_rho_search():
    """Both factors are near 10^6, far past a search for factors below 2."""
    with pytest.raises(FactorizationOverflow, match="factoring bound 2"):
        prime_factors(1000003 * 1000033, factor_bound=2)


def test_factor_bound_comes_from_environment(monkeypatch):
    monkeypatch.setenv("CANONICAL_HEIGHTS_FACTOR_BOUND", "2")
    with pytest.raises(FactorizationOverflow):
        prime_factors(1000003 * 1000033)
