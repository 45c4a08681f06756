import os
import random

import pytest

from canonical_heights.config import get_settings
from canonical_heights.core.curve import new_curve, point, y_prime
from canonical_heights.errors import SingularCurve


@pytest.fixture(autouse=True)
def mock_env():
    """Hide CANONICAL_HEIGHTS_* variables from the developer's shell and reset cached settings."""
    original_env = os.environ.copy()
    for key in list(os.environ):
        if key.startswith("CANONICAL_HEIGHTS_"):
            del os.environ[key]
    get_settings.cache_clear()

    yield

    # Restore original environment
    os.environ.clear()
    os.environ.update(original_env)
    get_settings.cache_clear()


@pytest.fixture
def mordell():
    """y^2 = x^3 - 2."""
    return new_curve(0, 0, 0, 0, -2)


@pytest.fixture
def cube_plus_one():
    """y^2 = x^3 + 1, torsion group of order 6."""
    return new_curve(0, 0, 0, 0, 1)


@pytest.fixture
def curve_37a():
    """y^2 + y = x^3 - x, rank one with generator (0, 0)."""
    return new_curve(0, 0, 1, -1, 0)


@pytest.fixture
def congruent():
    """y^2 = x^3 - x."""
    return new_curve(0, 0, 0, -1, 0)


@pytest.fixture
def mordell_point():
    return point(3, 5)


@pytest.fixture
def random_integral_points():
    """Seeded small integral curves, each through an integral point that is not 2-torsion."""
    rng = random.Random(20260417)
    samples = []
    while len(samples) < 12:
        a1, a2, a3, a4 = (rng.randint(-3, 3) for _ in range(4))
        x, y = rng.randint(-3, 3), rng.randint(-3, 3)
        a6 = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x
        try:
            E = new_curve(a1, a2, a3, a4, a6)
        except SingularCurve:
            continue
        P = point(x, y)
        if y_prime(E, P) != 0:
            samples.append((E, P))
    return samples
