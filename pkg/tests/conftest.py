import numpy as np
import pytest

from cxpt.fields import polynomial


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_poly_field(rng, n, degree=3, terms=6):
    """Random multivariate polynomial with total degree <= degree."""
    coeffs = {}
    for _ in range(terms):
        alpha = tuple(int(e) for e in rng.integers(0, degree + 1, size=n))
        while sum(alpha) > degree:
            alpha = tuple(int(e) for e in rng.integers(0, degree + 1, size=n))
        coeffs[alpha] = float(rng.normal())
    return polynomial(n, coeffs)
