import numpy as np

from anosovlab import weyl


def random_polynomial(rng, max_support=50, max_index=30, gamma=weyl.DEFAULT_GAMMA):
    """Random element with unit-disk coefficients and bounded support."""
    n = int(rng.integers(1, max_support + 1))
    nu = rng.integers(-max_index, max_index + 1, size=(n, 2))
    radius = np.sqrt(rng.random(n))
    coeff = radius * np.exp(2j * np.pi * rng.random(n))
    return weyl.WeylPolynomial(nu, coeff, gamma)


def max_coeff(poly) -> float:
    return float(np.abs(poly.coeff).max()) if len(poly.coeff) else 0.0
