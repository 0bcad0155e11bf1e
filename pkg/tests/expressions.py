"""Random members of the polynomial-times-Gaussian family for property tests."""

import numpy as np

from complexaction.conjugation import AnalyticFunction, exp, var

NAMES = ("q", "p", "u")


def _coeff(rng):
    # quarter-integers keep every product and sum exact in binary floating point
    return complex(*(rng.integers(-8, 9, 2) / 4))


def random_expression(rng, names=NAMES, max_terms=3) -> AnalyticFunction:
    out = AnalyticFunction.constant(0)
    for _ in range(int(rng.integers(1, max_terms + 1))):
        term = AnalyticFunction.constant(_coeff(rng))
        for n in names:
            v = var(n + "*") if rng.random() < 0.3 else var(n)
            term = term * v ** int(rng.integers(0, 3))
        if rng.random() < 0.5:
            a, b = rng.choice(names, 2)
            term = term * exp(_coeff(rng) * var(a) * var(b) + _coeff(rng) * var(a))
        out = out + term
    return out


def random_analytic_set(rng, names=NAMES):
    return tuple(n for n in names if rng.random() < 0.5)
