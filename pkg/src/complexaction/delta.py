"""Gaussian-regularised delta function of a complex argument."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite

from .contour import Contour, QuadratureRule, quad

EPS_SWEEP = (1e-2, 1e-3, 1e-4, 1e-5)

# half-window of a sift integral in units of sqrt(4 eps); exp(-49) ~ 5e-22
_WINDOW = 7.0


class WedgeError(ValueError):
    """The delta-function argument leaves the region (Re z)^2 > (Im z)^2."""


@dataclass(frozen=True)
class TamedDelta:
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    def __call__(self, q):
        return delta_eps(q, self.epsilon)

    def derivative(self, q, n: int):
        return delta_eps_derivative(q, self.epsilon, n)


@dataclass(frozen=True)
class DeltaValue:
    value: complex
    in_domain: bool
    divergent: bool


def _check_eps(epsilon):
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")


def delta_eps(q, epsilon: float):
    """sqrt(1/(4 pi eps)) exp(-q^2/(4 eps)) for complex q (vectorised)."""
    _check_eps(epsilon)
    q = np.asarray(q, dtype=complex)
    out = np.sqrt(1.0 / (4 * np.pi * epsilon)) * np.exp(-q * q / (4 * epsilon))
    return out if out.ndim else complex(out)


def delta_eps_derivative(q, epsilon: float, n: int):
    """n-th derivative of :func:`delta_eps` with respect to its argument.

    Uses d^n/dx^n exp(-x^2) = (-1)^n H_n(x) exp(-x^2) with x = q / sqrt(4 eps).
    """
    _check_eps(epsilon)
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    s = np.sqrt(4 * epsilon)
    x = np.asarray(q, dtype=complex) / s
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    out = (-1 / s) ** n * hermite.hermval(x, coeffs) * delta_eps(np.asarray(q, dtype=complex), epsilon)
    return out if np.ndim(out) else complex(out)


def in_domain(q):
    """True where (Re q)^2 > (Im q)^2; the boundary counts as outside."""
    q = np.asarray(q, dtype=complex)
    out = q.real ** 2 > q.imag ** 2
    return out if out.ndim else bool(out)


def delta_point(q: complex, epsilon: float) -> DeltaValue:
    """Value plus flags.  Outside the wedge |delta| grows as eps -> 0."""
    q = complex(q)
    inside = bool(in_domain(q)) or q == 0
    divergent = q == 0 or (q.imag ** 2 > q.real ** 2)
    with np.errstate(over="ignore"):
        val = delta_eps(q, epsilon)
    return DeltaValue(val, inside, bool(divergent))


def _window(c: Contour, a: complex, epsilon: float, n: int) -> Contour:
    u_a = c.closest_parameter(a)
    speed = np.min(np.abs(c.tangents))
    half = _WINDOW * np.sqrt(4 * epsilon) / speed
    return c.subpath(u_a - half, u_a + half, n)


def check_wedge(c: Contour, a: complex, rtol: float = 1e-9) -> None:
    z = c.nodes - a
    scale = max(1.0, float(np.max(np.abs(z))))
    z = z[np.abs(z) > rtol * scale]
    bad = ~in_domain(z)
    if np.any(bad):
        raise WedgeError(f"q - a leaves the delta wedge at {int(bad.sum())} contour samples "
                         f"(e.g. q = {complex(c.nodes[np.abs(c.nodes - a) > rtol * scale][bad][0]):.4g})")


def _callable(f):
    if hasattr(f, "evaluate"):
        names = f.parameters
        if len(names) > 1:
            raise ValueError("test function must depend on one parameter")
        if not names:
            return lambda q: f.evaluate() * np.ones_like(q)
        return lambda q: f.evaluate(**{names[0]: q})
    return f


def sift(f, a: complex, c: Contour, epsilon: float, *, n: int = 201,
         rule: QuadratureRule | None = None) -> complex:
    """Integral of f(q) delta_eps(q - a) along ``c``.

    Only the stretch of the contour within seven regulator widths of ``a``
    is integrated; outside it the Gaussian is below 1e-21.  The error
    against f(a) is f''(a) eps + O(eps^2).
    """
    return sift_derivative(f, a, c, epsilon, 0, n=n, rule=rule)


def sift_derivative(f, a: complex, c: Contour, epsilon: float, order: int, *,
                    n: int = 201, rule: QuadratureRule | None = None) -> complex:
    """Integral of f(q) d^n/dq^n delta_eps(q - a); tends to (-1)^n f^(n)(a)."""
    _check_eps(epsilon)
    check_wedge(c, a)
    g = _callable(f)
    piece = _window(c, a, epsilon, n)
    if order == 0:
        integrand = lambda q: g(q) * delta_eps(q - a, epsilon)
    else:
        integrand = lambda q: g(q) * delta_eps_derivative(q - a, epsilon, order)
    return quad(integrand, piece, rule or QuadratureRule("gauss-legendre", 8), decay_tol=1e-12)


def sift_sweep(f, a: complex, c: Contour, eps_values=EPS_SWEEP) -> np.ndarray:
    return np.array([sift(f, a, c, e) for e in eps_values])


def convergence_ratios(errors) -> np.ndarray:
    """Successive error ratios |e_k| / |e_{k+1}| of a halving sweep."""
    e = np.abs(np.asarray(errors))
    return e[:-1] / e[1:]


def richardson_limit(f, a: complex, c: Contour, epsilon: float) -> complex:
    """Remove the O(eps) term: 2 sift(eps/2) - sift(eps)."""
    return 2 * sift(f, a, c, epsilon / 2) - sift(f, a, c, epsilon)


def domain_grid(extent: float = 2.0, n: int = 41, epsilon: float = 0.05):
    """Rows (re_q, im_q, re_delta, im_delta, in_domain) over a square grid."""
    xs = np.linspace(-extent, extent, n)
    rows = []
    for im in xs:
        for re in xs:
            q = complex(re, im)
            with np.errstate(over="ignore"):
                v = delta_eps(q, epsilon)
            rows.append((re, im, v.real, v.imag, bool(in_domain(q))))
    return rows
