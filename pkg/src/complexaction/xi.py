"""Gaussian momentum eigenfunctions labelled by the next-slice coordinate xi.

    psi_xi(q)        = C_A exp(-C1 (q - xi)^2)
    anti ket (q)     = C_B exp(C1* (q - xi)^2)
    anti bra (q)     = C_B* exp(C1 (q - xi)^2)

with C1 = i m / (2 hbar dt), C_A = sqrt(m / (2 pi hbar dt)) and
C_B = sqrt(m* / (2 pi hbar dt)) on the principal branch.  psi_xi solves
(hbar/i) d/dq psi = m (xi - q)/dt psi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .conjugation import AnalyticFunction, exp as a_exp, mod_conjugate, var
from .contour import Contour, NonDecayError, QuadratureRule, make_tilted_line, quad
from .delta import delta_eps

ETA_SWEEP = (1e-2, 1e-3, 1e-4)

_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


@dataclass(frozen=True)
class XiBasisSpec:
    m: complex = 1.0
    dt: float = 0.01
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "m", complex(self.m))
        if self.m.imag < 0:
            raise ValueError("the mass needs Im m >= 0")
        if self.m == 0:
            raise ValueError("the mass must be non-zero")
        if not (self.dt > 0 and self.hbar > 0):
            raise ValueError("dt and hbar must be positive")

    @property
    def C1(self) -> complex:
        return 1j * self.m / (2 * self.hbar * self.dt)

    @property
    def C_A(self) -> complex:
        return cmath.sqrt(self.m / (2 * math.pi * self.hbar * self.dt))

    @property
    def C_B(self) -> complex:
        return cmath.sqrt(self.m.conjugate() / (2 * math.pi * self.hbar * self.dt))

    def momentum(self, q, xi):
        """dL/dqdot at qdot = (xi - q)/dt."""
        return self.m * (np.asarray(xi) - np.asarray(q)) / self.dt


@dataclass(frozen=True)
class XiState:
    xi: complex
    spec: XiBasisSpec


def xi_wavefunction(s: XiState, q):
    q = np.asarray(q, dtype=complex)
    sp = s.spec
    return sp.C_A * np.exp(-sp.C1 * (q - s.xi) ** 2)


def anti_xi_wavefunction(s: XiState, q):
    """Ket form C_B exp(C1* (q - xi)^2); decays along real q when Im m > 0."""
    q = np.asarray(q, dtype=complex)
    sp = s.spec
    return sp.C_B * np.exp(np.conj(sp.C1) * (q - s.xi) ** 2)


def anti_xi_bra(s: XiState, q):
    """Bra form C_B* exp(C1 (q - xi)^2)."""
    q = np.asarray(q, dtype=complex)
    sp = s.spec
    return np.conj(sp.C_B) * np.exp(sp.C1 * (q - s.xi) ** 2)


def log_xi_wavefunction(s: XiState, q):
    q = np.asarray(q, dtype=complex)
    return np.log(s.spec.C_A) - s.spec.C1 * (q - s.xi) ** 2


def log_anti_xi_wavefunction(s: XiState, q):
    q = np.asarray(q, dtype=complex)
    return np.log(s.spec.C_B) + np.conj(s.spec.C1) * (q - s.xi) ** 2


# symbolic forms in the parameters q and xi

def xi_symbolic(spec: XiBasisSpec) -> AnalyticFunction:
    d = var("q") - var("xi")
    return a_exp(-spec.C1 * d * d) * spec.C_A


def anti_xi_symbolic(spec: XiBasisSpec) -> AnalyticFunction:
    d = var("q") - var("xi")
    return a_exp(np.conj(spec.C1) * d * d) * spec.C_B


def anti_bra_symbolic(spec: XiBasisSpec) -> AnalyticFunction:
    """The anti bra is the (q, xi)-analytic conjugate of the anti ket."""
    return mod_conjugate(anti_xi_symbolic(spec), ("q", "xi"))


def eigenvalue_identity(spec: XiBasisSpec) -> tuple[AnalyticFunction, AnalyticFunction]:
    """Both sides of (hbar/i) d/dq psi_xi = m (xi - q)/dt psi_xi, symbolically."""
    psi = xi_symbolic(spec)
    lhs = psi.diff("q") * (spec.hbar / 1j)
    rhs = (var("xi") - var("q")) * (spec.m / spec.dt) * psi
    return lhs, rhs


# annihilating operators

def annihilator_residual(s: XiState, flavor: str = "momentum", q_grid=None, *, step: float = 1e-4,
                         ordering: str = "ordered") -> float:
    """max |A(xi) psi_xi| / |psi_xi| over the grid, derivatives by five-point differences.

    ``flavor="momentum"``:   A = (hbar/i) d/dq - p_xi(q)
    ``flavor="hamiltonian"``: ``ordering="ordered"`` uses (p + p_xi)(p - p_xi)/(2m),
    which annihilates psi_xi exactly; ``ordering="literal"`` uses
    -(hbar^2/2m) d^2/dq^2 - p_xi^2/(2m), which leaves i hbar/(2 dt).
    """
    sp = s.spec
    if q_grid is None:
        q_grid = s.xi + np.linspace(-0.5, 0.5, 101)
    q = np.asarray(q_grid, dtype=complex)
    if step * math.sqrt(abs(sp.C1)) > 1e-2:
        raise ValueError(f"step {step:g} too coarse for width 1/sqrt|C1| = {1 / math.sqrt(abs(sp.C1)):.3g}")
    offs = step * np.arange(-2, 3)
    vals = xi_wavefunction(s, q[:, None] + offs[None, :])
    psi = vals[:, 2]
    p_xi = sp.momentum(q, s.xi)
    if flavor == "momentum":
        out = sp.hbar / 1j * (vals @ _D1) / step - p_xi * psi
    elif flavor == "hamiltonian":
        d2 = (vals @ _D2) / step ** 2
        out = -sp.hbar ** 2 / (2 * sp.m) * d2 - p_xi ** 2 / (2 * sp.m) * psi
        if ordering == "ordered":
            out = out - 1j * sp.hbar / (2 * sp.dt) * psi
        elif ordering != "literal":
            raise ValueError(f"unknown ordering {ordering!r}")
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return float(np.max(np.abs(out) / np.abs(psi)))


# biorthogonality

@dataclass(frozen=True)
class BiorthogonalityReport:
    numeric: complex
    closed_form: complex
    rel_error: float
    eta: float
    epsilon: complex


def pair_integrand(spec: XiBasisSpec, xi: complex, xi_prime: complex, eta: float):
    """q -> psi_xi'(q) anti-bra_xi(q) exp(-eta q^2)."""
    # (q-xi)^2 - (q-xi')^2 expanded, so growing factors never meet separately
    pref = spec.C_A * np.conj(spec.C_B)

    def f(q):
        q = np.asarray(q, dtype=complex)
        return pref * np.exp(spec.C1 * (xi_prime - xi) * (2 * q - xi - xi_prime) - eta * q ** 2)
    return f


def pair_closed_form(spec: XiBasisSpec, xi, xi_prime, eta: float):
    """Regulated pair integral: delta_{eps}(xi - xi') exp(C1 (xi^2 - xi'^2)), eps = eta (hbar dt / m)^2."""
    xi = np.asarray(xi, dtype=complex)
    eps = eta * (spec.hbar * spec.dt / spec.m) ** 2
    pref = spec.C_A * np.conj(spec.C_B) * np.sqrt(np.pi / eta)
    return pref * np.exp(spec.C1 ** 2 * (xi_prime - xi) ** 2 / eta) * np.exp(spec.C1 * (xi ** 2 - xi_prime ** 2)), eps


def _pair_contour(spec: XiBasisSpec, xi, xi_prime, eta, through_saddle=True):
    """Horizontal line through the saddle C1 (xi' - xi) / eta of the regulated integrand.

    With ``through_saddle=False`` the real line is used instead; it oscillates
    at frequency 2|C1||xi - xi'| and overflows for complex m.
    """
    U = math.sqrt(40.0 / eta)
    if through_saddle:
        return make_tilted_line(0.0, spec.C1 * (xi_prime - xi) / eta, U, 401)
    # resolve the oscillation with GL-8 on segments of phase <= 2
    freq = 2 * abs(spec.C1) * abs(xi - xi_prime) + 1.0
    n = int(min(max(201, 2 * U * freq / 2.0), 200001))
    return make_tilted_line(0.0, 0.0, U, n)


def _check_regulator(spec: XiBasisSpec):
    if abs(cmath.phase(spec.m)) >= math.pi / 4:
        raise NonDecayError(f"pair integral is no delta for arg m = {cmath.phase(spec.m):.3f} (needs |arg m| < pi/4)")


def biorthogonality_check(spec: XiBasisSpec, xi: complex, xi_prime: complex, c: Contour | None = None,
                          eta: float = 1e-2) -> BiorthogonalityReport:
    """Quadrature of the regulated pair integral against its closed form.

    The regulated pair integral is a tamed delta of complex width
    eps = eta (hbar dt / m)^2, which only sifts while |arg m| < pi/4.
    """
    _check_regulator(spec)
    c = c or _pair_contour(spec, xi, xi_prime, eta)
    num = quad(pair_integrand(spec, xi, xi_prime, eta), c, QuadratureRule("gauss-legendre", 8))
    cf, eps = pair_closed_form(spec, xi, xi_prime, eta)
    cf = complex(cf)
    scale = abs(pair_closed_form(spec, xi_prime, xi_prime, eta)[0])
    return BiorthogonalityReport(num, cf, abs(num - cf) / scale, eta, complex(eps))


def sift_test_function(spec: XiBasisSpec, g, xi_prime: complex, eta: float = 1e-2, *,
                       n_xi: int = 401, c: Contour | None = None) -> complex:
    """Double quadrature: integral d xi [pair integral(xi, xi')] g(xi).

    The inner integral is done numerically for every xi node; the outer one by
    trapezoid over +-10 widths of the regulated delta.
    """
    _check_regulator(spec)
    eps = abs(eta * (spec.hbar * spec.dt / spec.m) ** 2)
    half = 10 * math.sqrt(4 * eps)
    xs = xi_prime + np.linspace(-half, half, n_xi)
    rule = QuadratureRule("gauss-legendre", 8)
    vals = np.array([quad(pair_integrand(spec, x, xi_prime, eta), c or _pair_contour(spec, x, xi_prime, eta), rule)
                     for x in xs])
    return complex(np.trapezoid(vals * g(xs), xs))


def real_mass_delta_peak(spec: XiBasisSpec, eta: float) -> float:
    """Peak of the regulating tamed delta at xi = xi'."""
    return float(np.real(delta_eps(0.0, abs(eta * (spec.hbar * spec.dt / spec.m) ** 2))))
