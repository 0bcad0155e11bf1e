"""Time-sliced path integral with complex mass and complex polynomial potential.

One slice maps samples psi(q) on a contour to

    psi'(q') = sqrt(m / (2 pi i hbar dt)) * sum_k w_k exp(i m (q' - q_k)^2 / (2 hbar dt) - i dt V(q_k) / hbar) psi(q_k)

with trapezoid weights w_k along the contour.  Besides propagation the module
hosts the three routes to p = dL/dqdot (xi filtering, the Gaussian p integral
and the q saddle point) and a few Gaussian identities they rely on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .conjugation import AnalyticFunction, mod_conjugate
from .contour import Contour, NonDecayError, QuadratureRule, make_tilted_line, node_weights, quad
from .fock import FockConstruction, gaussian_projection, hamiltonian, position_components
from .xi import XiBasisSpec

N_MAX = 6
NEWTON_TOL = 1e-12
NEWTON_MAXIT = 100

_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


class KineticDivergenceError(NonDecayError):
    """The kinetic Gaussian grows along the chosen contour."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class PotentialSpec:
    """V(q) = sum_n b_n q^n for 2 <= n <= 6."""

    coefficients: tuple = ()

    def __post_init__(self):
        items = self.coefficients.items() if isinstance(self.coefficients, dict) else self.coefficients
        clean = tuple(sorted((int(n), complex(b)) for n, b in items if b != 0))
        for n, _ in clean:
            if not 2 <= n <= N_MAX:
                raise ValueError(f"potential powers must lie in 2..{N_MAX}, got {n}")
        object.__setattr__(self, "coefficients", clean)

    def __call__(self, q):
        q = np.asarray(q, dtype=complex)
        out = np.zeros_like(q)
        for n, b in self.coefficients:
            out = out + b * q ** n
        return out

    def derivative(self, q, order: int = 1):
        q = np.asarray(q, dtype=complex)
        out = np.zeros_like(q)
        for n, b in self.coefficients:
            if n >= order:
                out = out + b * math.perm(n, order) * q ** (n - order)
        return out

    @property
    def is_free(self) -> bool:
        return not self.coefficients

    def as_dict(self) -> dict:
        return dict(self.coefficients)


@dataclass(frozen=True)
class TheorySpec:
    hbar: float = 1.0
    m: complex = 1.0
    dt: float = 0.01
    potential: PotentialSpec = field(default_factory=PotentialSpec)
    slices: int = 2
    contour: Contour | None = None

    def __post_init__(self):
        object.__setattr__(self, "m", complex(self.m))
        if not isinstance(self.potential, PotentialSpec):
            object.__setattr__(self, "potential", PotentialSpec(self.potential))
        if self.m.imag < 0:
            raise ValueError("the mass needs Im m >= 0")
        if self.m == 0:
            raise ValueError("the mass must be non-zero")
        if not (self.dt > 0 and self.hbar > 0):
            raise ValueError("dt and hbar must be positive")
        if self.slices < 2:
            raise ValueError("need at least two slices")

    @classmethod
    def over_interval(cls, t_i: float, t_f: float, slices: int, **kw) -> "TheorySpec":
        """dt = (t_f - t_i) / (slices - 1)."""
        return cls(dt=(t_f - t_i) / (slices - 1), slices=slices, **kw)

    @property
    def T(self) -> float:
        return self.dt * (self.slices - 1)

    @property
    def measure(self) -> complex:
        """sqrt(m / (2 pi i hbar dt)), principal branch."""
        return cmath.sqrt(self.m / (2j * math.pi * self.hbar * self.dt))

    def with_dt(self, dt: float) -> "TheorySpec":
        return TheorySpec(self.hbar, self.m, dt, self.potential, self.slices, self.contour)

    def xi_spec(self) -> XiBasisSpec:
        return XiBasisSpec(self.m, self.dt, self.hbar)


def default_tilt(m: complex) -> float:
    """Contour angle halfway into the wedge where both the kinetic kernel and
    a real Gaussian decay: (pi/4 - arg(m)/2) / 2."""
    return (math.pi / 4 - cmath.phase(complex(m)) / 2) / 2


def default_contour(ts: TheorySpec, U: float = 8.0, n: int = 1601) -> Contour:
    return ts.contour or make_tilted_line(default_tilt(ts.m), 0.0, U, n)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Samples of psi on the nodes of ``contour``; ``source`` keeps the analytic form."""

    contour: Contour
    values: np.ndarray
    source: AnalyticFunction | Callable | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != self.contour.nodes.shape:
            raise ValueError("samples must match the contour nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("wave function samples must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, f, contour: Contour) -> "WaveFunction":
        if isinstance(f, AnalyticFunction):
            (name,) = f.parameters
            vals = f.evaluate(**{name: contour.nodes})
        else:
            vals = f(contour.nodes)
        return cls(contour, vals, f)


def gaussian(center: complex = 0.0, width: float = 1.0, name: str = "q") -> AnalyticFunction:
    """exp(-(q - center)^2 / (2 width^2)) as an analytic function."""
    from .conjugation import exp, var
    d = var(name) - center
    return exp(-(1 / (2 * width ** 2)) * d * d)


# --- Lagrangian -------------------------------------------------------------

def lagrangian(ts: TheorySpec, q, qdot):
    return 0.5 * ts.m * np.asarray(qdot) ** 2 - ts.potential(q)


def taylor_data(ts: TheorySpec, q):
    """(L, dL/dqdot, d2L/dqdot2) at qdot = 0."""
    return -ts.potential(q), 0j, ts.m


# --- one slice ----------------------------------------------------------------

def _kinetic_exponent(ts, qo, qi):
    return 1j * ts.m * (qo[:, None] - qi[None, :]) ** 2 / (2 * ts.hbar * ts.dt)


def propagate_step(ts: TheorySpec, psi: WaveFunction, out: Contour | None = None, *,
                   check: bool = True) -> WaveFunction:
    """One time slice by trapezoid quadrature on the nodes of ``psi.contour``.

    The result lives on ``out`` (default: the input contour).
    """
    c = psi.contour
    out = out or c
    qi, qo = c.nodes, out.nodes
    expo = _kinetic_exponent(ts, qo, qi)
    if check:
        scale = np.max(np.abs(expo))
        if np.max(expo.real) > 1e-9 * max(scale, 1.0):
            raise KineticDivergenceError(
                f"kinetic Gaussian grows along the contour (max Re exponent {np.max(expo.real):.3g}); "
                f"tilt the contour into 0 < arg m + 2 angle < pi")
        ends = np.abs(psi.values[[0, -1]])
        if np.max(ends) > 1e-8 * np.max(np.abs(psi.values)):
            raise NonDecayError("wave function does not decay at the contour ends")
    src = psi.values * np.exp(-1j * ts.dt * ts.potential(qi) / ts.hbar) * node_weights(c)
    vals = ts.measure * (np.exp(expo) @ src)
    return WaveFunction(out, vals)


def free_gaussian_step(ts: TheorySpec, a: complex, q0: complex, q):
    """Closed form of one free slice applied to exp(-a (q - q0)^2)."""
    b = -1j * ts.m / (2 * ts.hbar * ts.dt)
    q = np.asarray(q, dtype=complex)
    return np.sqrt(b / np.pi) * np.sqrt(np.pi / (a + b)) * np.exp(-a * b * (q - q0) ** 2 / (a + b))


def multi_slice_amplitude(ts: TheorySpec, psi_i: WaveFunction, psi_f: WaveFunction,
                          contours: list[Contour] | None = None) -> complex:
    """slices - 1 steps from psi_i, closed with the q-analytic conjugate of psi_f.

    ``contours`` (optional) gives the contour of every slice after the first.
    """
    if psi_f.source is None:
        raise ValueError("psi_f needs an analytic source for the modified conjugate")
    psi = psi_i
    for k in range(ts.slices - 1):
        nxt = contours[k] if contours else None
        psi = propagate_step(ts, psi, nxt)
    src = psi_f.source
    if isinstance(src, AnalyticFunction):
        (name,) = src.parameters
        bra = mod_conjugate(src, (name,)).evaluate(**{name: psi.contour.nodes})
    else:
        # a plain callable is taken to have real coefficients
        bra = src(psi.contour.nodes)
    return complex(np.sum(node_weights(psi.contour) * bra * psi.values))


# --- Fock-space oracle --------------------------------------------------------

def gaussian_fock_vector(fc: FockConstruction, center: complex, width: float) -> np.ndarray:
    """Fock components of exp(-(x - center)^2 / (2 width^2)) by ordinary projection."""
    A = 1 / (2 * width ** 2)
    return gaussian_projection(fc, A, 2 * A * center, -A * center ** 2)


def fock_amplitude(ts: TheorySpec, fc: FockConstruction, f_vec, i_vec) -> complex:
    """f^dag exp(-i H T / hbar) i with H = p_new^2/(2m) + V(q_new)."""
    H = hamiltonian(fc, ts.m, ts.potential.as_dict()).entries
    U = scipy.linalg.expm(-1j * H * ts.T / ts.hbar)
    return complex(np.conj(f_vec) @ (U @ i_vec))


def fock_wavefunction(fc: FockConstruction, vec, q) -> np.ndarray:
    """<q|_m vec, for checking a Fock vector against its wave function."""
    return position_components(fc, q) @ vec


# --- Hamiltonian emergence ------------------------------------------------------

def _second_derivative(values, c: Contour):
    dq = np.diff(c.nodes)
    if not np.allclose(dq, dq[0], rtol=1e-9, atol=1e-12):
        raise ValueError("second differences need a uniformly sampled straight contour")
    out = np.full(values.shape, np.nan + 0j)
    out[2:-2] = (np.lib.stride_tricks.sliding_window_view(values, 5) @ _D2) / dq[0] ** 2
    return out


def schrodinger_step(ts: TheorySpec, psi: WaveFunction) -> np.ndarray:
    """psi - (i dt / hbar)(-(hbar^2/2m) psi'' + V psi) on the interior nodes (NaN at the edges)."""
    d2 = _second_derivative(psi.values, psi.contour)
    H = -ts.hbar ** 2 / (2 * ts.m) * d2 + ts.potential(psi.contour.nodes) * psi.values
    return psi.values - 1j * ts.dt / ts.hbar * H


@dataclass(frozen=True)
class EffectiveHamiltonianReport:
    dts: tuple
    discrepancies: tuple
    orders: tuple
    min_order: float


def step_discrepancy(ts: TheorySpec, psi: WaveFunction, window: float | None = None) -> float:
    """Sup-norm of propagate_step - schrodinger_step over |u| <= window."""
    one = propagate_step(ts, psi).values
    ref = schrodinger_step(ts, psi)
    mask = np.isfinite(ref)
    if window is not None:
        mask &= np.abs(psi.contour.u) <= window
    return float(np.max(np.abs(one[mask] - ref[mask])))


def effective_hamiltonian_check(ts: TheorySpec, psi: WaveFunction,
                                dts=(0.04, 0.02, 0.01, 0.005), window: float | None = 4.0
                                ) -> EffectiveHamiltonianReport:
    """Empirical order of the one-slice error against the first-order Schrodinger step."""
    disc = tuple(step_discrepancy(ts.with_dt(d), psi, window) for d in dts)
    orders = tuple(math.log(disc[k] / disc[k + 1]) / math.log(dts[k] / dts[k + 1]) for k in range(len(dts) - 1))
    return EffectiveHamiltonianReport(tuple(dts), disc, orders, min(orders))


# --- xi filtering -----------------------------------------------------------------

def xi_filter_tilt(m: complex) -> float:
    """Tilt of both the q- and xi-contours: -arg(m)/2, clipped to 40 degrees."""
    lim = math.radians(40)
    return float(np.clip(-cmath.phase(complex(m)) / 2, -lim, lim))


@dataclass(frozen=True)
class XiProfile:
    xi: np.ndarray
    magnitude: np.ndarray
    argmax: complex
    step: float
    half_width: float


def xi_filter_integrand(ts: TheorySpec, xi: complex, q_target: complex, eta: float, tilt: float):
    """u -> exp(i dt L / hbar) psi_xi(q(u)) exp(-eta u^2) dq/du, exponents combined.

    The kinetic phase and the xi Gaussian cancel at second order, leaving
    i m (q_target - xi)(q_target + xi - 2q) / (2 hbar dt).
    """
    sp = ts.xi_spec()
    e = cmath.exp(1j * tilt)

    def f(u):
        q = np.asarray(u, dtype=complex) * e
        expo = (1j * ts.m * (q_target - xi) * (q_target + xi - 2 * q) / (2 * ts.hbar * ts.dt)
                - 1j * ts.dt * ts.potential(q) / ts.hbar - eta * u ** 2)
        return sp.C_A * np.exp(expo) * e
    return f


def xi_filter_value(ts: TheorySpec, xi: complex, q_target: complex, *, eta: float = 1e-2,
                    tilt: float | None = None, path: str = "saddle", segments: int | None = None) -> complex:
    """Regulated filter integral at one xi.

    ``path="saddle"`` integrates along the steepest-descent line of the
    quadratic-plus-linear part of the exponent in u (kinetic, xi, b_2 and the
    regulator); that is a parallel shift of the q-line, allowed because the
    regulated integrand is entire.  ``path="line"`` keeps real u; it is fine
    for real m but hopeless when the kernel is a real Gaussian (m = i).
    """
    tilt = xi_filter_tilt(ts.m) if tilt is None else tilt
    f = xi_filter_integrand(ts, xi, q_target, eta, tilt)
    if path == "line":
        U = math.sqrt(40.0 / eta)
        freq = abs(ts.m) * abs(q_target - xi) / (ts.hbar * ts.dt) + 1.0
        if segments is None:
            segments = int(min(max(200, U * freq), 100000))
        return quad(f, make_tilted_line(0.0, 0.0, U, segments + 1), QuadratureRule("gauss-legendre", 8))
    if path != "saddle":
        raise ValueError(f"unknown path {path!r}")
    e = cmath.exp(1j * tilt)
    b2 = ts.potential.as_dict().get(2, 0)
    Q = -eta - 1j * ts.dt * b2 * e * e / ts.hbar
    L = -1j * ts.m * (q_target - xi) * e / (ts.hbar * ts.dt)
    u0 = -L / (2 * Q)
    phi = -cmath.phase(-Q) / 2
    U = math.sqrt(60.0 / abs(Q))
    line = make_tilted_line(phi, u0, U, segments or 241, delta_wedge=False)
    return quad(f, line, QuadratureRule("gauss-legendre", 8), decay_tol=1e-12)


def xi_filter_closed_form(ts: TheorySpec, xi, q_target: complex, *, eta: float = 1e-2,
                          tilt: float | None = None):
    """Free-case value of :func:`xi_filter_value` (Gaussian integral in u)."""
    if not ts.potential.is_free:
        raise ValueError("closed form only for the free case")
    tilt = xi_filter_tilt(ts.m) if tilt is None else tilt
    e = cmath.exp(1j * tilt)
    xi = np.asarray(xi, dtype=complex)
    k = -1j * ts.m * (q_target - xi) * e / (ts.hbar * ts.dt)
    c0 = 1j * ts.m * (q_target - xi) * (q_target + xi) / (2 * ts.hbar * ts.dt)
    return ts.xi_spec().C_A * e * math.sqrt(math.pi / eta) * np.exp(c0 + k ** 2 / (4 * eta))


def xi_filter_profile(ts: TheorySpec, xi_grid, q_target: complex, *, eta: float = 1e-2,
                      tilt: float | None = None) -> XiProfile:
    """|I(xi)| over the grid, I(xi) = integral exp(i dt L/hbar) psi_xi(q) dq at q_{t+dt} = q_target.

    The q-contour is the line through 0 at ``tilt`` (default :func:`xi_filter_tilt`),
    regulated by exp(-eta u^2) in its parameter u.
    """
    xi_grid = np.asarray(xi_grid, dtype=complex)
    vals = np.array([xi_filter_value(ts, x, q_target, eta=eta, tilt=tilt) for x in xi_grid])
    mag = np.abs(vals)
    k = int(np.argmax(mag))
    steps = np.abs(np.diff(xi_grid))
    step = float(np.max(steps)) if steps.size else 0.0
    half = mag >= mag[k] / 2
    # contiguous run around the peak, padded by half a step on each side
    lo = k
    while lo > 0 and half[lo - 1]:
        lo -= 1
    hi = k
    while hi < len(mag) - 1 and half[hi + 1]:
        hi += 1
    width = (float(np.sum(steps[lo:hi])) if hi > lo else 0.0) / 2 + step / 2
    return XiProfile(xi_grid, mag, complex(xi_grid[k]), step, width)


def xi_grid(center: complex, half_range: float = 0.5, n: int = 201, tilt: float = 0.0) -> np.ndarray:
    return center + np.linspace(-half_range, half_range, n) * cmath.exp(1j * tilt)


# --- p integral ------------------------------------------------------------------

def p_exponent(ts: TheorySpec, p, qdot, q):
    return 1j * ts.dt / ts.hbar * (np.asarray(p) * qdot - np.asarray(p) ** 2 / (2 * ts.m) - ts.potential(q))


def p_steepest_angle(m: complex) -> float:
    """Direction through p = m qdot along which the p-Gaussian decays fastest."""
    return (cmath.phase(complex(m)) - math.pi / 2) / 2


def p_contour(ts: TheorySpec, qdot: complex, n: int = 401, widths: float = 12.0) -> Contour:
    width = math.sqrt(2 * ts.hbar * abs(ts.m) / ts.dt)
    return make_tilted_line(p_steepest_angle(ts.m), ts.m * qdot, widths * width, n, delta_wedge=False)


def p_gaussian_integral(ts: TheorySpec, qdot: complex, q: complex, c: Contour | None = None,
                        rule: QuadratureRule | None = None):
    """(numeric, closed form) of integral dp/(2 pi hbar) exp(i dt (p qdot - p^2/2m - V(q)) / hbar)."""
    c = c or p_contour(ts, qdot)
    num = quad(lambda p: np.exp(p_exponent(ts, p, qdot, q)), c, rule) / (2 * math.pi * ts.hbar)
    closed = ts.measure * cmath.exp(1j * ts.dt * complex(lagrangian(ts, q, qdot)) / ts.hbar)
    return complex(num), complex(closed)


def newton(g, dg, x0: complex, tol: float = NEWTON_TOL, maxit: int = NEWTON_MAXIT) -> complex:
    """Newton iteration on analytic g with damping when a step does not reduce |g|."""
    x = complex(x0)
    gx = complex(g(x))
    for _ in range(maxit):
        d = complex(dg(x))
        if d == 0:
            raise ConvergenceError("zero derivative")
        step = gx / d
        lam = 1.0
        while True:
            xn = x - lam * step
            gn = complex(g(xn))
            if abs(gn) < abs(gx) or lam < 1e-6:
                break
            lam /= 2
        x, gx = xn, gn
        if abs(lam * step) <= tol * max(1.0, abs(x)) or gx == 0:
            return x
    raise ConvergenceError(f"Newton did not converge in {maxit} iterations (|g| = {abs(gx):.3g})")


@dataclass(frozen=True)
class PSaddleReport:
    p: complex
    gradient: float
    newton: complex


def saddle_point_p(ts: TheorySpec, qdot: complex, q: complex = 0.0) -> PSaddleReport:
    """p = m qdot, the gradient of the p exponent there and a Newton solution from p = 0."""
    p = ts.m * qdot
    grad = lambda x: 1j * ts.dt / ts.hbar * (qdot - x / ts.m)
    hess = lambda x: -1j * ts.dt / (ts.hbar * ts.m)
    return PSaddleReport(complex(p), float(abs(grad(p))), newton(grad, hess, 0.0))


@dataclass(frozen=True)
class QSaddleReport:
    formula: complex
    numeric: complex
    discrepancy: float
    qdot: complex
    momentum_residual: float


def saddle_point_q(ts: TheorySpec, p: complex, p_prime: complex, q_next: complex, *,
                   potential_point: str = "next") -> QSaddleReport:
    """Stationary point in q_t of -(i/hbar)(p' q_{t+dt} - p q_t - L dt).

    ``potential_point="next"`` evaluates V at q_{t+dt}, which keeps the Taylor
    coefficients of L at qdot = 0 independent of q_t; ``"current"`` uses V(q_t)
    and adds dt V'(q_t) to the stationarity condition.  ``p_prime`` only shifts
    the exponent by a constant.
    """
    dt, m = ts.dt, ts.m
    _, dL0, d2L0 = taylor_data(ts, q_next)
    formula = q_next + dt / d2L0 * (dL0 - p)
    if potential_point == "next":
        g = lambda x: p - m * (q_next - x) / dt
        dg = lambda x: m / dt
    elif potential_point == "current":
        g = lambda x: p - m * (q_next - x) / dt - dt * complex(ts.potential.derivative(x))
        dg = lambda x: m / dt - dt * complex(ts.potential.derivative(x, 2))
    else:
        raise ValueError(f"unknown potential_point {potential_point!r}")
    qs = newton(g, dg, q_next)
    qdot = (q_next - qs) / dt
    # dL/dqdot = m qdot for L = m qdot^2 / 2 - V
    return QSaddleReport(complex(formula), complex(qs), abs(qs - formula), complex(qdot), abs(p - m * qdot))


# --- Gaussian identities -------------------------------------------------------------

def gaussian_moment(n: int, A: complex, qc: complex, c: Contour | None = None) -> complex:
    """integral q^n exp(-A (q - qc)^2) dq / sqrt(pi / A), on the steepest-descent line through qc."""
    width = 1 / math.sqrt(abs(A))
    c = c or make_tilted_line(-cmath.phase(A) / 2, qc, 12 * width, 241)
    val = quad(lambda q: q ** n * np.exp(-A * (q - qc) ** 2), c, decay_tol=1e-12)
    return val / cmath.sqrt(math.pi / A)


def gaussian_moment_exact(n: int, A: complex, qc: complex) -> complex:
    """sum_k C(n, 2k) qc^(n-2k) (2k-1)!! / (2A)^k."""
    total = 0j
    for k in range(n // 2 + 1):
        dfact = math.prod(range(2 * k - 1, 0, -2)) if k else 1
        total += math.comb(n, 2 * k) * qc ** (n - 2 * k) * dfact / (2 * A) ** k
    return total


def delta_expansion(f, beta: complex, alpha: float, c: Contour | None = None) -> complex:
    """integral f(x) sqrt(alpha/pi) exp(-alpha (x - beta)^2) dx."""
    width = 1 / math.sqrt(alpha)
    c = c or make_tilted_line(0.0, beta, 12 * width, 241)
    return quad(lambda x: f(x) * math.sqrt(alpha / math.pi) * np.exp(-alpha * (x - beta) ** 2), c, decay_tol=1e-12)


def delta_expansion_fit(f, beta: complex, alphas=(50.0, 100.0, 200.0, 400.0, 800.0)):
    """Least-squares fit value(alpha) = c0 + c1/alpha + c2/alpha^2; returns (c0, c1, c2)."""
    alphas = np.asarray(alphas, dtype=float)
    vals = np.array([delta_expansion(f, beta, a) for a in alphas])
    X = np.stack([np.ones_like(alphas), 1 / alphas, 1 / alphas ** 2], axis=1)
    coef, *_ = np.linalg.lstsq(X.astype(complex), vals, rcond=None)
    return tuple(complex(c) for c in coef)


# --- round trip -----------------------------------------------------------------------

@dataclass(frozen=True)
class RoundTripReport:
    mass_coefficient: complex
    potential_coefficients: dict
    max_error: float


def round_trip(ts: TheorySpec, samples: int = 12, seed: int = 0) -> RoundTripReport:
    """Recover L from the p integral on sampled (q, qdot) and fit its coefficients.

    For each sample the Gaussian p integral of exp(i dt (p qdot - H) / hbar),
    H = p^2/2m + V, is divided by the measure and its logarithm turned back into
    L; a least-squares fit on {qdot^2, q^n} returns m/2 and -b_n.
    """
    rng = np.random.default_rng(seed)
    powers = [n for n, _ in ts.potential.coefficients] or [2]
    q = rng.uniform(-0.5, 0.5, samples) + 1j * rng.uniform(-0.1, 0.1, samples)
    qd = rng.uniform(-0.5, 0.5, samples) + 1j * rng.uniform(-0.1, 0.1, samples)
    L = []
    for a, b in zip(q, qd):
        num, _ = p_gaussian_integral(ts, b, a)
        L.append(np.log(num / ts.measure) * ts.hbar / (1j * ts.dt))
    L = np.array(L)
    X = np.stack([qd ** 2] + [q ** n for n in powers], axis=1)
    coef, *_ = np.linalg.lstsq(X, L, rcond=None)
    mass = 2 * coef[0]
    pot = {n: complex(-c) for n, c in zip(powers, coef[1:])}
    target = ts.potential.as_dict()
    err = abs(mass - ts.m)
    for n in powers:
        err = max(err, abs(pot[n] - target.get(n, 0)))
    return RoundTripReport(complex(mass), pot, float(err))
