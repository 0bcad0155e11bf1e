"""Non-hermitian coordinate and momentum operators on a truncated Fock space.

Two oscillators are involved: the "unprimed" one with mass-frequency product
``m_omega`` whose Fock basis carries every matrix here, and a "primed" one
with ``mp_omegap`` whose coherent states build |p>_new.  With
r = mp_omegap / m_omega the constructions are

    q_new = (q - i p / m_omega) / sqrt(1 - r)
    p_new = (p + i mp_omegap q) / sqrt(1 - r)

and |q>_new, |p>_new are Gaussian-weighted coherent states.  Modified bras
keep the eigenvalue analytic: since both oscillator constants are real, the
modified bra of a ket is its plain transpose.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .conjugation import ComponentVector, exp as a_exp, var
from .contour import Contour, QuadratureRule, quadrature_nodes
from .delta import WedgeError, delta_eps, in_domain


class TruncationWarning(UserWarning):
    """A coherent amplitude is large compared with the truncation."""


@dataclass(frozen=True)
class FockConstruction:
    N: int = 64
    hbar: float = 1.0
    m_omega: float = 100.0
    mp_omegap: float = 0.01

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if not (self.hbar > 0 and self.m_omega > 0 and self.mp_omegap > 0):
            raise ValueError("hbar, m_omega and mp_omegap must be positive")
        if not self.r < 1:
            raise ValueError(f"need mp_omegap < m_omega (r = {self.r:.4g})")

    @property
    def r(self) -> float:
        return self.mp_omegap / self.m_omega

    @property
    def eps1(self) -> float:
        return self.hbar / (self.m_omega * (1 - self.r))

    @property
    def eps1_prime(self) -> float:
        return self.hbar * self.mp_omegap / (1 - self.r)

    @property
    def kappa(self) -> float:
        """lambda = kappa * q for the position eigenstates."""
        return math.sqrt(self.m_omega * (1 - self.r) / (2 * self.hbar))

    @property
    def kappa_prime(self) -> complex:
        """lambda' = kappa' * p for the momentum eigenstates."""
        return 1j * math.sqrt((1 - self.r) / (2 * self.hbar * self.mp_omegap))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator matrix has non-finite entries")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    @property
    def H(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.label + "^dag")

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def __add__(self, other):
        return OperatorMatrix(self.entries + other.entries)

    def __sub__(self, other):
        return OperatorMatrix(self.entries - other.entries)

    def __mul__(self, c):
        return OperatorMatrix(self.entries * c, self.label)

    __rmul__ = __mul__

    def commutator(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries @ other.entries - other.entries @ self.entries,
                              f"[{self.label},{other.label}]")


def ladder_matrices(fc: FockConstruction):
    """(a, a^dag) with a|n> = sqrt(n)|n-1>."""
    a = np.diag(np.sqrt(np.arange(1, fc.N, dtype=float)), 1)
    return OperatorMatrix(a, "a"), OperatorMatrix(a.T, "a^dag")


def position_momentum(fc: FockConstruction, *, primed: bool = False):
    """(q, p) from the ladder operators of either oscillator."""
    a, ad = ladder_matrices(fc)
    mw = fc.mp_omegap if primed else fc.m_omega
    q = math.sqrt(fc.hbar / (2 * mw)) * (a.entries + ad.entries)
    p = 1j * math.sqrt(fc.hbar * mw / 2) * (ad.entries - a.entries)
    return OperatorMatrix(q, "q"), OperatorMatrix(p, "p")


def new_operators(fc: FockConstruction, *, primed: bool = False):
    """(q_new, p_new) in the Fock basis of the unprimed (default) or primed oscillator."""
    q, p = position_momentum(fc, primed=primed)
    s = math.sqrt(1 - fc.r)
    qn = (q.entries - 1j * p.entries / fc.m_omega) / s
    pn = (p.entries + 1j * fc.mp_omegap * q.entries) / s
    return OperatorMatrix(qn, "q_new"), OperatorMatrix(pn, "p_new")


def hamiltonian(fc: FockConstruction, m: complex, potential=(), *, primed: bool = False) -> OperatorMatrix:
    """p_new^2/(2m) + sum_n b_n q_new^n with ``potential`` = {n: b_n} or [(n, b_n)]."""
    qn, pn = new_operators(fc, primed=primed)
    H = pn.entries @ pn.entries / (2 * m)
    items = potential.items() if isinstance(potential, dict) else potential
    for n, b in items:
        H = H + b * np.linalg.matrix_power(qn.entries, n)
    return OperatorMatrix(H, "H")


def hermitian_split(H: OperatorMatrix):
    """(H_h, H_a) = ((H + H^dag)/2, (H - H^dag)/2)."""
    M = H.entries
    return (OperatorMatrix((M + M.conj().T) / 2, "H_h"),
            OperatorMatrix((M - M.conj().T) / 2, "H_a"))


# --- states ---------------------------------------------------------------

def _check_comfort(lam, N):
    lam = np.asarray(lam)
    if np.any(np.abs(lam) ** 2 > N / 4):
        warnings.warn(f"|lambda|^2 = {float(np.max(np.abs(lam)) ** 2):.3g} exceeds N/4 = {N / 4:g}; "
                      "truncation error may be large", TruncationWarning, stacklevel=3)


def coherent_components(lam, N: int) -> np.ndarray:
    """lambda^n / sqrt(n!) for n < N, along the last axis.  Broadcasts over lam."""
    lam = np.asarray(lam, dtype=complex)
    out = np.empty(lam.shape + (N,), dtype=complex)
    out[..., 0] = 1.0
    for n in range(1, N):
        out[..., n] = out[..., n - 1] * lam / math.sqrt(n)
    return out


@dataclass(frozen=True, eq=False)
class CoherentState:
    lam: complex
    components: np.ndarray = field(repr=False)


def coherent_state(fc: FockConstruction, lam: complex) -> CoherentState:
    _check_comfort(lam, fc.N)
    return CoherentState(complex(lam), coherent_components(lam, fc.N))


@dataclass(frozen=True, eq=False)
class NewEigenstate:
    """|q>_new or |p>_new.  Momentum states live in the primed Fock basis."""

    kind: str
    eigenvalue: complex
    lam: complex
    prefactor: complex
    components: np.ndarray = field(repr=False)


def position_components(fc: FockConstruction, q) -> np.ndarray:
    """Components of |q>_new in the unprimed basis; broadcasts over q."""
    q = np.asarray(q, dtype=complex)
    k = fc.kappa
    pref = (fc.m_omega * (1 - fc.r) / (4 * np.pi * fc.hbar)) ** 0.25 * np.exp(-(k * q) ** 2 / 2)
    return pref[..., None] * coherent_components(k * q, fc.N)


def new_state(fc: FockConstruction, kind: str, eigenvalue: complex) -> NewEigenstate:
    z = complex(eigenvalue)
    if kind == "position":
        lam = fc.kappa * z
        _check_comfort(lam, fc.N)
        pref = (fc.m_omega * (1 - fc.r) / (4 * np.pi * fc.hbar)) ** 0.25 * np.exp(-lam ** 2 / 2)
    elif kind == "momentum":
        lam = fc.kappa_prime * z
        _check_comfort(lam, fc.N)
        pref = ((1 - fc.r) / (4 * np.pi * fc.hbar * fc.mp_omegap)) ** 0.25 \
            * np.exp(-(1 - fc.r) * z ** 2 / (4 * fc.hbar * fc.mp_omegap))
    else:
        raise ValueError(f"kind must be 'position' or 'momentum', got {kind!r}")
    return NewEigenstate(kind, z, complex(lam), complex(pref), pref * coherent_components(lam, fc.N))


def position_state_symbolic(fc: FockConstruction, name: str = "q") -> ComponentVector:
    """|q>_new as analytic functions of the eigenvalue parameter."""
    q = var(name)
    k = fc.kappa
    pref = (fc.m_omega * (1 - fc.r) / (4 * np.pi * fc.hbar)) ** 0.25
    gauss = a_exp(-(k * k / 2) * q * q)
    entries = [gauss * (pref * k ** n / math.sqrt(math.factorial(n))) * q ** n for n in range(fc.N)]
    return ComponentVector(tuple(entries))


def modified_bra(state: NewEigenstate) -> np.ndarray:
    """Row vector of the modified bra (eigenvalue kept analytic): the transpose."""
    return state.components.copy()


# --- relations ------------------------------------------------------------

def eigen_residual(fc: FockConstruction, q: complex) -> float:
    """||(q_new^dag - q)|q>_new|| / |||q>_new||."""
    qn, _ = new_operators(fc)
    v = new_state(fc, "position", q).components
    return float(np.linalg.norm(qn.H @ v - q * v) / np.linalg.norm(v))


def momentum_eigen_residual(fc: FockConstruction, p: complex) -> float:
    """||(p_new^dag - p)|p>_new|| / |||p>_new|| in the primed basis."""
    _, pn = new_operators(fc, primed=True)
    v = new_state(fc, "momentum", p).components
    return float(np.linalg.norm(pn.H @ v - p * v) / np.linalg.norm(v))


_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def derivative_residual(fc: FockConstruction, q: complex, step: float = 1e-4) -> dict:
    """Compare a central difference of |q>_new in q with p_new^dag|q>_new / (i hbar).

    Returns absolute and relative residual norms.  The truncated construction
    satisfies p_new^dag|q> = i hbar d/dq |q> + i mp_omegap q |q> exactly, so
    the residual is mp_omegap |q| |||q>|| / hbar plus difference error.
    """
    _, pn = new_operators(fc)
    offsets = step * np.arange(-2, 3)
    stack = position_components(fc, q + offsets)
    fd = _STENCIL @ stack / step
    v = position_components(fc, q)
    rhs = (pn.H @ v) / (1j * fc.hbar)
    diff = np.linalg.norm(fd - rhs)
    return {"absolute": float(diff), "relative": float(diff / np.linalg.norm(rhs)) if np.linalg.norm(rhs) else float(diff),
            "predicted": float(fc.mp_omegap * abs(q) * np.linalg.norm(v) / fc.hbar)}


def gaussian_projection(fc: FockConstruction, A: complex, B: complex = 0.0, C: complex = 0.0,
                        n: int | None = None) -> np.ndarray:
    """<n|psi> for psi(x) = exp(-A x^2 + B x + C) and the unprimed Fock states, n < N.

    From the generating function sum_n t^n/sqrt(n!) <n|psi> = d_0 exp(a t^2 + b t)
    the amplitudes obey d_{n+1} = (b d_n + 2 a sqrt(n) d_{n-1}) / sqrt(n+1).
    Needs Re(A) > -m omega / (2 hbar).
    """
    n = fc.N if n is None else n
    alpha = fc.m_omega / (2 * fc.hbar) + A
    c = math.sqrt(2 * fc.m_omega / fc.hbar)
    a = c * c / (4 * alpha) - 0.5
    b = c * B / (2 * alpha)
    d = np.empty(n, dtype=complex)
    d[0] = (fc.m_omega / (np.pi * fc.hbar)) ** 0.25 * np.sqrt(np.pi / alpha) * np.exp(B * B / (4 * alpha) + C)
    if n > 1:
        d[1] = b * d[0]
    for k in range(1, n - 1):
        d[k + 1] = (b * d[k] + 2 * a * math.sqrt(k) * d[k - 1]) / math.sqrt(k + 1)
    return d


def momentum_in_unprimed_basis(fc: FockConstruction, p: complex, n: int | None = None) -> np.ndarray:
    """<n|p>_new for the unprimed Fock states, n < N.

    <x|p>_new = (1-r)^(1/4) / sqrt(2 pi hbar) exp(i sqrt(1-r) p x / hbar - mp_omegap x^2 / (2 hbar)).
    """
    pref = (1 - fc.r) ** 0.25 / math.sqrt(2 * np.pi * fc.hbar)
    B = 1j * math.sqrt(1 - fc.r) * complex(p) / fc.hbar
    return pref * gaussian_projection(fc, fc.mp_omegap / (2 * fc.hbar), B, 0.0, n)


def overlap_qp(fc: FockConstruction, q: complex, p: complex) -> complex:
    """Modified-bra overlap of |q>_new with |p>_new, summed in the unprimed basis."""
    bra = modified_bra(new_state(fc, "position", q))
    return complex(bra @ momentum_in_unprimed_basis(fc, p))


def fourier_target(q: complex, p: complex, hbar: float = 1.0) -> complex:
    return complex(np.exp(1j * p * q / hbar) / np.sqrt(2 * np.pi * hbar))


@dataclass(frozen=True)
class OrthogonalityReport:
    inner: complex
    target: complex
    ratio: complex
    abs_error: float
    rel_error: float


def orthogonality_check(fc: FockConstruction, q: complex, q_prime: complex) -> OrthogonalityReport:
    """Modified-bra inner product <q'|q>_new against the tamed delta of width eps1."""
    d = complex(q - q_prime)
    if d != 0 and not in_domain(d):
        raise WedgeError(f"q - q' = {d} violates (Re)^2 > (Im)^2")
    inner = complex(modified_bra(new_state(fc, "position", q_prime)) @ new_state(fc, "position", q).components)
    target = delta_eps(q_prime - q, fc.eps1)
    err = abs(inner - target)
    return OrthogonalityReport(inner, target, inner / target, err, err / abs(target))


# --- completeness -----------------------------------------------------------

def position_wavefunction(fc: FockConstruction, q, x):
    """<x|q>_new = (m omega / (2 pi hbar))^(1/2) ... exp(-(m omega/2 hbar)(x - sqrt(1-r) q)^2).

    ``q`` and ``x`` broadcast against each other.
    """
    q = np.asarray(q, dtype=complex)
    x = np.asarray(x, dtype=float)
    pref = (fc.m_omega * (1 - fc.r) / (4 * np.pi * fc.hbar)) ** 0.25 * (fc.m_omega / (np.pi * fc.hbar)) ** 0.25
    return pref * np.exp(-fc.m_omega / (2 * fc.hbar) * (x - math.sqrt(1 - fc.r) * q) ** 2)


def completeness_matrix(fc: FockConstruction, c: Contour, rule: QuadratureRule | None = None) -> OperatorMatrix:
    """Quadrature of sum_k w_k |q_k>_new <q_k|_m on the unprimed Fock basis."""
    q, w = quadrature_nodes(c, rule)
    comps = position_components(fc, q)
    return OperatorMatrix((comps.T * w) @ comps, "completeness")


def completeness_residual(fc: FockConstruction, c: Contour, tests, *, rule: QuadratureRule | None = None,
                          x_extent: float = 8.0, nx: int = 4001) -> float:
    """Max relative deviation of (integral dq |q>_new <q|_m) from the identity.

    ``tests`` holds Fock-basis vectors (arrays of length N) and/or position-space
    test functions (callables of real x).  Fock vectors are acted on by the
    quadrature of the projector sum; position functions are sent through
    <q|phi> and back on a real x grid of half-width ``x_extent``.  Expect
    residuals of order hbar / (m omega sigma^2) for a function of width sigma;
    states as narrow as the oscillator ground state are not reproduced.
    """
    worst = 0.0
    K = None
    x = np.linspace(-x_extent, x_extent, nx)
    wx = np.full(nx, x[1] - x[0])
    wx[[0, -1]] *= 0.5
    for t in tests:
        if callable(t):
            phi = np.asarray(t(x), dtype=complex)
            qn, wq = quadrature_nodes(c, rule)
            G = position_wavefunction(fc, qn[:, None], x[None, :])  # <x|q> = modified <q|x>
            coeff = G @ (wx * phi)
            rec = (wq * coeff) @ G
            worst = max(worst, float(np.max(np.abs(rec - phi)) / np.max(np.abs(phi))))
        else:
            v = np.asarray(t, dtype=complex)
            if K is None:
                K = completeness_matrix(fc, c, rule)
            worst = max(worst, float(np.linalg.norm(K @ v - v) / np.linalg.norm(v)))
    return worst

