import cmath
import math

import numpy as np
import pytest

from complexaction.conjugation import mod_conjugate
from complexaction.contour import NonDecayError
from complexaction.xi import (ETA_SWEEP, XiBasisSpec, XiState, annihilator_residual, anti_bra_symbolic,
                              anti_xi_bra, anti_xi_symbolic, anti_xi_wavefunction, biorthogonality_check,
                              eigenvalue_identity, log_anti_xi_wavefunction, log_xi_wavefunction,
                              pair_closed_form, real_mass_delta_peak, sift_test_function, xi_symbolic,
                              xi_wavefunction)

MASSES = [1.0, 1 + 0.3j, 2 + 1j]


def test_constants():
    sp = XiBasisSpec(1 + 1j, 0.02, 0.5)
    assert sp.C1 == pytest.approx(1j * (1 + 1j) / (2 * 0.5 * 0.02))
    assert sp.C_A ** 2 == pytest.approx((1 + 1j) / (2 * math.pi * 0.5 * 0.02))
    assert sp.C_B ** 2 == pytest.approx((1 - 1j) / (2 * math.pi * 0.5 * 0.02))
    assert sp.C_A.real > 0 and sp.C_B.real > 0


def test_rejects_bad_parameters():
    for kw in ({"m": 1 - 0.1j}, {"m": 0}, {"dt": 0.0}, {"hbar": -1.0}):
        with pytest.raises(ValueError):
            XiBasisSpec(**kw)


@pytest.mark.parametrize("m", MASSES)
def test_symbolic_eigenvalue_identity(m):
    lhs, rhs = eigenvalue_identity(XiBasisSpec(m))
    assert lhs.almost_equal(rhs)


@pytest.mark.parametrize("m", MASSES)
def test_momentum_annihilator(m):
    s = XiState(0.2 + 0.05j, XiBasisSpec(m))
    assert annihilator_residual(s, "momentum") < 1e-6


@pytest.mark.parametrize("m", MASSES)
def test_hamiltonian_orderings(m):
    s = XiState(0.1, XiBasisSpec(m))
    assert annihilator_residual(s, "hamiltonian") < 1e-5
    # the literal product form leaves i hbar / (2 dt)
    assert annihilator_residual(s, "hamiltonian", ordering="literal") == pytest.approx(50.0, rel=1e-6)


def test_annihilator_argument_checks():
    s = XiState(0.0, XiBasisSpec())
    with pytest.raises(ValueError):
        annihilator_residual(s, "momentum", step=1e-2)
    with pytest.raises(ValueError):
        annihilator_residual(s, "energy")
    with pytest.raises(ValueError):
        annihilator_residual(s, "hamiltonian", ordering="weyl")


def test_symbolic_forms_evaluate_like_numeric_ones():
    sp = XiBasisSpec(1 + 0.4j)
    s = XiState(0.3 - 0.1j, sp)
    q = np.array([0.1, 0.25 + 0.05j])
    assert np.allclose(xi_symbolic(sp).evaluate(q=q, xi=s.xi), xi_wavefunction(s, q), rtol=1e-13)
    assert np.allclose(anti_xi_symbolic(sp).evaluate(q=q, xi=s.xi), anti_xi_wavefunction(s, q), rtol=1e-13)
    assert np.allclose(anti_bra_symbolic(sp).evaluate(q=q, xi=s.xi), anti_xi_bra(s, q), rtol=1e-13)
    assert np.allclose(np.exp(log_xi_wavefunction(s, q)), xi_wavefunction(s, q), rtol=1e-13)
    assert np.allclose(np.exp(log_anti_xi_wavefunction(s, q)), anti_xi_wavefunction(s, q), rtol=1e-13)


def test_real_mass_degeneracy():
    sp = XiBasisSpec(1.0)
    s = XiState(0.2, sp)
    q = np.linspace(-0.3, 0.7, 11)
    assert np.allclose(anti_xi_wavefunction(s, q), xi_wavefunction(s, q), rtol=1e-14)
    assert anti_bra_symbolic(sp) == mod_conjugate(xi_symbolic(sp), ("q", "xi"))


def test_anti_ket_decays_on_real_line_for_complex_mass():
    s = XiState(0.0, XiBasisSpec(1 + 0.5j))
    assert abs(anti_xi_wavefunction(s, 3.0)) < 1e-90


@pytest.mark.parametrize("m", [1.0, 1 + 0.3j])
@pytest.mark.parametrize("dxi", [0.0, 1e-3, 5e-3])
def test_biorthogonality_closed_form(m, dxi):
    sp = XiBasisSpec(m)
    rep = biorthogonality_check(sp, 0.2, 0.2 + dxi)
    assert rep.rel_error < 1e-8
    assert rep.epsilon == pytest.approx(1e-2 * (0.01 / m) ** 2)


def test_pair_integral_dense_real_line_oracle():
    # independent check of the closed form: brute-force trapezoid on the real line
    sp = XiBasisSpec(1.0)
    xi, xip, eta = 0.2, 0.2004, 1e-2
    q = np.linspace(-60, 60, 1_200_001)
    f = xi_wavefunction(XiState(xip, sp), q) * anti_xi_bra(XiState(xi, sp), q) * np.exp(-eta * q ** 2)
    num = np.trapezoid(f, q)
    cf, _ = pair_closed_form(sp, xi, xip, eta)
    assert abs(num - cf) < 1e-8 * abs(pair_closed_form(sp, xi, xi, eta)[0])


def test_real_mass_peak_matches_tamed_delta():
    sp = XiBasisSpec(1.0)
    for eta in ETA_SWEEP:
        cf, eps = pair_closed_form(sp, 0.2, 0.2, eta)
        assert abs(cf) == pytest.approx(real_mass_delta_peak(sp, eta), rel=1e-12)


def test_sifting_converges_linearly_in_eta():
    sp = XiBasisSpec(1.0)
    g = lambda x: np.exp(-(x - 0.1) ** 2)
    errs = [abs(sift_test_function(sp, g, 0.2, eta, n_xi=201) / g(0.2) - 1) for eta in ETA_SWEEP]
    assert errs[0] < 1e-2
    assert all(8 < errs[k] / errs[k + 1] < 12 for k in range(2))


def test_regulated_pair_no_delta_beyond_pi_over_4():
    with pytest.raises(NonDecayError):
        biorthogonality_check(XiBasisSpec(1j), 0.0, 0.0)
