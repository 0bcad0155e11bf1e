import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from oracles import hermite_functions

from complexaction.contour import make_tilted_line
from complexaction.delta import WedgeError, delta_eps
from complexaction.fock import (FockConstruction, TruncationWarning, coherent_state, completeness_residual,
                                derivative_residual, eigen_residual, fourier_target, gaussian_projection,
                                hamiltonian, hermitian_split, ladder_matrices, momentum_eigen_residual,
                                new_operators, new_state, orthogonality_check, overlap_qp,
                                position_components, position_momentum)

FC = FockConstruction(64, 1.0, 100.0, 0.01)


def test_validation():
    with pytest.raises(ValueError):
        FockConstruction(1)
    with pytest.raises(ValueError):
        FockConstruction(8, 1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        FockConstruction(8, 1.0, 1.0, 0.0)


def test_ladder_commutator_defect():
    a, ad = ladder_matrices(FC)
    C = a.commutator(ad).entries
    assert np.allclose(C, np.diag(np.r_[np.ones(63), 1 - 64]), atol=1e-13)


def test_new_commutator_equals_canonical_one():
    # (q - ip/mw)(p + i m'w' q) - reverse = (1 - r)[q, p], so [q_new, p_new] = [q, p]
    qn, pn = new_operators(FC)
    expected = 1j * np.diag(np.r_[np.ones(63), 1 - 64])
    assert np.max(np.abs(qn.commutator(pn).entries - expected)) < 1e-12


def test_q_new_dagger_is_a_multiple_of_a():
    qn, _ = new_operators(FC)
    a, _ = ladder_matrices(FC)
    scale = math.sqrt(2 * FC.hbar / (FC.m_omega * (1 - FC.r)))
    assert np.allclose(qn.H.entries, scale * a.entries, atol=1e-15)
    assert FC.kappa == pytest.approx(1 / scale)


def test_p_new_dagger_in_primed_basis():
    _, pn = new_operators(FC, primed=True)
    a, _ = ladder_matrices(FC)
    scale = -1j * math.sqrt(2 * FC.hbar * FC.mp_omegap / (1 - FC.r))
    assert np.allclose(pn.H.entries, scale * a.entries, atol=1e-15)


def test_position_momentum_are_hermitian():
    q, p = position_momentum(FC)
    assert np.array_equal(q.H.entries, q.entries)
    assert np.allclose(p.H.entries, p.entries)


def test_coherent_state_eigenvector():
    a, _ = ladder_matrices(FC)
    cs = coherent_state(FC, 1.5 - 0.5j)
    v = cs.components
    assert np.allclose((a @ v)[:-1], cs.lam * v[:-1], rtol=1e-14)


FC512 = FockConstruction(512, 1.0, 100.0, 0.01)


@settings(max_examples=30, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_position_eigen_relation(x, y):
    assert eigen_residual(FC512, complex(x, y)) <= 1e-8


@pytest.mark.parametrize("p", [0.0, 0.5, -0.3 + 0.2j])
def test_momentum_eigen_relation(p):
    assert momentum_eigen_residual(FC, p) <= 1e-12


def test_derivative_relation_has_mpomegap_term():
    fc = FockConstruction(512, 1.0, 100.0, 0.01)
    assert derivative_residual(fc, 0.0)["relative"] < 1e-9
    for q in (0.5, -1.0, 0.3 + 0.4j):
        r = derivative_residual(fc, q)
        assert abs(r["absolute"] - r["predicted"]) <= 1e-7 * r["predicted"]


def test_broadcast_components_match_single_state():
    qs = np.array([0.1, -0.2 + 0.1j])
    comps = position_components(FC, qs)
    for q, row in zip(qs, comps):
        assert np.allclose(row, new_state(FC, "position", q).components, rtol=1e-14)


def test_gaussian_projection_against_quadrature():
    fc = FockConstruction(24, 1.0, 3.0, 0.01)
    x = np.linspace(-12, 12, 24001)
    A, B, C = 0.7 - 0.2j, 0.3 + 0.5j, 0.1
    psi = np.exp(-A * x ** 2 + B * x + C)
    ref = np.trapezoid(hermite_functions(x, 24, 3.0) * psi, x, axis=1)
    assert np.max(np.abs(gaussian_projection(fc, A, B, C) - ref)) < 1e-10


@pytest.mark.parametrize("q,p", [(0.0, 0.0), (0.5, 0.3), (-0.5, 0.5), (0.2, -0.4)])
def test_fourier_overlap(q, p):
    fc = FockConstruction(512, 1.0, 100.0, 0.01)
    assert abs(overlap_qp(fc, q, p) / fourier_target(q, p) - 1) <= 0.02


def test_fourier_overlap_improves_with_m_omega():
    devs = [abs(overlap_qp(FockConstruction(512, 1.0, mw, 0.01), 0.5, 0.3) / fourier_target(0.5, 0.3) - 1)
            for mw in (25.0, 100.0, 400.0)]
    assert devs[0] > devs[1] > devs[2]


def test_orthogonality_is_a_tamed_delta():
    for q, qp in [(0.2, 0.2), (0.2, 0.25), (0.1 + 0.02j, 0.15)]:
        rep = orthogonality_check(FC, q, qp)
        assert rep.rel_error < 1e-12
        assert rep.target == delta_eps(qp - q, FC.eps1)


def test_orthogonality_closed_form_from_coherent_overlap():
    # sum_n (k q')^n (k q)^n / n! = exp(k^2 q q'), times both Gaussian prefactors
    q, qp = 0.3, 0.31
    k = FC.kappa
    pref2 = math.sqrt(FC.m_omega * (1 - FC.r) / (4 * math.pi))
    closed = pref2 * math.exp(-(k * q) ** 2 / 2 - (k * qp) ** 2 / 2 + k * k * q * qp)
    assert orthogonality_check(FC, q, qp).inner == pytest.approx(closed, rel=1e-12)


def test_orthogonality_outside_wedge():
    with pytest.raises(WedgeError):
        orthogonality_check(FC, 0.0, 0.1j)


def test_truncation_warning():
    with pytest.warns(TruncationWarning):
        new_state(FockConstruction(16, 1.0, 100.0, 0.01), "position", 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        new_state(FockConstruction(512, 1.0, 100.0, 0.01), "position", 1.0)


def test_unknown_kind():
    with pytest.raises(ValueError):
        new_state(FC, "spin", 0.0)


def test_hermitian_split():
    H = hamiltonian(FC, 1 + 0.3j, {2: 0.5 + 0.1j, 4: 0.01})
    Hh, Ha = hermitian_split(H)
    assert np.allclose(Hh.H.entries, Hh.entries)
    assert np.allclose(Ha.H.entries, -Ha.entries)
    assert np.allclose((Hh + Ha).entries, H.entries)


def test_completeness_on_wide_functions():
    # residual scales like hbar / (m omega sigma^2)
    fc = FockConstruction(64, 1.0, 100.0, 0.01)
    c = make_tilted_line(0.0, 0.0, 8.0, 401)
    res = [completeness_residual(fc, c, [lambda x, s=s: np.exp(-x ** 2 / (2 * s * s))], nx=2001) for s in (0.5, 1.0)]
    assert res[0] < 0.05 and res[1] < 0.01
    assert 3 < res[0] / res[1] < 5


def test_completeness_fails_on_vacuum():
    # the vacuum is as narrow as the oscillator itself; no 1e-4 reconstruction
    fc = FockConstruction(64, 1.0, 100.0, 0.01)
    c = make_tilted_line(0.0, 0.0, 8.0, 401)
    assert completeness_residual(fc, c, [np.eye(64)[0]]) > 0.1
