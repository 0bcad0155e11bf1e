"""Numerical and symbolic toolkit for complex-action quantum mechanics.

Modules
-------
contour      deformable integration contours and quadrature along them
delta        Gaussian-tamed delta function of a complex argument
conjugation  modified complex conjugation on polynomial-times-Gaussian functions
fock         non-hermitian position/momentum operators on a truncated Fock space
xi           Gaussian momentum eigenfunctions and their biorthogonal duals
fpi          time-sliced path integral, saddle points and Hamiltonian emergence
cli          batch command-line front end (``python -m complexaction``)
"""

from .contour import (Contour, ContourError, NonDecayError, QuadratureRule, ValidationReport,
                      make_bump, make_polyline, make_tilted_line, quad, validate)
from .delta import TamedDelta, WedgeError, delta_eps, delta_eps_derivative, in_domain, sift
from .conjugation import (AnalyticFunction, ComponentVector, ConjugationError, mod_bra, mod_conjugate,
                          parse, sandwich_identity_check)
from .fock import (CoherentState, FockConstruction, NewEigenstate, OperatorMatrix, coherent_state,
                   completeness_residual, hermitian_split, ladder_matrices, new_operators, new_state,
                   orthogonality_check, overlap_qp)
from .xi import (XiBasisSpec, XiState, annihilator_residual, anti_xi_wavefunction, biorthogonality_check,
                 xi_wavefunction)
from .fpi import (PotentialSpec, TheorySpec, WaveFunction, effective_hamiltonian_check, lagrangian,
                  multi_slice_amplitude, p_gaussian_integral, propagate_step, saddle_point_p, saddle_point_q,
                  xi_filter_profile)

__version__ = "0.1.0"
