"""Three routes from a time-sliced path integral to p = dL/dqdot, then H.

Run: python3 demos/momentum_from_path_integral.py
"""
# %%
import math

import numpy as np

from complexaction.contour import make_tilted_line
from complexaction.fock import FockConstruction
from complexaction.fpi import (TheorySpec, WaveFunction, default_tilt, effective_hamiltonian_check,
                               fock_amplitude, gaussian, gaussian_fock_vector, multi_slice_amplitude,
                               p_gaussian_integral, saddle_point_p, saddle_point_q, xi_filter_profile,
                               xi_filter_tilt, xi_grid)

# %% Route 1: filtering with the Gaussian momentum eigenfunctions.  The
# profile in xi peaks at the next-slice coordinate.
for m in (1.0, 1 + 0.5j, 1j):
    ts = TheorySpec(m=m, dt=0.01, potential={2: 1.0})
    prof = xi_filter_profile(ts, xi_grid(0.3, 0.5, 201, xi_filter_tilt(m)), 0.3)
    print(f"m = {m!s:8}: argmax {prof.argmax:.4f}, half width {prof.half_width:.4f}")

# %% Route 2: the Gaussian p integral, saddle at p = m qdot.
ts = TheorySpec(m=1 + 0.3j, dt=0.01, potential={2: 0.5})
num, closed = p_gaussian_integral(ts, 0.7, 0.2)
print("\np integral:", num, " closed form:", closed)
print("saddle p:", saddle_point_p(ts, 0.7).p, " m qdot:", ts.m * 0.7)

# %% Route 3: the q saddle point reproduces p = m qdot.
rep = saddle_point_q(TheorySpec(m=1.0, dt=0.01, potential={2: 0.05}), 0.3, 0.1, 1.0)
print("\nq saddle:", rep.numeric, " |p - m qdot| =", rep.momentum_residual)

# %% One slice agrees with a Schrodinger step to O(dt^2).
ts = TheorySpec(m=1 + 0.1j, potential={4: 0.1 - 0.02j})
c = make_tilted_line(default_tilt(ts.m), 0.0, 8.0, 1601)
eh = effective_hamiltonian_check(ts, WaveFunction.sample(lambda q: np.exp(-(q - 0.2) ** 2), c))
print("\nstep discrepancies:", ["%.2e" % d for d in eh.discrepancies], " orders:", ["%.2f" % o for o in eh.orders])

# %% Five slices against the matrix exponential of p_new^2/2m + V(q_new).
fc = FockConstruction(256, 1.0, 100.0, 0.01)
c = make_tilted_line(default_tilt(1.0), 0.0, 6.0, 2401)
for V in ({}, {2: 0.5}):
    ts = TheorySpec.over_interval(0.0, 0.05, 5, potential=V)
    A = multi_slice_amplitude(ts, WaveFunction.sample(gaussian(0.1, 0.3), c),
                              WaveFunction.sample(gaussian(-0.05, 0.3), c))
    B = fock_amplitude(ts, fc, gaussian_fock_vector(fc, -0.05, 0.3), gaussian_fock_vector(fc, 0.1, 0.3))
    print(f"V = {V or 0}: path integral {A:.8f}, Fock {B:.8f}, rel diff {abs(A / B - 1):.1e}")
