"""A Gaussian-tamed delta function with complex argument.

Run: python3 demos/tamed_delta.py
"""
# %%
import math

import numpy as np

from complexaction.contour import make_bump, make_tilted_line, quad, validate
from complexaction.delta import EPS_SWEEP, delta_eps, in_domain, richardson_limit, sift

# %% The regulated delta is an entire function; its eps -> 0 limit only
# behaves inside the wedge (Re q)^2 > (Im q)^2.
for z in (1 + 0.5j, 0.5 + 1j):
    print(f"q = {z}: in wedge {bool(in_domain(z))}, |delta_1e-3(q)| = {abs(delta_eps(z, 1e-3)):.3g}")

# %% Sifting along a contour through a complex point.  The error is f''(a) eps.
a = 0.3 + 0.1j
c = make_tilted_line(math.radians(15), a, 5.0, 201)
print("\n eps       |sift(e^q) - e^a|   ratio to f''(a) eps")
for eps in EPS_SWEEP:
    err = abs(sift(np.exp, a, c, eps) - np.exp(a))
    print(f" {eps:8.0e}  {err:.4e}          {err / (abs(np.exp(a)) * eps):.6f}")
print("Richardson at eps = 1e-3:", abs(richardson_limit(np.exp, a, c, 1e-3) - np.exp(a)))

# %% Cauchy's theorem in practice: a bump contour gives the same Gaussian integral.
f = lambda q: np.exp(-q ** 2 + 1j * q)
bump = make_bump(0.6, 0.0, 1.0, 10.0)
print("\nbump valid:", validate(bump).ok)
print("real line:", quad(f, make_tilted_line(0.0, 0.0, 10.0, 401)))
print("bump     :", quad(f, bump))
print("exact    :", math.sqrt(math.pi) * math.exp(-0.25))
