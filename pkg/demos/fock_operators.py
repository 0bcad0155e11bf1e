"""Non-hermitian position and momentum operators on a truncated Fock space.

Run: python3 demos/fock_operators.py
"""
# %%
import numpy as np

from complexaction.fock import (FockConstruction, derivative_residual, eigen_residual, fourier_target,
                                new_operators, orthogonality_check, overlap_qp)

fc = FockConstruction(N=64, hbar=1.0, m_omega=100.0, mp_omegap=0.01)

# %% The commutator is i hbar except in the last Fock level, where truncation
# leaves i hbar (1 - N).
qn, pn = new_operators(fc)
C = qn.commutator(pn).entries
print("interior error:", np.max(np.abs(C[:-1, :-1] - 1j * np.eye(fc.N - 1))))
print("last entry    :", C[-1, -1])

# %% |q>_new is a coherent state, so q_new^dag has it as an eigenvector even
# for complex q.  Its q-derivative matches p_new^dag / (i hbar) only up to a
# term m'w' q |q>, which is why the residual grows with |q|.
big = FockConstruction(512, 1.0, 100.0, 0.01)
for q in (0.5, 0.3 + 0.4j, 1.0):
    d = derivative_residual(big, q)
    print(f"q = {q}: eigen residual {eigen_residual(big, q):.1e}, derivative relation residual "
          f"{d['absolute']:.4e} vs m'w'|q| |||q>|| / hbar = {d['predicted']:.4e}")

# %% <q|p> tends to a plane wave as m omega grows.
for mw in (25.0, 100.0, 400.0):
    f = FockConstruction(512, 1.0, mw, 0.01)
    print(f"m omega = {mw:5.0f}: |<q|p>/plane wave - 1| = {abs(overlap_qp(f, 0.5, 0.3) / fourier_target(0.5, 0.3) - 1):.3%}")

# %% Modified-bra inner products of position states are tamed deltas.
rep = orthogonality_check(fc, 0.2, 0.21)
print("\n<0.21|0.2>:", rep.inner, " tamed delta:", rep.target)
