"""Modified complex conjugation, which keeps chosen parameters analytic.

Run: python3 demos/modified_conjugation.py
"""
# %%
import numpy as np

from complexaction.conjugation import ComponentVector, exp, mod_conjugate, parse, sandwich_identity_check, var

# %% The four conjugates of a q^2 + b p^2.  a and b are symbolic coefficients
# outside every analytic set, so they are always conjugated; q and p only
# when they are left out of the set.
f = parse("(+ (* a (^ q 2)) (* b (^ p 2)))")
for A in [(), ("q",), ("p",), ("q", "p")]:
    print(("*_{" + ",".join(A) + "}:").ljust(10), mod_conjugate(f, A))

# %% Conjugating twice with the same set gives the function back.
g = (1 + 2j) * var("q") * exp((-0.5 + 0.1j) * var("q") ** 2 + 1j * var("p"))
print("\ng          =", g)
print("g^{*q}     =", mod_conjugate(g, ["q"]))
print("involution :", mod_conjugate(mod_conjugate(g, ["q"]), ["q"]) == g)

# %% Sandwich identities <u|M|v>^{*A} = <v|M^dag|u> with modified bras.
u, v = var("u"), var("v")
u_ket = ComponentVector((1, u, u ** 2 / np.sqrt(2)))
v_ket = ComponentVector((exp(-0.5 * v * v), v, 1j))
M = np.array([[1, 2j, 0], [0.5, 1, -1j], [0, 3, 2]])
for A in [(), ("u",), ("v",), ("u", "v")]:
    rep = sandwich_identity_check(u_ket, v_ket, M, A)
    print(f"A = {A!s:12} max discrepancy {rep.max_discrepancy:.2e} over {rep.samples} points")
