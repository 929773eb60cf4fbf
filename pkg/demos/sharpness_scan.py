"""
Where does w(T) <= || |T| + |T*| || / 2 become an equality?
===========================================================

Scan the family T(s) = (1-s) H + s J from a random Hermitian matrix to the
nilpotent shift.  At s = 0 both sides equal the spectral radius; at s = 1
the right side collapses to ||I||/2 = w(J).  In between the bound has
visible slack, tightest near the endpoints.
"""

import numpy as np

from opradius.bounds import evaluate_bound

rng = np.random.default_rng(11)
g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
h = (g + g.conj().T) / 2
jordan = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)

print(f"{'s':>5s} {'w(T)':>10s} {'bound':>10s} {'slack':>10s}")
for s in np.linspace(0.0, 1.0, 11):
    t = (1 - s) * h + s * jordan
    res = evaluate_bound("B2", np.stack([t]))
    print(f"{s:5.2f} {res.lhs:10.6f} {res.rhs:10.6f} {res.slack:10.2e}")
