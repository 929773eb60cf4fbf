"""
A short tour of the radii this package computes
===============================================

Every quantity below has a closed form for the 2x2 shift J = [[0,1],[0,0]],
so the printed errors should all be at machine precision.
"""

import numpy as np

from opradius.linalg import aluthge, operator_norm
from opradius.radius import (
    OptimizerOptions,
    davis_wielandt,
    f_radius,
    numerical_radius,
    q_radius,
)
from opradius.scalarmap import from_spec

jordan = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
eye = np.eye(2, dtype=complex)

# the numerical radius of the shift is 1/2 (its numerical range is the
# closed disk of radius 1/2), while its operator norm is 1
w = numerical_radius(jordan)
print(f"w(J)    = {w.value:.15f}   (exact 0.5)")
print(f"||J||   = {operator_norm(jordan):.15f}   (exact 1)")

# the Aluthge transform of a nilpotent Jordan block vanishes
print(f"Aluthge = {np.abs(aluthge(jordan)).max():.1e}          (exact 0)")

# joint radii over tuples: the Euclidean radius of (J, J*) and of (I, I)
we_pair = q_radius([jordan, jordan.conj().T], 2.0, OptimizerOptions(seed=1))
we_eye = q_radius([eye, eye], 2.0, OptimizerOptions(seed=2))
print(f"we(J,J*)= {we_pair.value:.15f}   (exact 1/sqrt(2) = {1/np.sqrt(2):.15f})")
print(f"we(I,I) = {we_eye.value:.15f}   (exact sqrt(2))")

# the Davis-Wielandt radius mixes the field of values with the norm
dw = davis_wielandt(jordan, from_spec("power:2"), OptimizerOptions(seed=3))
print(f"dw(J)   = {dw.value:.15f}   (exact 1)")

# every estimate ships a witness: a unit vector attaining the reported value
x = np.array(we_pair.witness)
vals = [abs(np.vdot(x, t @ x)) for t in (jordan, jordan.conj().T)]
print(f"witness check: ||x|| = {np.linalg.norm(x):.12f}, "
      f"l2 of inner products = {np.hypot(*vals):.12f}")

# on a random draw the radii order themselves: ||T||/2 <= w(T) <= ||T||,
# and the f-radius with f = t^q decreases as q grows
rng = np.random.default_rng(7)
t = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))) / np.sqrt(2)
print()
print(f"random 3x3: ||T||/2 = {operator_norm(t)/2:.6f}  "
      f"w(T) = {numerical_radius(t).value:.6f}  ||T|| = {operator_norm(t):.6f}")
pair = np.stack([t, t.conj().T])
for q in (1.0, 2.0, 3.0, 4.0):
    wq = q_radius(pair, q, OptimizerOptions(seed=4))
    print(f"  w_q(T, T*) at q={q:g}: {wq.value:.9f}")

# an arbitrary admissible scalar map works the same way
west = f_radius(pair, from_spec("log1p"), OptimizerOptions(seed=5))
print(f"  w_f(T, T*) with f=log1p: {west.value:.9f}")
