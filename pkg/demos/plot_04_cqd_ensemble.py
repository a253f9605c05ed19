"""
Branching statistics from random co-quanta
==========================================

Each electron is paired with a nuclear co-quantum pointing in a random
direction. The electron collapses up when the co-quantum polar angle is
larger than its own. Over many draws the up fraction approaches
cos^2(theta_e / 2).
"""
import numpy as np

from spinform import cqd

for theta_e in (np.pi / 6, np.pi / 3, np.pi / 2, 2 * np.pi / 3, 5 * np.pi / 6):
    s = cqd.ensemble_collapse(theta_e, 100_000, seed=7)
    print(f"theta_e = {theta_e:.4f}  up fraction = {s.fraction_up:.4f}  "
          f"cos^2 = {s.expected:.4f}  z = {s.z_score:+.2f}")

# one realization at a time
pair = cqd.CoQuantumPair(theta_e=0.5, phi_e=np.pi / 2, theta_n=0.1)
r = cqd.predict(pair)
print("c+ =", r.c_plus, " c- =", r.c_minus, " ket =", r.ket)

# chunking never changes the answer
a = cqd.ensemble_collapse(1.0, 50_000, seed=3, chunk_size=50_000)
b = cqd.ensemble_collapse(1.0, 50_000, seed=3, chunk_size=777)
print("same result for different chunk sizes:", a == b)

# averaged |r1><r2| over independent pairs, shown for inspection
print("mean pre-averaging density at theta_e = pi/2:\n",
      np.round(cqd.average_pre_density(np.pi / 2, 0.0, 50_000, seed=1), 3))
