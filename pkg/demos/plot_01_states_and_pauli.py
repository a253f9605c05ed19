"""
Three pictures of one spin
==========================

A spin-1/2 direction can be held as a Bloch vector, a density matrix or a
spinor. This script converts between the three and checks the Pauli product
rule along the way.
"""
import numpy as np

from spinform import pauli, states

# a direction on the sphere
theta, phi = np.pi / 3, 0.7
m = states.bloch_from_angles(theta, phi)
print("Bloch vector:", np.round(m, 6))

# density matrix and spinor for the same direction
rho = states.density_from_bloch(m)
psi = states.spinor_from_angles(theta, phi)
print("rho =\n", np.round(rho, 6))
print("psi =", np.round(psi, 6))

# back again: both land on the starting vector
print("from rho:", np.round(states.bloch_from_density(rho), 12))
print("from psi:", np.round(states.bloch_from_spinor(psi), 12))

# pure states make 1 - rho singular
print("det(1 - rho) =", np.linalg.det(pauli.SIGMA_0 - rho))
print("purity       =", states.purity(rho))

# (a.sigma)(b.sigma) = (a.b) 1 + i (a x b).sigma
rng = np.random.default_rng(0)
a, b = rng.uniform(-1, 1, size=(2, 3))
print("product rule residual:", pauli.pauli_identity_residual(a, b))

# a partially mixed state sits inside the ball
mixed = 0.5 * (pauli.SIGMA_0 + 0.5 * pauli.SIGMA_Z)
print("purity of |m| = 0.5 state:", states.purity(mixed))
print("trace distance to +z:", states.trace_distance(mixed, states.density_from_bloch([0, 0, 1])))
