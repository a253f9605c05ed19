"""
Induction pulls the moment to a pole
====================================

With a nonzero induction factor the LLG law spirals the moment towards the
field axis. The polar angle follows a closed form in the traversed azimuth,
and the nonlinear von Neumann law tracks the same path.
"""
import numpy as np

from spinform import ConstantField, Law, PhysicalParams, cqd, initial_state, integrate
from spinform.verification import collapse_trend_slope

k = 0.05
field = ConstantField([0.0, 0.0, 1.0])
p = PhysicalParams(gamma=1.0, k_i=k)

rec = integrate(Law.LLG, initial_state(Law.LLG, np.pi / 2), field, p, 20 * np.pi, 1e-3)
m = rec.bloch()
theta = np.arccos(np.clip(m[:, 2], -1, 1))
dphi = np.abs(np.unwrap(np.arctan2(m[:, 1], m[:, 0])))

# compare a few samples with the closed form
for i in np.linspace(0, len(rec) - 1, 6).astype(int):
    predicted = cqd.collapse_theta(np.pi / 2, dphi[i], 1, k)
    print(f"|dphi| = {dphi[i]:8.4f}  theta = {theta[i]:.8f}  closed form = {predicted:.8f}")

print(f"fitted slope of ln tan(theta/2): {collapse_trend_slope(rec):.8f} (expected {-k})")

# the density-matrix law follows the same trajectory
nl = integrate(Law.NONLINEAR_VN, initial_state(Law.NONLINEAR_VN, np.pi / 2), field, p, 20 * np.pi, 1e-3)
print(f"max |m_llg - m_nonlinear_vn| = {np.max(np.linalg.norm(nl.bloch() - m, axis=1)):.2e}")

# the collapse variant of the spinor law is measured, not asserted
sc = integrate(Law.SP_COLLAPSE, initial_state(Law.SP_COLLAPSE, np.pi / 2), field, p, 20 * np.pi, 1e-3)
print(f"max |m_llg - m_sp_collapse|  = {np.max(np.linalg.norm(sc.bloch() - m, axis=1)):.2e}")
