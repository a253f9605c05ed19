"""
Torque on a current loop and on an orbiting charge
==================================================

Two classical pictures of a magnetic moment: a loop carrying current I and
a point charge on a circular orbit. Both torques are summed numerically and
compared with mu x B, and both give the same gyromagnetic ratio q / 2m.
"""
import numpy as np

from spinform import verification as V
from spinform.dynamics import ELECTRON_MASS, ELEMENTARY_CHARGE

B = np.array([1.0, 0.0, 0.0])
loop = V.LoopModel(R=1.0, I=1.0, q=1.0, omega=1.0)

for n in (8, 64, 10_000):
    print(f"{n:6d} segments: loop torque = {V.loop_torque_numeric(loop, B, n)}")
print("expected pi * z x B =", np.pi * np.cross([0, 0, 1], B))

print("orbit average torque =", V.particle_torque_avg(loop, B, 10_000), " expected (0, 0.5, 0)")

# a loop carrying the charge's own current sees the same torque
matched = V.LoopModel(R=0.7, q=2.0, omega=3.0, I=2.0 * 3.0 / (2 * np.pi))
print("loop vs orbit:", V.loop_torque_numeric(matched, B, 1000), V.particle_torque_avg(matched, B, 1000))

gamma = V.gyromagnetic_classical(ELEMENTARY_CHARGE, ELECTRON_MASS)
print(f"electron gamma = q / 2m = {gamma:.5e} rad/s/T")
