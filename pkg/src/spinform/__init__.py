"""Two-level spin dynamics: Bloch, Landau-Lifshitz-Gilbert, von Neumann and
Schrodinger-Pauli evolution of a single spin, co-quantum collapse statistics,
and numerical checks that the formulations agree."""
from .dynamics import (Law, PhysicalParams, TrajectoryRecord, bloch_rhs, exact_precession,
                       hamiltonian, initial_state, integrate, llg_rhs, nonlinear_vn_rhs,
                       rk4_step, sp_collapse_rhs, sp_rhs, to_bloch, von_neumann_rhs)
from .fields import ConstantField, RotatingField, TabulatedField
from .pauli import (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z, commutator, pauli_basis,
                    pauli_identity_residual, pauli_to_vec, vec_to_pauli)
from .states import (BlochAngles, bloch_from_angles, bloch_from_density, bloch_from_spinor,
                     density_from_bloch, density_from_spinor, purity, spinor_from_angles,
                     spinor_from_density, trace_distance)

__version__ = "0.1.0"
