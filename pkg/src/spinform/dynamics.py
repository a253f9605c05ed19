"""Equations of motion for a single spin and their fixed-step integration.

Six laws are available, all driven by the same field ``B(t)``:

==================  ============  ==========================================
law                 state         equation
==================  ============  ==========================================
bloch               Bloch vector  dm/dt = gamma m x B
llg                 Bloch vector  dm/dt = gamma m x B - k m x dm/dt
von_neumann         density       i hbar drho/dt = [H, rho]
nonlinear_vn        density       i hbar drho/dt - hbar k [drho/dt, rho] = [H, rho]
schrodinger_pauli   spinor        i hbar dpsi/dt = H psi
sp_collapse         spinor        i hbar dpsi/dt - hbar k (1 - rho) dpsi/dt = H psi
==================  ============  ==========================================

with ``H = -(hbar gamma / 2) B . sigma``. The implicit LLG and nonlinear von
Neumann forms are solved explicitly (the latter through the Bloch-vector map);
the collapse variant is solved as a 2x2 linear system at every evaluation.
"""
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from . import _kernels as K
from .exceptions import DomainError, IntegrationError, PurityError
from .fields import ConstantField
from .states import density_from_bloch, spinor_from_angles, bloch_from_angles

ELEMENTARY_CHARGE = 1.602176634e-19  # C
ELECTRON_MASS = 9.1093837015e-31  # kg
HBAR_SI = 1.054571817e-34  # J s


class Law(str, Enum):
    BLOCH = "bloch"
    LLG = "llg"
    VON_NEUMANN = "von_neumann"
    NONLINEAR_VN = "nonlinear_vn"
    SCHRODINGER_PAULI = "schrodinger_pauli"
    SP_COLLAPSE = "sp_collapse"

    @property
    def kind(self):
        return _KIND[self]


_KIND = {
    Law.BLOCH: "vector",
    Law.LLG: "vector",
    Law.VON_NEUMANN: "density",
    Law.NONLINEAR_VN: "density",
    Law.SCHRODINGER_PAULI: "spinor",
    Law.SP_COLLAPSE: "spinor",
}

# looked up at call time so a kernel can be swapped out (mutation tests)
LAW_KERNELS = {
    Law.BLOCH: K.law_bloch,
    Law.LLG: K.law_llg,
    Law.VON_NEUMANN: K.law_von_neumann,
    Law.NONLINEAR_VN: K.law_nonlinear_vn,
    Law.SCHRODINGER_PAULI: K.law_schrodinger_pauli,
    Law.SP_COLLAPSE: K.law_sp_collapse,
}

_KIND_FUNCS = {
    "vector": (K.diag_vector, K.project_vector, (3,), np.float64),
    "density": (K.diag_density, K.project_density, (2, 2), np.complex128),
    "spinor": (K.diag_spinor, K.project_spinor, (2,), np.complex128),
}


@dataclass(frozen=True)
class PhysicalParams:
    """``gamma`` is signed (rad / time / field unit); ``k_i`` is the induction factor."""

    gamma: float = 1.0
    hbar: float = 1.0
    k_i: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.gamma):
            raise DomainError("gamma must be finite")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise DomainError("hbar must be positive")
        if not (np.isfinite(self.k_i) and self.k_i >= 0):
            raise DomainError("k_i must be finite and non-negative")

    @classmethod
    def electron_si(cls, k_i=0.0):
        """SI electron: ``gamma = -e / (2 m_e)`` from the classical loop model."""
        return cls(gamma=-ELEMENTARY_CHARGE / (2 * ELECTRON_MASS), hbar=HBAR_SI, k_i=k_i)

    def to_dict(self):
        return {"gamma": self.gamma, "hbar": self.hbar, "k_i": self.k_i}


def _as_law(law):
    try:
        return Law(law)
    except ValueError:
        raise DomainError(f"unknown law {law!r}; expected one of {[l.value for l in Law]}") from None


def _as_state(law, y):
    _, _, shape, dtype = _KIND_FUNCS[law.kind]
    y = np.ascontiguousarray(y, dtype=dtype)
    if y.shape != shape:
        raise DomainError(f"{law.value} state must have shape {shape}, got {y.shape}")
    return y


def initial_state(law, theta, phi=0.0):
    """State for ``law`` representing the direction ``(theta, phi)``."""
    law = _as_law(law)
    if law.kind == "vector":
        return bloch_from_angles(theta, phi)
    if law.kind == "density":
        return density_from_bloch(bloch_from_angles(theta, phi))
    return spinor_from_angles(theta, phi)


def to_bloch(law, states):
    """Map an array of states of ``law`` to Bloch vectors, shape ``(n, 3)``."""
    law = _as_law(law)
    s = np.asarray(states)
    if law.kind == "vector":
        return np.array(s, dtype=float).reshape(-1, 3)
    if law.kind == "density":
        s = s.reshape(-1, 2, 2)
        return np.stack([(s[:, 0, 1] + s[:, 1, 0]).real,
                         (s[:, 1, 0] - s[:, 0, 1]).imag,
                         (s[:, 0, 0] - s[:, 1, 1]).real], axis=-1)
    s = s.reshape(-1, 2)
    c = np.conj(s[:, 0]) * s[:, 1]
    return np.stack([2 * c.real, 2 * c.imag, abs(s[:, 0]) ** 2 - abs(s[:, 1]) ** 2], axis=-1)


@dataclass
class TrajectoryRecord:
    law: Law
    times: np.ndarray
    states: np.ndarray
    norm_dev: np.ndarray
    purity_dev: np.ndarray
    field: object = None
    params: PhysicalParams = dc_field(default_factory=PhysicalParams)
    renorm: bool = False

    def __len__(self):
        return self.times.size

    @property
    def final(self):
        return self.states[-1]

    def bloch(self):
        return to_bloch(self.law, self.states)


def hamiltonian(B, p):
    B = np.ascontiguousarray(B, dtype=float)
    return K.hamiltonian_w(p.gamma * B, p.hbar)


def bloch_rhs(m, B, p):
    m = np.ascontiguousarray(m, dtype=float)
    return K.bloch_core(m, p.gamma * np.asarray(B, dtype=float))


def llg_rhs(m, B, p):
    m = np.ascontiguousarray(m, dtype=float)
    return K.llg_core(m, p.gamma * np.asarray(B, dtype=float), float(p.k_i))


def von_neumann_rhs(rho, H, p):
    return K.vn_core(np.ascontiguousarray(rho, dtype=complex),
                     np.ascontiguousarray(H, dtype=complex), p.hbar)


def nonlinear_vn_rhs(rho, H, p, purity_tol=1e-6):
    rho = np.ascontiguousarray(rho, dtype=complex)
    pur = np.trace(rho @ rho).real
    if abs(pur - 1.0) > purity_tol:
        raise PurityError(f"nonlinear von Neumann law needs a pure state, purity {pur}")
    return K.nlvn_core(rho, np.ascontiguousarray(H, dtype=complex), float(p.k_i), p.hbar)


def sp_rhs(psi, H, p):
    return K.sp_core(np.ascontiguousarray(psi, dtype=complex),
                     np.ascontiguousarray(H, dtype=complex), p.hbar)


def sp_collapse_rhs(psi, H, p):
    return K.spc_core(np.ascontiguousarray(psi, dtype=complex),
                      np.ascontiguousarray(H, dtype=complex), float(p.k_i), p.hbar)


def time_grid(t_end, dt, t0=0.0):
    """Grid ``t0, t0+dt, ...`` ending exactly at ``t0 + t_end``.

    When ``dt`` does not divide ``t_end`` the last step is shortened, so the
    grid has ``ceil(t_end / dt) + 1`` points.
    """
    if not (np.isfinite(dt) and dt > 0):
        raise DomainError(f"dt must be positive, got {dt}")
    if not (np.isfinite(t_end) and t_end > 0):
        raise DomainError(f"t_end must be positive, got {t_end}")
    n = max(1, int(np.ceil(t_end / dt - 1e-9)))
    times = t0 + dt * np.arange(n + 1, dtype=float)
    times[-1] = t0 + t_end
    return times


def _run(law, y0, times, field, p, renorm):
    law = _as_law(law)
    y0 = _as_state(law, y0)
    diag, project, shape, _ = _KIND_FUNCS[law.kind]
    hs = np.diff(times)
    mids = times[:-1] + 0.5 * hs
    w_nodes = np.ascontiguousarray(p.gamma * field(times), dtype=float)
    w_mid = np.ascontiguousarray(p.gamma * field(mids), dtype=float)
    states, nd, pd, n_done = K.rk4_run(LAW_KERNELS[law], diag, project, y0, w_nodes, w_mid,
                                       hs, float(p.k_i), float(p.hbar), bool(renorm))
    if n_done < hs.size:
        raise IntegrationError(
            f"{law.value}: non-finite state at step {n_done} (t = {times[n_done + 1]})",
            snapshot={"law": law.value, "step": int(n_done), "time": float(times[n_done]),
                      "state": states[n_done].tolist() if states.dtype.kind == "f"
                      else [[z.real, z.imag] for z in states[n_done]]},
        )
    return states.reshape((-1,) + shape), nd, pd


def rk4_step(law, state, t, dt, field, p):
    """One classical RK4 step of ``law`` from ``t`` to ``t + dt`` (no renormalization)."""
    if not (np.isfinite(dt) and dt > 0):
        raise DomainError(f"dt must be positive, got {dt}")
    states, _, _ = _run(law, state, np.array([t, t + dt], dtype=float), field, p, False)
    return states[-1]


def integrate(law, y0, field, p, t_end, dt, renorm=False, t0=0.0):
    """Integrate ``law`` from ``y0`` with fixed-step RK4 and return a TrajectoryRecord.

    With ``renorm`` the state is projected back onto its constraint set after
    every step (unit ``|m|``, unit ``<psi|psi>``, Hermitian unit-trace ``rho``);
    the recorded deviations are those before projection.
    """
    law = _as_law(law)
    if field is None:
        raise DomainError("a field is required")
    times = time_grid(t_end, dt, t0)
    states, nd, pd = _run(law, y0, times, field, p, renorm)
    return TrajectoryRecord(law, times, states, nd, pd, field, p, bool(renorm))


def exact_precession(m0, B0, p, t):
    """Closed-form Bloch solution in a constant field: rotate ``m0`` about ``B0``
    by ``-gamma |B0| t``. Accepts scalar or array ``t``."""
    m0 = np.asarray(m0, dtype=float)
    B0 = np.asarray(B0.b0 if isinstance(B0, ConstantField) else B0, dtype=float)
    t = np.asarray(t, dtype=float)
    b = np.linalg.norm(B0)
    if b == 0.0:
        return np.broadcast_to(m0, t.shape + (3,)).copy()
    n = B0 / b
    angle = (-p.gamma * b * t)[..., None]
    par = np.dot(m0, n) * n
    return (par + np.cos(angle) * (m0 - par) + np.sin(angle) * np.cross(n, m0))
