"""Bloch vectors, density matrices and spinors, and the conversions between them.

All three describe the same pure spin-1/2 state:

* Bloch vector ``m = (sin t cos p, sin t sin p, cos t)``
* density matrix ``rho = (m . sigma + sigma_0) / 2``
* spinor ``psi = (cos t/2, sin t/2 exp(i p))`` with ``rho = psi psi^dagger``

At the poles the azimuth is unobservable and is reported as 0. Spinors carry
a global phase that density matrices forget; :func:`spinor_from_density`
fixes it by making the first non-negligible component real and positive.
"""
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError, PurityError
from .pauli import SIGMA_0, vec_to_pauli

UNIT_TOL = 1e-10
DENSITY_TOL = 1e-12
PURE_SPINOR_TOL = 1e-8
_POLE_TOL = 1e-14


class BlochAngles(NamedTuple):
    theta: float
    phi: float


def _normalize_phi(phi):
    phi = float(np.mod(phi, 2 * np.pi))
    # np.mod of a tiny negative number rounds up to exactly 2 pi
    return 0.0 if phi >= 2 * np.pi else phi


def _check_theta(theta):
    if not np.isfinite(theta) or theta < 0.0 or theta > np.pi:
        raise DomainError(f"polar angle {theta!r} outside [0, pi]")


def make_angles(theta, phi=0.0):
    """Validated :class:`BlochAngles` with ``phi`` wrapped into ``[0, 2 pi)``."""
    _check_theta(theta)
    return BlochAngles(float(theta), _normalize_phi(phi))


def bloch_from_angles(theta, phi=0.0):
    a = make_angles(theta, phi)
    st = np.sin(a.theta)
    return np.array([st * np.cos(a.phi), st * np.sin(a.phi), np.cos(a.theta)])


def angles_from_bloch(m):
    m = np.asarray(m, dtype=float)
    r = np.linalg.norm(m)
    if r == 0.0:
        raise DomainError("zero vector has no direction")
    rho_xy = np.hypot(m[0], m[1])
    theta = float(np.arctan2(rho_xy, m[2]))
    phi = 0.0 if rho_xy <= _POLE_TOL * r else _normalize_phi(np.arctan2(m[1], m[0]))
    return BlochAngles(theta, phi)


def validate_density(rho, tol=DENSITY_TOL):
    """Return ``rho`` as an array after checking Hermiticity, unit trace and eigenvalues."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DomainError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DomainError(f"density matrix trace {np.trace(rho)} != 1")
    eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if eig[0] < -UNIT_TOL or eig[1] > 1 + UNIT_TOL:
        raise DomainError(f"density matrix eigenvalues {eig} outside [0, 1]")
    return rho


def density_from_bloch(m):
    m = np.asarray(m, dtype=float)
    if abs(np.linalg.norm(m) - 1.0) > UNIT_TOL:
        raise DomainError(f"Bloch vector must be unit length, |m| = {np.linalg.norm(m)}")
    return 0.5 * (vec_to_pauli(m) + SIGMA_0)


def bloch_from_density(rho):
    """Bloch vector of any valid (possibly mixed) density matrix; ``|m| <= 1``."""
    rho = validate_density(rho)
    return np.array([
        (rho[0, 1] + rho[1, 0]).real,
        (rho[1, 0] - rho[0, 1]).imag,
        (rho[0, 0] - rho[1, 1]).real,
    ])


def spinor_from_angles(theta, phi=0.0):
    a = make_angles(theta, phi)
    return np.array([np.cos(a.theta / 2), np.sin(a.theta / 2) * np.exp(1j * a.phi)])


def _check_spinor(psi):
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise DomainError(f"expected a 2-component spinor, got shape {psi.shape}")
    if abs(np.vdot(psi, psi).real - 1.0) > UNIT_TOL:
        raise DomainError(f"spinor is not normalized, <psi|psi> = {np.vdot(psi, psi).real}")
    return psi


def bloch_from_spinor(psi):
    """Expectation values ``<psi|sigma_k|psi>``."""
    up, down = _check_spinor(psi)
    cross = np.conj(up) * down
    return np.array([2 * cross.real, 2 * cross.imag, abs(up) ** 2 - abs(down) ** 2])


def density_from_spinor(psi):
    psi = _check_spinor(psi)
    return np.outer(psi, psi.conj())


def purity(rho):
    """``tr(rho^2)``: 1 for pure states, 1/2 for the maximally mixed state."""
    rho = validate_density(rho)
    return float(np.trace(rho @ rho).real)


def spinor_from_density(rho):
    rho = validate_density(rho)
    p = float(np.trace(rho @ rho).real)
    if p < 1.0 - PURE_SPINOR_TOL:
        raise PurityError(f"density matrix is mixed (purity {p})")
    # for rho = psi psi^dagger, column j is psi * conj(psi_j)
    j = int(np.argmax(np.abs(np.diag(rho))))
    psi = rho[:, j] / np.sqrt(rho[j, j].real)
    for c in psi:
        if abs(c) > PURE_SPINOR_TOL:
            psi = psi * (abs(c) / c)
            break
    return psi / np.linalg.norm(psi)


def trace_distance(r1, r2):
    """Half the trace norm of ``r1 - r2``, computed as ``|m1 - m2| / 2``."""
    m1 = bloch_from_density(r1)
    m2 = bloch_from_density(r2)
    return float(0.5 * np.linalg.norm(m1 - m2))
