"""Pauli matrices and the map between real 3-vectors and traceless Hermitian 2x2 matrices.

Matrices are plain ``(2, 2)`` complex128 numpy arrays and vectors are ``(3,)``
float64 arrays; nothing here allocates anything larger.
"""
import numpy as np

from .exceptions import RepresentationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_0 = np.eye(2, dtype=complex)

SIGMA = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

# input validation vs. identity assertions
VALIDATION_TOL = 1e-10
IDENTITY_TOL = 1e-13


def pauli_basis():
    """Return fresh copies of ``(sigma_x, sigma_y, sigma_z, sigma_0)``."""
    return SIGMA_X.copy(), SIGMA_Y.copy(), SIGMA_Z.copy(), SIGMA_0.copy()


def vec_to_pauli(v):
    """Return ``v . sigma = vx*sigma_x + vy*sigma_y + vz*sigma_z``."""
    vx, vy, vz = np.asarray(v, dtype=float)
    return np.array([[vz, vx - 1j * vy], [vx + 1j * vy, -vz]], dtype=complex)


def is_hermitian(M, tol=VALIDATION_TOL):
    M = np.asarray(M)
    return bool(np.max(np.abs(M - M.conj().T)) <= tol)


def pauli_to_vec(M, tol=VALIDATION_TOL):
    """Inverse of :func:`vec_to_pauli`, ``v_k = tr(sigma_k M) / 2``.

    Raises RepresentationError unless ``M`` is Hermitian and traceless
    within ``tol``.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise RepresentationError(f"expected a 2x2 matrix, got shape {M.shape}")
    if not is_hermitian(M, tol):
        raise RepresentationError("matrix is not Hermitian")
    if abs(np.trace(M)) > tol:
        raise RepresentationError(f"matrix is not traceless (trace={np.trace(M)})")
    return np.array([
        0.5 * (M[0, 1] + M[1, 0]).real,
        0.5 * (M[1, 0] - M[0, 1]).imag,
        0.5 * (M[0, 0] - M[1, 1]).real,
    ])


def commutator(A, B):
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    return A @ B - B @ A


def pauli_identity_residual(a, b):
    """Max entry-wise modulus of ``(a.s)(b.s) - [(a.b) s0 + i (a x b).s]``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lhs = vec_to_pauli(a) @ vec_to_pauli(b)
    rhs = np.dot(a, b) * SIGMA_0 + 1j * vec_to_pauli(np.cross(a, b))
    return float(np.max(np.abs(lhs - rhs)))
