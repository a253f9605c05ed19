"""Compiled right-hand sides and the fixed-step RK4 loop.

Every law kernel has the signature ``f(y, w, k, hbar)`` where ``w = gamma * B``
is the precession vector at the stage time and ``k`` the induction factor.
The public functions in :mod:`spinform.dynamics` call the same ``*_core``
kernels, so what is unit-tested is what gets integrated.
"""
import numba as nb
import numpy as np


@nb.njit(cache=True)
def cross(a, b):
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


@nb.njit(cache=True)
def matmul2(A, B):
    # explicit 2x2 product; np.dot dispatches to BLAS, which is slow at this size
    C = np.empty((2, 2), dtype=np.complex128)
    C[0, 0] = A[0, 0] * B[0, 0] + A[0, 1] * B[1, 0]
    C[0, 1] = A[0, 0] * B[0, 1] + A[0, 1] * B[1, 1]
    C[1, 0] = A[1, 0] * B[0, 0] + A[1, 1] * B[1, 0]
    C[1, 1] = A[1, 0] * B[0, 1] + A[1, 1] * B[1, 1]
    return C


@nb.njit(cache=True)
def matvec2(A, x):
    y = np.empty(2, dtype=np.complex128)
    y[0] = A[0, 0] * x[0] + A[0, 1] * x[1]
    y[1] = A[1, 0] * x[0] + A[1, 1] * x[1]
    return y


@nb.njit(cache=True)
def hamiltonian_w(w, hbar):
    """``H = -(hbar/2) w . sigma``."""
    c = -0.5 * hbar
    H = np.empty((2, 2), dtype=np.complex128)
    H[0, 0] = c * w[2]
    H[0, 1] = c * (w[0] - 1j * w[1])
    H[1, 0] = c * (w[0] + 1j * w[1])
    H[1, 1] = -c * w[2]
    return H


@nb.njit(cache=True)
def pauli_vec(M):
    """Components of the traceless Hermitian part of ``M`` on the Pauli basis."""
    return np.array([0.5 * (M[0, 1] + M[1, 0]).real,
                     0.5 * (M[1, 0] - M[0, 1]).imag,
                     0.5 * (M[0, 0] - M[1, 1]).real])


@nb.njit(cache=True)
def half_pauli(v):
    """``(v . sigma) / 2``."""
    M = np.empty((2, 2), dtype=np.complex128)
    M[0, 0] = 0.5 * v[2]
    M[0, 1] = 0.5 * (v[0] - 1j * v[1])
    M[1, 0] = 0.5 * (v[0] + 1j * v[1])
    M[1, 1] = -0.5 * v[2]
    return M


@nb.njit(cache=True)
def bloch_core(m, w):
    return cross(m, w)


@nb.njit(cache=True)
def llg_core(m, w, k):
    # explicit form of dm/dt = m x w - k m x dm/dt for |m| = 1
    mxw = cross(m, w)
    return (mxw - k * cross(m, mxw)) / (1.0 + k * k)


@nb.njit(cache=True)
def vn_core(rho, H, hbar):
    return (matmul2(H, rho) - matmul2(rho, H)) / (1j * hbar)


@nb.njit(cache=True)
def nlvn_core(rho, H, k, hbar):
    m = 2.0 * pauli_vec(rho)
    w = (-2.0 / hbar) * pauli_vec(H)
    return half_pauli(llg_core(m, w, k))


@nb.njit(cache=True)
def sp_core(psi, H, hbar):
    return matvec2(H, psi) / (1j * hbar)


@nb.njit(cache=True)
def spc_core(psi, H, k, hbar):
    # solve [i hbar 1 - hbar k (1 - psi psi^dagger)] x = H psi by Cramer's rule
    a00 = 1j * hbar - hbar * k * (1.0 - psi[0] * np.conj(psi[0]))
    a01 = hbar * k * psi[0] * np.conj(psi[1])
    a10 = hbar * k * psi[1] * np.conj(psi[0])
    a11 = 1j * hbar - hbar * k * (1.0 - psi[1] * np.conj(psi[1]))
    b = matvec2(H, psi)
    det = a00 * a11 - a01 * a10
    out = np.empty(2, dtype=np.complex128)
    out[0] = (b[0] * a11 - a01 * b[1]) / det
    out[1] = (a00 * b[1] - a10 * b[0]) / det
    return out


@nb.njit(cache=True)
def law_bloch(y, w, k, hbar):
    return bloch_core(y, w)


@nb.njit(cache=True)
def law_llg(y, w, k, hbar):
    return llg_core(y, w, k)


@nb.njit(cache=True)
def law_von_neumann(y, w, k, hbar):
    return vn_core(y, hamiltonian_w(w, hbar), hbar)


@nb.njit(cache=True)
def law_nonlinear_vn(y, w, k, hbar):
    return nlvn_core(y, hamiltonian_w(w, hbar), k, hbar)


@nb.njit(cache=True)
def law_schrodinger_pauli(y, w, k, hbar):
    return sp_core(y, hamiltonian_w(w, hbar), hbar)


@nb.njit(cache=True)
def law_sp_collapse(y, w, k, hbar):
    return spc_core(y, hamiltonian_w(w, hbar), k, hbar)


# (norm deviation, purity deviation) and constraint projection per state kind

@nb.njit(cache=True)
def diag_vector(m):
    r2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2]
    return np.sqrt(r2) - 1.0, 0.5 * (1.0 + r2) - 1.0


@nb.njit(cache=True)
def diag_density(rho):
    tr = (rho[0, 0] + rho[1, 1]).real
    r2 = matmul2(rho, rho)
    return tr - 1.0, (r2[0, 0] + r2[1, 1]).real - 1.0


@nb.njit(cache=True)
def diag_spinor(psi):
    n2 = (psi[0] * np.conj(psi[0]) + psi[1] * np.conj(psi[1])).real
    return n2 - 1.0, n2 * n2 - 1.0


@nb.njit(cache=True)
def project_vector(m):
    return m / np.sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2])


@nb.njit(cache=True)
def project_density(rho):
    h = 0.5 * (rho + np.conj(rho.T))
    return h / (h[0, 0] + h[1, 1]).real


@nb.njit(cache=True)
def project_spinor(psi):
    n2 = (psi[0] * np.conj(psi[0]) + psi[1] * np.conj(psi[1])).real
    return psi / np.sqrt(n2)


# not cached: signatures that take dispatcher arguments do not pickle reliably
@nb.njit
def rk4_run(f, diag, project, y0, w_nodes, w_mid, hs, k, hbar, renorm):
    """Classical RK4 over the step sizes ``hs``.

    ``w_nodes[i]`` is the precession vector at the i-th grid time and
    ``w_mid[i]`` at the midpoint of step i. Diagnostics are taken before any
    projection. Returns ``(states, norm_dev, purity_dev, n_done)``;
    ``n_done < len(hs)`` means step ``n_done`` produced a non-finite state.
    """
    n = hs.shape[0]
    states = np.empty((n + 1, y0.size), dtype=y0.dtype)
    norm_dev = np.empty(n + 1)
    purity_dev = np.empty(n + 1)
    y = y0.copy()
    states[0] = y.ravel()
    norm_dev[0], purity_dev[0] = diag(y)
    for i in range(n):
        h = hs[i]
        k1 = f(y, w_nodes[i], k, hbar)
        k2 = f(y + (0.5 * h) * k1, w_mid[i], k, hbar)
        k3 = f(y + (0.5 * h) * k2, w_mid[i], k, hbar)
        k4 = f(y + h * k3, w_nodes[i + 1], k, hbar)
        y_new = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        nd, pd = diag(y_new)
        if not (np.isfinite(nd) and np.isfinite(pd)):
            return states, norm_dev, purity_dev, i
        norm_dev[i + 1] = nd
        purity_dev[i + 1] = pd
        if renorm:
            y_new = project(y_new)
        y = y_new
        states[i + 1] = y.ravel()
    return states, norm_dev, purity_dev, n
