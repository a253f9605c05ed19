"""Co-quantum collapse rules and the Monte Carlo branching ensemble.

An electron moment at polar angle ``theta_e`` is paired with a nuclear
co-quantum at ``theta_n``. The sign of ``theta_n - theta_e`` picks the branch
(+z or -z), and induction drives ``theta_e`` to that pole with

    tan(theta_e(t)/2) = tan(theta_e(0)/2) * exp(-sign * k_i * |dphi|)

Co-quantum directions are drawn uniformly on the sphere, which makes the
fraction of +z outcomes ``cos^2(theta_e/2)``.

Random numbers come from a counter-based Philox stream keyed by the seed:
realization ``j`` always uses counter block ``j``, so any partition of an
ensemble into chunks reproduces the same draws.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateBranchError, DomainError
from .states import BlochAngles, make_angles


def collapse_theta(theta0, delta_phi, sign, k_i):
    """Polar angle after the moment has traversed an azimuth of ``|delta_phi|``."""
    if not (0.0 <= theta0 <= np.pi):
        raise DomainError(f"theta0 {theta0!r} outside [0, pi]")
    if not (np.isfinite(k_i) and k_i >= 0):
        raise DomainError("k_i must be finite and non-negative")
    if sign not in (-1, 0, 1):
        raise DomainError(f"sign must be -1, 0 or +1, got {sign!r}")
    if theta0 == 0.0 or theta0 == np.pi:
        return float(theta0)
    return float(2.0 * np.arctan(np.tan(theta0 / 2) * np.exp(-sign * k_i * abs(delta_phi))))


def branch_sign(theta_n, theta_e):
    if theta_n > theta_e:
        return 1
    if theta_n == theta_e:
        return 0
    return -1


@dataclass(frozen=True)
class CoQuantumPair:
    theta_e: float
    phi_e: float
    theta_n: float
    phi_n: float = 0.0

    def __post_init__(self):
        make_angles(self.theta_e, self.phi_e)
        make_angles(self.theta_n, self.phi_n)


@dataclass(frozen=True)
class Realization:
    """Outcome ``c_plus |+z> + c_minus exp(i phi_e) |-z>`` with binary coefficients."""

    c_plus: int
    c_minus: int
    phi_e: float

    def __post_init__(self):
        if {self.c_plus, self.c_minus} != {0, 1}:
            raise DomainError("exactly one of c_plus, c_minus must be 1")

    @property
    def ket(self):
        return np.array([self.c_plus, self.c_minus * np.exp(1j * self.phi_e)], dtype=complex)

    @property
    def bra(self):
        return self.ket.conj()


def predict(pair):
    s = branch_sign(pair.theta_n, pair.theta_e)
    if s == 0:
        raise DegenerateBranchError(f"theta_n == theta_e == {pair.theta_e}")
    return Realization(1, 0, pair.phi_e) if s > 0 else Realization(0, 1, pair.phi_e)


def pre_avg_density(r1, r2):
    """``|r1><r2|`` for two realizations sharing the same electron moment."""
    if r1.phi_e != r2.phi_e:
        raise DomainError("realizations must share the electron azimuth phi_e")
    return np.outer(r1.ket, r2.bra)


def _uniform_block(seed, start, stop):
    # Philox yields four doubles per counter step: one row per realization
    bitgen = np.random.Philox(key=int(seed))
    bitgen.advance(int(start))
    return np.random.Generator(bitgen).random((stop - start, 4))


def _to_angles(u_cos, u_phi):
    return np.arccos(1.0 - 2.0 * u_cos), 2.0 * np.pi * u_phi


def sample_co_quanta(seed, n, start=0):
    """Co-quantum directions for realizations ``start .. start+n-1``, uniform on the sphere.

    Returns ``(theta_n, phi_n)`` arrays.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    u = _uniform_block(seed, start, start + n)
    return _to_angles(u[:, 0], u[:, 1])


def sample_co_quantum(seed, index=0):
    theta, phi = sample_co_quanta(seed, 1, start=index)
    return BlochAngles(float(theta[0]), float(phi[0]))


@dataclass(frozen=True)
class EnsembleSummary:
    theta_e: float
    n: int
    n_up: int
    n_resampled: int
    k_i: float
    seed: int
    delta_phi: float
    theta_after_up: float
    theta_after_down: float

    @property
    def fraction_up(self):
        return self.n_up / self.n

    @property
    def expected(self):
        return float(np.cos(self.theta_e / 2) ** 2)

    @property
    def z_score(self):
        p = self.expected
        sd = np.sqrt(p * (1 - p) / self.n)
        return float((self.fraction_up - p) / sd) if sd > 0 else 0.0

    def to_dict(self):
        return {
            "theta_e": self.theta_e, "n": self.n, "n_up": self.n_up, "n_down": self.n - self.n_up,
            "n_resampled": self.n_resampled, "k_i": self.k_i, "seed": self.seed,
            "fraction_up": self.fraction_up, "expected": self.expected, "z_score": self.z_score,
            "delta_phi": self.delta_phi, "theta_after_up": self.theta_after_up,
            "theta_after_down": self.theta_after_down,
        }


def _branches(theta_e, seed, start, stop):
    u = _uniform_block(seed, start, stop)
    theta_n, _ = _to_angles(u[:, 0], u[:, 1])
    signs = np.sign(theta_n - theta_e).astype(int)
    resampled = 0
    for j in np.flatnonzero(signs == 0):
        # measure-zero tie: redraw from a stream private to this realization
        attempt = 0
        while signs[j] == 0:
            resampled += 1
            rng = np.random.default_rng([int(seed), int(start + j), attempt])
            signs[j] = branch_sign(float(np.arccos(1.0 - 2.0 * rng.random())), theta_e)
            attempt += 1
    return signs, resampled


def ensemble_collapse(theta_e, n, k_i=0.0, seed=0, chunk_size=65536, delta_phi=2 * np.pi):
    """Collapse ``n`` electrons at ``theta_e`` against random co-quanta.

    The result does not depend on ``chunk_size``. ``theta_after_up/down`` report
    the polar angle each branch reaches after traversing ``delta_phi``.
    """
    if not (0.0 < theta_e < np.pi):
        raise DomainError(f"theta_e {theta_e!r} must lie strictly inside (0, pi)")
    if n < 1:
        raise DomainError("ensemble size must be at least 1")
    if not (np.isfinite(k_i) and k_i >= 0):
        raise DomainError("k_i must be finite and non-negative")
    n_up = 0
    resampled = 0
    for start in range(0, n, chunk_size):
        signs, r = _branches(theta_e, seed, start, min(n, start + chunk_size))
        n_up += int(np.count_nonzero(signs > 0))
        resampled += r
    return EnsembleSummary(
        theta_e=float(theta_e), n=int(n), n_up=n_up, n_resampled=resampled, k_i=float(k_i),
        seed=int(seed), delta_phi=float(delta_phi),
        theta_after_up=collapse_theta(theta_e, delta_phi, 1, k_i),
        theta_after_down=collapse_theta(theta_e, delta_phi, -1, k_i),
    )


def average_pre_density(theta_e, phi_e, n, seed=0):
    """Mean of ``|r1><r2|`` over ``n`` independent realization pairs.

    Reported for inspection only; no equality with the quantum density matrix
    is implied.
    """
    theta_n, _ = sample_co_quanta(seed, 2 * n)
    up = theta_n > theta_e
    kets = np.stack([up.astype(complex), (~up) * np.exp(1j * phi_e)], axis=-1)
    k1, k2 = kets[0::2], kets[1::2]
    return np.einsum("ni,nj->ij", k1, k2.conj()) / n
