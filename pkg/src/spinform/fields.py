"""Time-dependent magnetic flux density B(t).

Every field is a callable ``field(t) -> (3,)`` that also accepts an array of
times and then returns an ``(n, 3)`` array, so integrators can sample all the
Runge-Kutta stage times in one call.
"""
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, FieldRangeError


def _vec3(v, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be a finite 3-vector, got {v!r}")
    return v


@dataclass(frozen=True)
class ConstantField:
    b0: np.ndarray

    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "b0", _vec3(self.b0, "b0"))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(self.b0, t.shape + (3,)).copy()

    def to_dict(self):
        return {"kind": self.kind, "b0": self.b0.tolist()}


@dataclass(frozen=True)
class RotatingField:
    """Field of magnitude ``amplitude`` rotating at ``omega`` in the plane normal
    to ``normal``, plus a static component ``bz`` along ``normal``.

    For the default normal ``z`` the in-plane part is
    ``amplitude * (cos wt, sin wt, 0)``.
    """

    amplitude: float
    omega: float
    normal: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    bz: float = 0.0

    kind = "rotating"

    def __post_init__(self):
        n = _vec3(self.normal, "normal")
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise DomainError("rotating field normal must be nonzero")
        object.__setattr__(self, "normal", n / norm)

    def _plane_basis(self):
        n = self.normal
        ref = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = ref - np.dot(ref, n) * n
        e1 /= np.linalg.norm(e1)
        return e1, np.cross(n, e1)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        e1, e2 = self._plane_basis()
        c = np.cos(self.omega * t)[..., None]
        s = np.sin(self.omega * t)[..., None]
        return self.amplitude * (c * e1 + s * e2) + self.bz * self.normal

    def to_dict(self):
        return {"kind": self.kind, "amplitude": self.amplitude, "omega": self.omega,
                "normal": self.normal.tolist(), "bz": self.bz}


@dataclass(frozen=True)
class TabulatedField:
    """Piecewise-linear interpolation of sampled field values.

    Evaluating outside ``[times[0], times[-1]]`` raises FieldRangeError; a
    slack of ``1e-9`` of the grid span absorbs rounding in stage times.
    """

    times: np.ndarray
    samples: np.ndarray

    kind = "tabulated"

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        samples = np.asarray(self.samples, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise DomainError("tabulated field needs at least two sample times")
        if np.any(np.diff(times) <= 0):
            raise DomainError("tabulated field times must be strictly increasing")
        if samples.shape != (times.size, 3):
            raise DomainError(f"samples must have shape ({times.size}, 3), got {samples.shape}")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(samples))):
            raise DomainError("tabulated field contains non-finite values")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "samples", samples)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        slack = 1e-9 * (self.times[-1] - self.times[0])
        if np.any(t < self.times[0] - slack) or np.any(t > self.times[-1] + slack):
            raise FieldRangeError(
                f"time outside tabulated range [{self.times[0]}, {self.times[-1]}]")
        flat = t.ravel()
        out = np.stack([np.interp(flat, self.times, self.samples[:, k]) for k in range(3)], axis=-1)
        return out.reshape(t.shape + (3,))

    def to_dict(self):
        return {"kind": self.kind, "times": self.times.tolist(), "samples": self.samples.tolist()}


def field_from_dict(spec):
    """Build a field from its JSON form (the inverse of ``to_dict``)."""
    spec = dict(spec)
    kind = spec.pop("kind", None)
    allowed = {
        "constant": ({"b0"}, set()),
        "rotating": ({"amplitude", "omega"}, {"normal", "bz"}),
        "tabulated": ({"times", "samples"}, set()),
    }
    if kind not in allowed:
        raise DomainError(f"unknown field kind {kind!r}")
    required, optional = allowed[kind]
    unknown = set(spec) - required - optional
    if unknown:
        raise DomainError(f"unknown keys for {kind} field: {sorted(unknown)}")
    missing = required - set(spec)
    if missing:
        raise DomainError(f"missing keys for {kind} field: {sorted(missing)}")
    if kind == "constant":
        return ConstantField(spec["b0"])
    if kind == "rotating":
        return RotatingField(float(spec["amplitude"]), float(spec["omega"]),
                             spec.get("normal", [0.0, 0.0, 1.0]), float(spec.get("bz", 0.0)))
    return TabulatedField(spec["times"], spec["samples"])
