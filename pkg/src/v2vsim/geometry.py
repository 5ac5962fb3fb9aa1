"""Terminal kinematics, antenna arrays and cluster geometry in the 2D plane.

Terminals move with linearly varying speed and heading::

    v(t) = v0 + a0 * t,        heading(t) = alpha_v + b0 * t

Clusters are static points at distance ``d`` and bearing ``mean_angle`` from
the terminal's position at t = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DegenerateGeometryError, DomainError, HorizonError

# |b0 * t| below this uses the power series of the heading integral instead
# of the closed-form antiderivative, which divides by b0 and b0**2.
_SERIES_THRESHOLD = 0.5
_SERIES_TERMS = 30


def wrap_angle(angle):
    """Wrap angles to the half-open interval (-pi, pi]."""
    wrapped = math.pi - np.mod(math.pi - np.asarray(angle, dtype=float), 2 * math.pi)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def angle_diff(a, b):
    """Wrapped difference ``a - b`` in (-pi, pi]."""
    return wrap_angle(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


@dataclass(frozen=True)
class VelocityProfile:
    """Linearly varying speed and heading of one terminal.

    Parameters
    ----------
    speed : float
        Initial speed v0 in m/s.
    acceleration : float
        Speed rate a0 in m/s^2.
    heading : float
        Initial direction of motion alpha_v in rad (stored wrapped).
    turn_rate : float
        Heading rate b0 in rad/s; positive is counterclockwise.
    """

    speed: float = 0.0
    acceleration: float = 0.0
    heading: float = 0.0
    turn_rate: float = 0.0

    def __post_init__(self):
        for name in ("speed", "acceleration", "heading", "turn_rate"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.speed < 0:
            raise DomainError(f"speed must satisfy v0 ≥ 0, got {self.speed}")
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    @property
    def is_static(self) -> bool:
        return self.speed == 0 and self.acceleration == 0

    def speed_at(self, t):
        return self.speed + self.acceleration * np.asarray(t, dtype=float)

    def heading_at(self, t):
        return wrap_angle(self.heading + self.turn_rate * np.asarray(t, dtype=float))

    def stop_time(self) -> float:
        """Time at which the speed reaches zero (inf if it never does)."""
        if self.acceleration >= 0:
            return math.inf
        return -self.speed / self.acceleration

    def check_horizon(self, horizon: float) -> None:
        if horizon < 0:
            raise DomainError(f"horizon must be >= 0, got {horizon}")
        if self.stop_time() < horizon:
            raise DomainError(
                f"speed v0 + a0*t becomes negative at t={self.stop_time():.6g} s "
                f"inside the horizon {horizon:.6g} s"
            )

    def advanced(self, t: float) -> "VelocityProfile":
        """Profile re-based at time ``t`` (same accelerations)."""
        return VelocityProfile(
            speed=float(self.speed_at(t)),
            acceleration=self.acceleration,
            heading=self.heading + self.turn_rate * t,
            turn_rate=self.turn_rate,
        )


@dataclass(frozen=True)
class ClusterGeometry:
    """Initial distance (m) and mean bearing (rad) from a terminal to its cluster."""

    distance: float
    mean_angle: float

    def __post_init__(self):
        distance = float(self.distance)
        if not (math.isfinite(distance) and distance > 0):
            raise DomainError(f"cluster distance must be > 0, got {distance}")
        object.__setattr__(self, "distance", distance)
        object.__setattr__(self, "mean_angle", wrap_angle(float(self.mean_angle)))

    @property
    def position(self) -> np.ndarray:
        return self.distance * np.array([math.cos(self.mean_angle), math.sin(self.mean_angle)])


@dataclass(frozen=True)
class AntennaArray:
    """Element positions (m) in the terminal's local frame."""

    elements: Tuple[Tuple[float, float], ...] = ((0.0, 0.0),)

    def __post_init__(self):
        elements = tuple((float(x), float(y)) for x, y in self.elements)
        if not elements:
            raise DomainError("an antenna array needs at least one element")
        if not all(math.isfinite(c) for e in elements for c in e):
            raise DomainError("antenna element positions must be finite")
        object.__setattr__(self, "elements", elements)

    @classmethod
    def linear_y(cls, count: int, spacing: float) -> "AntennaArray":
        """Uniform linear array along the y axis, first element at the origin."""
        return cls(tuple((0.0, k * spacing) for k in range(count)))

    @property
    def count(self) -> int:
        return len(self.elements)

    @property
    def positions(self) -> np.ndarray:
        return np.array(self.elements, dtype=float).reshape(-1, 2)

    @property
    def on_y_axis(self) -> bool:
        return all(x == 0.0 for x, _ in self.elements)


def _heading_integral(profile: VelocityProfile, t: np.ndarray) -> np.ndarray:
    """Complex displacement ``int_0^t v(s) exp(j*heading(s)) ds`` without the
    initial heading factor."""
    v0, a0, b0 = profile.speed, profile.acceleration, profile.turn_rate
    out = np.empty(t.shape, dtype=complex)
    small = np.abs(b0 * t) < _SERIES_THRESHOLD

    if np.any(small):
        ts = t[small]
        jb = 1j * b0
        acc = np.zeros(ts.shape, dtype=complex)
        coeff = np.ones(ts.shape, dtype=complex)  # (j b0 t)^k / k!
        for k in range(_SERIES_TERMS):
            acc += coeff * (v0 * ts / (k + 1) + a0 * ts**2 / (k + 2))
            coeff = coeff * jb * ts / (k + 1)
        out[small] = acc

    if not np.all(small):
        tl = t[~small]
        rot = np.exp(1j * b0 * tl)
        vt = v0 + a0 * tl
        out[~small] = (vt / (1j * b0) + a0 / b0**2) * rot - (v0 / (1j * b0) + a0 / b0**2)
    return out


def position_at(profile: VelocityProfile, t, horizon: Optional[float] = None) -> np.ndarray:
    """Displacement of the terminal from its t = 0 position.

    Evaluates the kinematic integral analytically. ``t`` may be a scalar
    (returns shape ``(2,)``) or an array (returns ``t.shape + (2,)``).
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise DomainError("time must be >= 0")
    tmax = float(np.max(tt)) if tt.size else 0.0
    if horizon is not None and tmax > horizon:
        raise HorizonError(f"t={tmax:.6g} s exceeds the horizon {horizon:.6g} s")
    if profile.stop_time() < tmax:
        raise DomainError(
            f"speed v0 + a0*t becomes negative at t={profile.stop_time():.6g} s"
        )
    disp = np.exp(1j * profile.heading) * _heading_integral(profile, np.atleast_1d(tt))
    xy = np.stack([disp.real, disp.imag], axis=-1)
    return xy.reshape(tt.shape + (2,))


def _relative(cluster: ClusterGeometry, profile: VelocityProfile, t, horizon=None) -> np.ndarray:
    return cluster.position - position_at(profile, t, horizon)


def distance_exact(cluster: ClusterGeometry, profile: VelocityProfile, t, horizon=None):
    """Exact terminal-to-cluster distance at time ``t``."""
    rel = _relative(cluster, profile, t, horizon)
    d = np.hypot(rel[..., 0], rel[..., 1])
    return float(d) if np.ndim(d) == 0 else d


def distance_linearized(cluster: ClusterGeometry, profile: VelocityProfile, t):
    """First-order Taylor distance ``d - v0*cos(mean_angle - heading)*t``."""
    tt = np.asarray(t, dtype=float)
    slope = profile.speed * math.cos(cluster.mean_angle - profile.heading)
    d = cluster.distance - slope * tt
    return float(d) if np.ndim(d) == 0 else d


def mean_angle_at(cluster: ClusterGeometry, profile: VelocityProfile, t, horizon=None):
    """Bearing from the terminal's position at ``t`` to the cluster, in (-pi, pi]."""
    rel = _relative(cluster, profile, t, horizon)
    dist = np.hypot(rel[..., 0], rel[..., 1])
    if np.any(dist <= 1e-12 * cluster.distance):
        raise DegenerateGeometryError("terminal coincides with the cluster")
    return wrap_angle(np.arctan2(rel[..., 1], rel[..., 0]))


def state_at(cluster: ClusterGeometry, profile: VelocityProfile, t: float):
    """Re-based ``(profile, cluster)`` pair describing the geometry at time ``t``."""
    return (
        profile.advanced(t),
        ClusterGeometry(distance_exact(cluster, profile, t), mean_angle_at(cluster, profile, t)),
    )


def bearing_rate(cluster: ClusterGeometry, profile: VelocityProfile) -> float:
    """Initial rate of change of the cluster bearing, v0*sin(mean - heading)/d."""
    return profile.speed * math.sin(cluster.mean_angle - profile.heading) / cluster.distance

