"""Taylor-linearized Doppler and the cubic phase polynomial of each ray.

Per side (MT or MR) and ray, the phase contributed over time is::

    A t^3 + B t^2 + C t + D

with A, B from the speed/heading accelerations, C from the initial Doppler
plus the antenna drift terms, and D the static array phase. The total
polynomial of a ray is the sum of the MT and MR contributions.

All functions broadcast over numpy arrays of ray angles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .geometry import VelocityProfile

SPEED_OF_LIGHT = 299_792_458.0


def wavelength(carrier_freq: float) -> float:
    if carrier_freq <= 0:
        raise DomainError(f"carrier frequency must be > 0, got {carrier_freq}")
    return SPEED_OF_LIGHT / carrier_freq


def _check_distance(d_n):
    if np.any(np.asarray(d_n) <= 0):
        raise DomainError("cluster distance must be > 0")


def taylor_k0(profile: VelocityProfile, d_n, alpha_ray):
    """Slope of cos(ray angle - heading) at t = 0, in 1/s."""
    _check_distance(d_n)
    s = np.sin(np.asarray(alpha_ray, dtype=float) - profile.heading)
    return -profile.speed * s**2 / d_n + profile.turn_rate * s


def taylor_k12(profile: VelocityProfile, d_n, alpha_ray):
    """Antenna drift rates ``(k1, k2)`` multiplying the x and y element offsets."""
    _check_distance(d_n)
    alpha = np.asarray(alpha_ray, dtype=float)
    s, c = np.sin(alpha), np.cos(alpha)
    k1 = -profile.speed / d_n * s**2 + profile.turn_rate * s
    k2 = -profile.speed / d_n * c**2 + profile.turn_rate * c
    return k1, k2


def doppler_at(profile: VelocityProfile, d_n, alpha_ray, wavelength, t):
    """Quadratic-in-time Doppler frequency (Hz) of one side."""
    if wavelength <= 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength}")
    k0 = taylor_k0(profile, d_n, alpha_ray)
    cos0 = np.cos(np.asarray(alpha_ray, dtype=float) - profile.heading)
    v0, a0 = profile.speed, profile.acceleration
    t = np.asarray(t, dtype=float)
    return (a0 * k0 * t**2 + (a0 * cos0 + v0 * k0) * t + v0 * cos0) / wavelength


class SideTerms(NamedTuple):
    """Per-side polynomial coefficients.

    ``A`` and ``B`` have the shape of the ray angles; ``C`` and ``D`` carry an
    extra trailing antenna axis.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray


def side_terms(profile: VelocityProfile, d_n, alpha_ray, antennas, wavelength) -> SideTerms:
    """Coefficients contributed by one terminal for rays ``alpha_ray`` and
    element positions ``antennas`` (shape ``(U, 2)``)."""
    if wavelength <= 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength}")
    alpha = np.asarray(alpha_ray, dtype=float)
    d_n = np.asarray(d_n, dtype=float)
    ant = np.asarray(antennas, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(ant)):
        raise DomainError("antenna positions must be finite")
    k0 = taylor_k0(profile, d_n, alpha)
    k1, k2 = taylor_k12(profile, d_n, alpha)
    cos0 = np.cos(alpha - profile.heading)
    v0, a0 = profile.speed, profile.acceleration
    g = 2 * math.pi / wavelength

    A = g / 3 * a0 * k0
    B = g / 2 * (a0 * cos0 + v0 * k0)
    dx, dy = ant[:, 0], ant[:, 1]
    drift = k1[..., None] * dx + k2[..., None] * dy
    C = g * (v0 * cos0[..., None] + drift)
    D = g * (np.cos(alpha)[..., None] * dx + np.sin(alpha)[..., None] * dy)
    A = A + np.zeros_like(alpha)
    B = B + np.zeros_like(alpha)
    return SideTerms(A, B, C, D)


@dataclass(frozen=True)
class RaySide:
    """One terminal's view of a ray: motion, cluster distance and ray angle."""

    profile: VelocityProfile
    distance: float
    angle: float


@dataclass(frozen=True)
class PhasePolynomial:
    """``phase(t) = A t^3 + B t^2 + C t + D`` (rad), summed over both sides."""

    A: float
    B: float
    C: float
    D: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return ((self.A * t + self.B) * t + self.C) * t + self.D

    def rate(self, t):
        """Time derivative of the phase in rad/s."""
        t = np.asarray(t, dtype=float)
        return (3 * self.A * t + 2 * self.B) * t + self.C


def build_phase_polynomial(mt: RaySide, mr: RaySide, antenna_mt, antenna_mr,
                           wavelength) -> PhasePolynomial:
    """Phase polynomial of one ray between one MT and one MR element."""
    total = np.zeros(4)
    for side, antenna in ((mt, antenna_mt), (mr, antenna_mr)):
        terms = side_terms(side.profile, side.distance, side.angle, [antenna], wavelength)
        total += [float(terms.A), float(terms.B), float(terms.C[0]), float(terms.D[0])]
    return PhasePolynomial(*map(float, total))
