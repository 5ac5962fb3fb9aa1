"""Spatial and temporal correlation of the path gains.

Three independent routes are provided for every correlation:

* closed forms built on :func:`~v2vsim.bessel.bessel_i0_complex`,
* adaptive quadrature of the defining integrals over the Von Mises density,
* Monte Carlo ensemble averages over independent ray sets of the simulator.

Per-side correlations multiply to the two-terminal value because departure
and arrival angles are independent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import quad

from .angles import AngleDistribution, draw_path_rays, vm_pdf
from .bessel import i0_sqrt
from .errors import DomainError, QuadratureError
from .geometry import (ClusterGeometry, VelocityProfile, bearing_rate, mean_angle_at,
                       state_at)
from .phase import side_terms

SIDES = ("mt", "mr", "both")
# array axis for the closed-form spatial correlation (elements along y)
Y_AXIS = math.pi / 2
QUAD_TOL = 1e-10


@dataclass(frozen=True)
class CorrelationQuery:
    """One point of the space-time correlation.

    ``spacing_mt``/``spacing_mr`` are element separations (m) along the y
    axis; ``lag`` is the time lag (s) after the absolute time ``t``.
    """

    t: float = 0.0
    lag: float = 0.0
    spacing_mt: float = 0.0
    spacing_mr: float = 0.0
    side: str = "both"
    path: int = 0

    def __post_init__(self):
        if self.t < 0 or self.lag < 0:
            raise DomainError("t and lag must be >= 0")
        if self.spacing_mt < 0 or self.spacing_mr < 0:
            raise DomainError("antenna spacings must be >= 0")
        if self.side not in SIDES:
            raise DomainError(f"side must be one of {SIDES}, got {self.side!r}")

    def sides(self):
        return ("mt", "mr") if self.side == "both" else (self.side,)

    def spacing(self, side: str) -> float:
        return self.spacing_mt if side == "mt" else self.spacing_mr


class TacfRS(NamedTuple):
    R: float
    S: float


class MonteCarloEstimate(NamedTuple):
    value: complex
    stderr: float
    realizations: int


def _complex_quad(f, tol=QUAD_TOL):
    parts = []
    for part in (lambda a: f(a).real, lambda a: f(a).imag):
        val, err = quad(part, -math.pi, math.pi, epsabs=tol, epsrel=0.0, limit=400)
        if err > tol:
            raise QuadratureError("quadrature did not converge", err)
        parts.append(val)
    return complex(parts[0], parts[1])


# spatial


def sccf_closed(kappa: float, mean_angle: float, spacing: float, wavelength: float,
                axis_angle: float = Y_AXIS) -> complex:
    """Closed-form spatial correlation of one side.

    ``axis_angle`` is the direction of the element separation; for an array
    along y the angular term is ``sin(mean_angle)``.
    """
    if wavelength <= 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength}")
    c = 2 * math.pi * spacing / wavelength
    w2 = kappa * kappa - c * c + 2j * c * kappa * math.cos(mean_angle - axis_angle)
    return i0_sqrt(w2) / i0_sqrt(kappa * kappa)


def sccf_quadrature(dist: AngleDistribution, spacing: float, wavelength: float,
                    axis_angle: float = Y_AXIS, tol: float = QUAD_TOL) -> complex:
    """Spatial correlation by quadrature over the angle density."""
    c = 2 * math.pi * spacing / wavelength
    return _complex_quad(lambda a: np.exp(1j * c * math.cos(a - axis_angle)) * vm_pdf(dist, a), tol)


# temporal


def tacf_rs(profile: VelocityProfile, cluster: ClusterGeometry, wavelength: float,
            t: float, lag: float) -> TacfRS:
    """R and S terms of the closed-form temporal correlation."""
    if wavelength <= 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength}")
    g = 2 * math.pi / wavelength
    v = float(profile.speed_at(t))
    a0 = profile.acceleration
    # rate of (bearing - heading), from the initial geometry
    omega = bearing_rate(cluster, profile) - profile.turn_rate
    near = v * lag / 2 + a0 * lag**2 / 6
    far = v * lag / 2 + a0 * lag**2 / 3
    R = g * (-near - far * math.cos(omega * lag))
    S = g * far * math.sin(omega * lag)
    return TacfRS(R, S)


def tacf_closed(kappa: float, profile: VelocityProfile, cluster: ClusterGeometry,
                wavelength: float, t: float, lag: float) -> complex:
    """Closed-form temporal correlation of one side at absolute time ``t``."""
    R, S = tacf_rs(profile, cluster, wavelength, t, lag)
    beta = float(profile.heading + profile.turn_rate * t) - float(mean_angle_at(cluster, profile, t))
    w2 = (kappa * kappa - R * R - S * S
          + 2j * kappa * (R * math.cos(beta) - S * math.sin(beta)))
    return i0_sqrt(w2) / i0_sqrt(kappa * kappa)


def tacf_quadrature(kappa: float, profile: VelocityProfile, cluster: ClusterGeometry,
                    wavelength: float, t: float, lag: float, tol: float = QUAD_TOL) -> complex:
    """Temporal correlation by quadrature of the lag-phase integrand.

    The geometry is re-based at ``t`` (speed, heading, distance and mean
    bearing at that instant) and the angle offset from the mean bearing is
    held fixed over the lag, so one angle density weights the integrand.
    """
    prof, clus = state_at(cluster, profile, t)
    v, a0, b0, d = prof.speed, prof.acceleration, prof.turn_rate, clus.distance
    dist = AngleDistribution(kappa, clus.mean_angle)
    g = 2 * math.pi / wavelength

    def integrand(alpha):
        x = alpha - prof.heading
        cx, sx = math.cos(x), math.sin(x)
        k0 = -v * sx * sx / d + b0 * sx
        psi = g / 3 * a0 * k0 * lag**3 + g / 2 * (a0 * cx + v * k0) * lag**2 + g * v * cx * lag
        return np.exp(-1j * psi) * vm_pdf(dist, alpha)

    return _complex_quad(integrand, tol)


# config-level dispatch


def _side_parts(config, query: CorrelationQuery, side: str):
    n = query.path
    term = config.mt if side == "mt" else config.mr
    cluster = config.clusters[n][0 if side == "mt" else 1]
    return term, cluster


def _evaluate(config, query: CorrelationQuery, spatial, temporal) -> complex:
    if not 0 <= query.path < config.paths:
        raise DomainError(f"path {query.path} out of range")
    total = 1.0 + 0j
    for side in query.sides():
        term, cluster = _side_parts(config, query, side)
        spacing = query.spacing(side)
        if query.lag > 0 and spacing > 0:
            raise DomainError("joint space-time correlation has no closed form; use stcf_mc")
        if query.lag > 0:
            total *= temporal(term, cluster)
        else:
            total *= spatial(term, cluster, spacing)
    return total


def correlation_closed(config, query: CorrelationQuery) -> complex:
    """Closed-form SCCF (``lag == 0``) or TACF (zero spacings) of one path."""
    lam = config.wavelength

    def spatial(term, cluster, spacing):
        mean = float(mean_angle_at(cluster, term.profile, query.t))
        return sccf_closed(term.kappa, mean, spacing, lam)

    def temporal(term, cluster):
        return tacf_closed(term.kappa, term.profile, cluster, lam, query.t, query.lag)

    return _evaluate(config, query, spatial, temporal)


def correlation_quadrature(config, query: CorrelationQuery, tol: float = QUAD_TOL) -> complex:
    """Quadrature counterpart of :func:`correlation_closed`."""
    lam = config.wavelength

    def spatial(term, cluster, spacing):
        mean = float(mean_angle_at(cluster, term.profile, query.t))
        return sccf_quadrature(AngleDistribution(term.kappa, mean), spacing, lam, tol=tol)

    def temporal(term, cluster):
        return tacf_quadrature(term.kappa, term.profile, cluster, lam, query.t, query.lag, tol)

    return _evaluate(config, query, spatial, temporal)


# Monte Carlo


class RayEnsemble(NamedTuple):
    """Independent ray draws of one path: arrays of shape (R, M)."""

    aod: np.ndarray
    aoa: np.ndarray
    phase: np.ndarray


def draw_ensemble(config, path: int, realizations: int, seed: Optional[int] = None) -> RayEnsemble:
    seed = config.seed if seed is None else seed
    mt, mr = config.angle_distributions()
    draws = [draw_path_rays(mt[path], mr[path], config.rays, seed, path, r)
             for r in range(realizations)]
    return RayEnsemble(*(np.array(x) for x in zip(*draws)))


def _side_phases(term, cluster, angles, spacing, wavelength, t1, t2):
    antennas = [[0.0, spacing], [0.0, 0.0]]
    A, B, C, D = side_terms(term.profile, cluster.distance, angles, antennas, wavelength)
    ph1 = ((A * t1 + B) * t1 + C[..., 0]) * t1 + D[..., 0]
    ph2 = ((A * t2 + B) * t2 + C[..., 1]) * t2 + D[..., 1]
    return ph1, ph2


def stcf_mc(config, query: CorrelationQuery, realizations: int,
            estimator: str = "conditional", ensemble: Optional[RayEnsemble] = None,
            seed: Optional[int] = None) -> MonteCarloEstimate:
    """Ensemble estimate of the normalized space-time correlation of one path.

    Compares the gain at ``(t, element spacing)`` with the gain at
    ``t + lag`` on the reference elements (origin of each array).

    ``estimator="full"`` averages ``h1 * conj(h2)`` over realizations and
    normalizes by the mean powers. ``estimator="conditional"`` first
    averages out the uniform ray phases analytically (their cross terms
    have zero mean), leaving ``mean_m exp(j(phi1_m - phi2_m))`` per ray set.
    Both are unbiased; the conditional one has a standard error that
    shrinks with the number of rays as well as realizations.
    """
    if realizations < 2:
        raise DomainError("need at least 2 realizations")
    if estimator not in ("conditional", "full"):
        raise DomainError(f"unknown estimator {estimator!r}")
    if not 0 <= query.path < config.paths:
        raise DomainError(f"path {query.path} out of range")
    if ensemble is None:
        ensemble = draw_ensemble(config, query.path, realizations, seed)
    else:
        ensemble = RayEnsemble(*(x[:realizations] for x in ensemble))
        if ensemble.aod.shape[0] < realizations:
            raise DomainError("ensemble smaller than the requested realizations")

    lam = config.wavelength
    t1, t2 = query.t, query.t + query.lag
    phi1 = np.zeros(ensemble.aod.shape)
    phi2 = np.zeros(ensemble.aod.shape)
    for side in query.sides():
        term, cluster = _side_parts(config, query, side)
        angles = ensemble.aod if side == "mt" else ensemble.aoa
        p1, p2 = _side_phases(term, cluster, angles, query.spacing(side), lam, t1, t2)
        phi1 += p1
        phi2 += p2

    if estimator == "conditional":
        x = np.exp(1j * (phi1 - phi2)).mean(axis=1)
        norm = 1.0
    else:
        m = ensemble.aod.shape[1]
        h1 = np.exp(1j * (phi1 + ensemble.phase)).sum(axis=1) / math.sqrt(m)
        h2 = np.exp(1j * (phi2 + ensemble.phase)).sum(axis=1) / math.sqrt(m)
        x = h1 * np.conj(h2)
        norm = math.sqrt(np.mean(np.abs(h1) ** 2) * np.mean(np.abs(h2) ** 2))
    mean = x.mean()
    se = math.sqrt(np.sum(np.abs(x - mean) ** 2) / (x.size - 1) / x.size)
    return MonteCarloEstimate(complex(mean / norm), se / norm, realizations)
