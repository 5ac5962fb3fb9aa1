"""Time evolution of path delays and powers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import _kernels
from .errors import DegeneratePowerError, DomainError, HorizonError
from .geometry import ClusterGeometry, VelocityProfile, distance_linearized
from .phase import SPEED_OF_LIGHT


@dataclass(frozen=True)
class PowerDelayParams:
    """Delay/power model parameters.

    Parameters
    ----------
    r_tau : float
        Delay distribution proportionality factor (> 1).
    sigma_tau : float
        Delay spread in s.
    shadow_std_db : float
        Standard deviation of the per-path shadowing term Z_n in dB.
    virtual_delay : tuple of float
        Stationary mean of the virtual-link delay of each path, in s.
    coherence_time : float
        Time constant T_c of the first-order virtual-link filter, in s.
    innovation_std : float
        Stationary standard deviation of the virtual-link delay, in s.
    """

    r_tau: float = 2.3
    sigma_tau: float = 100e-9
    shadow_std_db: float = 3.0
    virtual_delay: Tuple[float, ...] = (0.0,)
    coherence_time: float = 5.0
    innovation_std: float = 5e-9

    def __post_init__(self):
        vd = self.virtual_delay
        vd = (float(vd),) if np.ndim(vd) == 0 else tuple(float(x) for x in vd)
        object.__setattr__(self, "virtual_delay", vd)
        if not self.r_tau > 1:
            raise DomainError(f"r_tau must be > 1, got {self.r_tau}")
        if not self.sigma_tau > 0:
            raise DomainError(f"sigma_tau must be > 0, got {self.sigma_tau}")
        if self.shadow_std_db < 0 or self.innovation_std < 0 or self.coherence_time < 0:
            raise DomainError("shadow_std_db, innovation_std and coherence_time must be >= 0")
        if not vd or min(vd) < 0:
            raise DomainError("virtual-link delays must be >= 0")

    @property
    def decay_rate(self) -> float:
        """Exponent scale (1/s) of the delay-dependent power decay."""
        return (self.r_tau - 1) / (self.r_tau * self.sigma_tau)

    def filter_coefficient(self, dt: float) -> float:
        """rho_f = exp(-dt / T_c); zero when T_c == 0."""
        if self.coherence_time == 0:
            return 0.0
        return math.exp(-dt / self.coherence_time)

    def virtual_delay_of(self, path: int) -> float:
        if len(self.virtual_delay) == 1:
            return self.virtual_delay[0]
        return self.virtual_delay[path]


@dataclass
class PathState:
    """Mutable per-path state advanced sample by sample."""

    tau: float
    power: float
    tau_virtual: float


def geometric_delay(cluster_mt: ClusterGeometry, cluster_mr: ClusterGeometry,
                    profile_mt: VelocityProfile, profile_mr: VelocityProfile, t):
    """Linearized MT and MR legs of the path delay, in s."""
    return (distance_linearized(cluster_mt, profile_mt, t)
            + distance_linearized(cluster_mr, profile_mr, t)) / SPEED_OF_LIGHT


def delay_at(cluster_mt: ClusterGeometry, cluster_mr: ClusterGeometry,
             profile_mt: VelocityProfile, profile_mr: VelocityProfile, t, tau_virtual=0.0):
    """Path delay: linearized geometric legs plus the current virtual-link delay."""
    if np.any(np.asarray(t) < 0):
        raise DomainError("time must be >= 0")
    tau = geometric_delay(cluster_mt, cluster_mr, profile_mt, profile_mr, t) + np.asarray(tau_virtual)
    if np.any(tau <= 0):
        raise HorizonError("path delay became nonpositive; horizon exceeds model validity")
    return float(tau) if np.ndim(tau) == 0 else tau


def step_virtual_delay(state: PathState, params: PowerDelayParams, dt: float, noise: float,
                       path: int = 0) -> float:
    """One step of the clamped first-order filter for the virtual-link delay.

    Updates ``state.tau_virtual`` in place and returns the new value.
    """
    if dt <= 0:
        raise DomainError(f"dt must be > 0, got {dt}")
    rho = params.filter_coefficient(dt)
    mean = params.virtual_delay_of(path)
    new = rho * state.tau_virtual + (1 - rho) * mean + params.innovation_std * math.sqrt(1 - rho * rho) * noise
    state.tau_virtual = max(new, 0.0)
    return state.tau_virtual


def virtual_delay_track(initial: float, mean: float, rho: float, scale: float,
                        noise: np.ndarray) -> np.ndarray:
    """Filter output for each noise draw (same recursion as ``step_virtual_delay``)."""
    noise = np.ascontiguousarray(noise, dtype=float)
    return _kernels.clamped_ar1(float(initial), float(mean), float(rho), float(scale), noise)


def path_powers(delays, params: PowerDelayParams, shadowing_db) -> np.ndarray:
    """Normalized path powers; the last axis of ``delays`` indexes paths."""
    delays = np.asarray(delays, dtype=float)
    z = np.asarray(shadowing_db, dtype=float)
    if np.any(delays < 0):
        raise DomainError("delays must be >= 0")
    if delays.shape[-1] < 1:
        raise DomainError("need at least one path")
    # log domain with a max shift; the common factor cancels in the normalization
    log_p = -delays * params.decay_rate - z * (math.log(10) / 10)
    if not np.all(np.isfinite(log_p)):
        raise DegeneratePowerError("unnormalized path powers are not finite")
    p = np.exp(log_p - log_p.max(axis=-1, keepdims=True))
    total = p.sum(axis=-1, keepdims=True)
    if np.any(total == 0) or not np.all(np.isfinite(total)):
        raise DegeneratePowerError("unnormalized path powers underflow to zero")
    return p / total
