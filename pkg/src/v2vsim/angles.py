"""Von Mises angular statistics and ray-set construction.

Every random quantity in the simulator is drawn from a stream keyed by
``(seed, realization, path, kind)`` so that paths and realizations are
independent and adding one never perturbs another.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import i0e

from .errors import DomainError
from .geometry import wrap_angle

# stream kinds
AOD, AOA, PHASE, SHADOWING, VIRTUAL_DELAY = range(5)


def stream(seed: int, realization: int, path: int, kind: int) -> np.random.Generator:
    """Independent generator for one ``(realization, path, kind)`` key."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(realization), int(path), int(kind)))
    return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class AngleDistribution:
    """Von Mises law with concentration ``kappa`` around ``mean`` (rad)."""

    kappa: float
    mean: float = 0.0

    def __post_init__(self):
        kappa = float(self.kappa)
        if not (math.isfinite(kappa) and kappa >= 0):
            raise DomainError(f"kappa must be finite and >= 0, got {kappa}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "mean", wrap_angle(float(self.mean)))


def vm_pdf(dist: AngleDistribution, alpha):
    """Von Mises density exp(kappa*cos(alpha - mean)) / (2*pi*I0(kappa))."""
    alpha = np.asarray(alpha, dtype=float)
    k = dist.kappa
    # exponentially scaled I0 keeps large kappa finite
    dens = np.exp(k * (np.cos(alpha - dist.mean) - 1.0)) / (2 * math.pi * i0e(k))
    return float(dens) if dens.ndim == 0 else dens


# below this the wrapped-Cauchy envelope degenerates; a uniform envelope
# accepts with probability >= exp(-2 * kappa) instead
_UNIFORM_ENVELOPE = 1e-3


def _proposal_r(kappa: float) -> float:
    tau = 1.0 + math.sqrt(1.0 + 4.0 * kappa * kappa)
    rho = (tau - math.sqrt(2.0 * tau)) / (2.0 * kappa)
    return (1.0 + rho * rho) / (2.0 * rho)


def _rejection_sample(rng: np.random.Generator, kappa: float, count: int) -> np.ndarray:
    """Best-Fisher wrapped-Cauchy envelope, centred at zero."""
    out = np.empty(count)
    filled = 0
    if kappa < _UNIFORM_ENVELOPE:
        while filled < count:
            x = rng.uniform(-math.pi, math.pi, count - filled)
            keep = x[rng.random(x.size) < np.exp(kappa * (np.cos(x) - 1.0))]
            out[filled:filled + keep.size] = keep
            filled += keep.size
        return out
    r = _proposal_r(kappa)
    while filled < count:
        batch = max(16, int(1.3 * (count - filled)))
        u1, u2, u3 = rng.random((3, batch))
        z = np.cos(math.pi * u1)
        f = (1.0 + r * z) / (r + z)
        c = kappa * (r - f)
        accept = (c * (2.0 - c) - u2 > 0) | (np.log(c / u2) + 1.0 - c >= 0)
        theta = np.sign(u3[accept] - 0.5) * np.arccos(np.clip(f[accept], -1.0, 1.0))
        take = min(theta.size, count - filled)
        out[filled:filled + take] = theta[:take]
        filled += take
    return out


def vm_draw(rng: np.random.Generator, dist: AngleDistribution, count: int) -> np.ndarray:
    """``count`` Von Mises draws from an existing generator, wrapped to (-pi, pi]."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if dist.kappa == 0:
        return wrap_angle(rng.uniform(-math.pi, math.pi, count))
    return wrap_angle(dist.mean + _rejection_sample(rng, dist.kappa, count))


def vm_sample(dist: AngleDistribution, count: int, seed) -> np.ndarray:
    """I.i.d. Von Mises draws, deterministic given ``seed``."""
    return vm_draw(np.random.default_rng(seed), dist, count)


@dataclass(frozen=True)
class RaySet:
    """Frozen ray angles and initial phases, arrays of shape ``(N, M)``."""

    aod: np.ndarray
    aoa: np.ndarray
    phase: np.ndarray
    seed: int

    @property
    def paths(self) -> int:
        return self.aod.shape[0]

    @property
    def rays(self) -> int:
        return self.aod.shape[1]


def draw_path_rays(mt: AngleDistribution, mr: AngleDistribution, rays: int, seed: int,
                   path: int, realization: int = 0):
    """AoD, AoA and phases of one path, each of shape ``(rays,)``."""
    aod = vm_draw(stream(seed, realization, path, AOD), mt, rays)
    aoa = vm_draw(stream(seed, realization, path, AOA), mr, rays)
    # (0, 2*pi]
    phase = 2 * math.pi * (1.0 - stream(seed, realization, path, PHASE).random(rays))
    return aod, aoa, phase


def build_rayset(mt: Sequence[AngleDistribution], mr: Sequence[AngleDistribution], rays: int,
                 seed: int, realization: int = 0) -> RaySet:
    """Draw angles and phases for every path.

    ``mt[n]`` and ``mr[n]`` are the departure and arrival distributions of
    path ``n``; the two sides are drawn from independent streams.
    """
    if len(mt) != len(mr) or len(mt) < 1:
        raise DomainError("need the same number (>= 1) of MT and MR distributions")
    if rays < 1:
        raise DomainError(f"rays per path must be >= 1, got {rays}")
    per_path = [draw_path_rays(a, b, rays, seed, n, realization) for n, (a, b) in enumerate(zip(mt, mr))]
    aod, aoa, phase = (np.array(x) for x in zip(*per_path))
    for arr in (aod, aoa, phase):
        arr.flags.writeable = False
    return RaySet(aod=aod, aoa=aoa, phase=phase, seed=int(seed))
