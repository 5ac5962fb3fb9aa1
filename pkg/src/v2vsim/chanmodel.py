"""Time-variant P x Q channel impulse response assembled from phase polynomials,
path powers and path delays."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .angles import SHADOWING, VIRTUAL_DELAY, AngleDistribution, RaySet, build_rayset, stream
from .errors import ConfigError, DomainError
from .geometry import AntennaArray, ClusterGeometry, VelocityProfile
from .params import (PowerDelayParams, geometric_delay, path_powers,
                     virtual_delay_track)
from .phase import PhasePolynomial, side_terms, wavelength

CHUNK = 128 * _kernels.ANCHOR
FALLBACK_SAMPLE_RATE = 1000.0
# default sample rate as a multiple of the largest Doppler shift
SAMPLE_RATE_FACTOR = 16


@dataclass(frozen=True)
class Terminal:
    """Motion, antenna array and angular concentration of one vehicle."""

    profile: VelocityProfile = field(default_factory=VelocityProfile)
    array: AntennaArray = field(default_factory=AntennaArray)
    kappa: float = 1.0


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed to generate a reproducible CIR stream.

    ``clusters[n]`` is the ``(MT-side, MR-side)`` cluster pair of path ``n``.
    ``sample_rate=None`` selects ``SAMPLE_RATE_FACTOR`` times the largest
    Doppler shift over the horizon.
    """

    carrier_freq: float
    duration: float
    rays: int
    seed: int
    mt: Terminal
    mr: Terminal
    clusters: Tuple[Tuple[ClusterGeometry, ClusterGeometry], ...]
    power_delay: PowerDelayParams = field(default_factory=PowerDelayParams)
    sample_rate: Optional[float] = None
    power_as_amplitude: bool = True
    los: bool = False

    def __post_init__(self):
        object.__setattr__(self, "clusters", tuple((a, b) for a, b in self.clusters))
        self.validate()

    def validate(self) -> None:
        if self.los:
            raise ConfigError("a line-of-sight component is not part of this model; set los = false")
        if not self.carrier_freq > 0:
            raise ConfigError(f"carrier_freq must be > 0, got {self.carrier_freq}")
        if not self.duration > 0:
            raise ConfigError(f"duration must be > 0, got {self.duration}")
        if self.sample_rate is not None and not self.sample_rate > 0:
            raise ConfigError(f"sample_rate must be > 0, got {self.sample_rate}")
        if self.rays < 1:
            raise ConfigError(f"rays per path must be >= 1, got {self.rays}")
        if len(self.clusters) < 1:
            raise ConfigError("need at least one path")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        for term in (self.mt, self.mr):
            if not (math.isfinite(term.kappa) and term.kappa >= 0):
                raise ConfigError(f"kappa must be finite and >= 0, got {term.kappa}")
        nvd = len(self.power_delay.virtual_delay)
        if nvd not in (1, self.paths):
            raise ConfigError(f"{nvd} virtual-link delays given for {self.paths} paths")
        try:
            self.mt.profile.check_horizon(self.duration)
            self.mr.profile.check_horizon(self.duration)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        for n, (cmt, cmr) in enumerate(self.clusters):
            # affine in t, so checking the horizon end suffices
            end = geometric_delay(cmt, cmr, self.mt.profile, self.mr.profile, self.duration)
            if end <= 0:
                raise ConfigError(
                    f"path {n}: linearized delay becomes nonpositive before t={self.duration} s"
                )

    @property
    def paths(self) -> int:
        return len(self.clusters)

    @property
    def wavelength(self) -> float:
        return wavelength(self.carrier_freq)

    def max_doppler(self) -> float:
        """Largest total Doppler shift (Hz) implied by the peak speeds."""
        vmax = 0.0
        for term in (self.mt, self.mr):
            p = term.profile
            vmax += max(p.speed, float(p.speed_at(self.duration)))
        return vmax / self.wavelength

    @property
    def effective_sample_rate(self) -> float:
        if self.sample_rate is not None:
            return float(self.sample_rate)
        fd = self.max_doppler()
        return SAMPLE_RATE_FACTOR * fd if fd > 0 else FALLBACK_SAMPLE_RATE

    @property
    def num_samples(self) -> int:
        return max(1, int(round(self.duration * self.effective_sample_rate)))

    def angle_distributions(self):
        mt = [AngleDistribution(self.mt.kappa, c.mean_angle) for c, _ in self.clusters]
        mr = [AngleDistribution(self.mr.kappa, c.mean_angle) for _, c in self.clusters]
        return mt, mr


@dataclass(frozen=True)
class CirFrame:
    """Channel state at one sample instant.

    ``gains[n, p, q]`` is the unit-power gain of path ``n`` between MT element
    ``p`` and MR element ``q``; ``delays`` and ``powers`` are per path.
    """

    t: float
    gains: np.ndarray
    delays: np.ndarray
    powers: np.ndarray

    def path_weights(self, power_as_amplitude: bool = True) -> np.ndarray:
        """Amplitude factor applied to each path gain."""
        return self.powers if power_as_amplitude else np.sqrt(self.powers)

    def narrowband(self, power_as_amplitude: bool = True) -> np.ndarray:
        """P x Q narrowband channel matrix (sum over paths)."""
        w = self.path_weights(power_as_amplitude)
        return np.tensordot(w, self.gains, axes=(0, 0))


def tapped_delay_line(frame: CirFrame, sample_rate: float, power_as_amplitude: bool = True) -> np.ndarray:
    """Taps of shape ``(P, Q, L)`` with each path placed at its nearest sample."""
    idx = np.rint(frame.delays * sample_rate).astype(int)
    n, p, q = frame.gains.shape
    taps = np.zeros((p, q, idx.max() + 1), dtype=complex)
    w = frame.path_weights(power_as_amplitude)
    for k in range(n):
        taps[:, :, idx[k]] += w[k] * frame.gains[k]
    return taps


@dataclass(frozen=True)
class CirSeries:
    """Array view of a block of frames."""

    times: np.ndarray
    gains: np.ndarray  # (T, N, P, Q)
    delays: np.ndarray  # (T, N)
    powers: np.ndarray  # (T, N)

    def __len__(self):
        return len(self.times)

    def frames(self) -> Iterator[CirFrame]:
        for k in range(len(self.times)):
            yield CirFrame(float(self.times[k]), self.gains[k], self.delays[k], self.powers[k])

    @classmethod
    def concatenate(cls, parts: Sequence["CirSeries"]) -> "CirSeries":
        return cls(*(np.concatenate([getattr(p, f) for p in parts])
                     for f in ("times", "gains", "delays", "powers")))


def gain_at(polys: Sequence[PhasePolynomial], phases, t) -> complex:
    """Sum-of-sinusoids gain of one path from its M ray polynomials."""
    phases = np.asarray(phases, dtype=float)
    if len(polys) != phases.size:
        raise DomainError("need one initial phase per ray polynomial")
    total = sum(np.exp(1j * (poly(t) + th)) for poly, th in zip(polys, phases))
    return complex(total / math.sqrt(len(polys)))


def phase_coefficients(config: SimulationConfig, rays: RaySet):
    """Arrays ``(A, B, C, D)``: A, B of shape (N, M); C, D of shape (N, M, P, Q)."""
    lam = config.wavelength
    d_mt = np.array([c.distance for c, _ in config.clusters])[:, None]
    d_mr = np.array([c.distance for _, c in config.clusters])[:, None]
    t_mt = side_terms(config.mt.profile, d_mt, rays.aod, config.mt.array.positions, lam)
    t_mr = side_terms(config.mr.profile, d_mr, rays.aoa, config.mr.array.positions, lam)
    A = t_mt.A + t_mr.A
    B = t_mt.B + t_mr.B
    C = t_mt.C[..., :, None] + t_mr.C[..., None, :]
    D = t_mt.D[..., :, None] + t_mr.D[..., None, :]
    return A, B, C, D


def draw_rays(config: SimulationConfig, realization: int = 0) -> RaySet:
    mt, mr = config.angle_distributions()
    return build_rayset(mt, mr, config.rays, config.seed, realization)


def shadowing(config: SimulationConfig) -> np.ndarray:
    """Per-path shadowing Z_n in dB, drawn once and held constant."""
    std = config.power_delay.shadow_std_db
    return np.array([stream(config.seed, 0, n, SHADOWING).normal(0.0, std) if std > 0 else 0.0
                     for n in range(config.paths)])


def simulate_chunks(config: SimulationConfig, chunk: int = CHUNK) -> Iterator[CirSeries]:
    """Generate the CIR in blocks of at most ``chunk`` samples."""
    if chunk % _kernels.ANCHOR:
        raise ValueError(f"chunk must be a multiple of {_kernels.ANCHOR}")
    fs = config.effective_sample_rate
    h = 1.0 / fs
    total = config.num_samples
    rays = draw_rays(config)
    A, B, C, D = (np.ascontiguousarray(x) for x in phase_coefficients(config, rays))
    theta = np.ascontiguousarray(rays.phase)
    z_db = shadowing(config)
    pd = config.power_delay
    rho = pd.filter_coefficient(h)
    means = [pd.virtual_delay_of(n) for n in range(config.paths)]
    noise_streams = [stream(config.seed, 0, n, VIRTUAL_DELAY) for n in range(config.paths)]
    tau_v = np.array(means)
    n_paths = config.paths
    P, Q = C.shape[2], C.shape[3]

    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        times = (start + np.arange(count)) * h
        track = np.empty((count, n_paths))
        for n in range(n_paths):
            first = 1 if start == 0 else 0
            noise = noise_streams[n].standard_normal(count - first)
            seg = virtual_delay_track(tau_v[n], means[n], rho, pd.innovation_std, noise)
            if first:
                track[0, n] = tau_v[n]
                track[1:, n] = seg
            else:
                track[:, n] = seg
            tau_v[n] = track[-1, n]
        geo = np.stack([geometric_delay(cmt, cmr, config.mt.profile, config.mr.profile, times)
                        for cmt, cmr in config.clusters], axis=-1)
        delays = geo + track
        powers = path_powers(delays, pd, z_db)
        out = np.empty((n_paths, P, Q, count), dtype=complex)
        _kernels.sum_of_cubic_phasors(start, h, count, A, B, C, D, theta, out)
        yield CirSeries(times, np.moveaxis(out, -1, 0), delays, powers)


def simulate(config: SimulationConfig) -> CirSeries:
    """Whole CIR as arrays."""
    return CirSeries.concatenate(list(simulate_chunks(config)))


def generate_cir(config: SimulationConfig) -> Iterator[CirFrame]:
    """Ordered stream of frames, one per sample instant.

    The configuration is checked before the iterator is returned.
    """
    config.validate()
    return (frame for block in simulate_chunks(config) for frame in block.frames())
