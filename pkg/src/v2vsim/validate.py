"""Invariant suite run by ``v2vsim validate``.

Each check measures a residual and compares it with a tolerance; the report
is a plain dict ready for JSON.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Callable, Dict, List, NamedTuple

import numpy as np

from . import _kernels
from .chanmodel import SimulationConfig, draw_rays, phase_coefficients, simulate, simulate_chunks
from .geometry import distance_exact, distance_linearized
from .stats import (CorrelationQuery, correlation_closed, correlation_quadrature, draw_ensemble,
                    stcf_mc)

TACF_LAGS = np.linspace(0.0, 0.02, 41)
MC_LAGS = (1e-3, 5e-3, 1e-2)


class Check(NamedTuple):
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str

    def as_dict(self):
        return self._asdict()


def _check(name, residual, tolerance, detail, strict=False):
    residual = float(residual)
    ok = residual < tolerance if strict else residual <= tolerance
    return Check(name, residual, float(tolerance), bool(ok and math.isfinite(residual)), detail)


def _short(config: SimulationConfig, samples: int = 4096) -> SimulationConfig:
    """Copy limited to about ``samples`` samples, for the generation checks."""
    fs = config.effective_sample_rate
    duration = min(config.duration, samples / fs)
    return dataclasses.replace(config, duration=duration, sample_rate=fs)


def check_power_sum(config):
    s = simulate(_short(config))
    res = np.max(np.abs(s.powers.sum(axis=1) - 1.0))
    return _check("power_sum", res, 1e-12, "max |sum_n P_n - 1| over frames")


def check_determinism(config):
    cfg = _short(config)
    a, b = simulate(cfg), simulate(cfg)
    same = all(np.array_equal(getattr(a, f), getattr(b, f)) for f in ("times", "gains", "delays", "powers"))
    return _check("determinism", 0.0 if same else 1.0, 0.0, "identical seeds give bitwise-equal arrays")


def check_chunk_invariance(config):
    cfg = _short(config)
    whole = simulate(cfg)
    small = type(whole).concatenate(list(simulate_chunks(cfg, chunk=_kernels.ANCHOR)))
    res = np.max(np.abs(whole.gains - small.gains))
    return _check("chunk_invariance", res, 1e-12, "gains independent of the block size")


def check_recurrence(config):
    cfg = _short(config, 2048)
    s = simulate(cfg)
    rays = draw_rays(cfg)
    A, B, C, D = phase_coefficients(cfg, rays)
    t = s.times[:, None, None, None, None]
    phase = ((A[None, :, :, None, None] * t + B[None, :, :, None, None]) * t
             + C[None]) * t + D[None] + rays.phase[None, :, :, None, None]
    direct = np.exp(1j * phase).sum(axis=2) / math.sqrt(cfg.rays)
    res = np.max(np.abs(direct - s.gains))
    return _check("recurrence_accuracy", res, 1e-9, "phasor recurrence vs direct evaluation")


def check_unit_modulus(config):
    cfg = _short(dataclasses.replace(config, rays=1), 2048)
    s = simulate(cfg)
    res = np.max(np.abs(np.abs(s.gains) - 1.0))
    return _check("unit_modulus", res, 1e-9, "single-ray gain magnitude minus one")


def check_phase_continuity(config):
    rays = draw_rays(config)
    A, B, C, _ = phase_coefficients(config, rays)
    h = 1.0 / config.effective_sample_rate
    t = np.linspace(0.0, config.duration, 257)[:, None, None, None, None]
    rate = (3 * A[None, ..., None, None] * t + 2 * B[None, ..., None, None]) * t + C[None]
    res = np.max(np.abs(rate)) * h
    return _check("phase_continuity", res, math.pi, "largest per-sample phase step (rad)", strict=True)


def check_delays_positive(config):
    s = simulate(_short(config))
    return _check("delay_positive", -np.min(s.delays), 0.0, "negated minimum path delay (s)", strict=True)


def check_distance_linearization(config):
    t = np.linspace(0.0, min(0.5, config.duration), 51)
    worst = 0.0
    for pair in config.clusters:
        for cluster, term in zip(pair, (config.mt, config.mr)):
            exact = distance_exact(cluster, term.profile, t)
            lin = distance_linearized(cluster, term.profile, t)
            worst = max(worst, np.max(np.abs(lin - exact) / exact))
    return _check("distance_linearization", worst, 0.01, "relative error of the linearized distance")


def check_sccf(config):
    lam = config.wavelength
    worst = 0.0
    for n in range(config.paths):
        for dd in np.linspace(0.0, 3 * lam, 31):
            q = CorrelationQuery(spacing_mt=dd, spacing_mr=dd, path=n)
            worst = max(worst, abs(correlation_closed(config, q) - correlation_quadrature(config, q)))
    return _check("sccf_closed_vs_quadrature", worst, 1e-8, "max |closed - quadrature|, t = 0")


def check_tacf(config):
    worst = 0.0
    for t in (0.0, config.duration):
        for lag in TACF_LAGS:
            q = CorrelationQuery(t=t, lag=float(lag))
            worst = max(worst, abs(correlation_closed(config, q) - correlation_quadrature(config, q)))
    return _check("tacf_closed_vs_quadrature", worst, 1e-3, "max |closed - quadrature|, lag <= 20 ms")


def check_zero_lag(config):
    res = max(abs(correlation_closed(config, CorrelationQuery(t=t)) - 1.0)
              for t in (0.0, config.duration))
    return _check("tacf_zero_lag", res, 0.0, "|closed(lag=0) - 1|")


def check_bound(config):
    lam = config.wavelength
    vals = [abs(correlation_closed(config, CorrelationQuery(lag=float(lag)))) for lag in np.linspace(0, 0.1, 51)]
    vals += [abs(correlation_closed(config, CorrelationQuery(spacing_mt=d, spacing_mr=d)))
             for d in np.linspace(0, 3 * lam, 31)]
    return _check("correlation_bound", max(vals) - 1.0, 1e-9, "max |rho| - 1")


def check_mc(config, realizations=1000):
    ens = draw_ensemble(config, 0, realizations)
    worst = 0.0
    for lag in MC_LAGS:
        q = CorrelationQuery(lag=lag)
        est = stcf_mc(config, q, realizations, ensemble=ens)
        worst = max(worst, abs(est.value - correlation_closed(config, q)) / est.stderr)
    return _check("mc_vs_closed", worst, 3.0, f"max |mc - closed| / SE, {realizations} realizations")


def check_gain_power(config, realizations=10_000):
    ens = draw_ensemble(config, 0, realizations)
    h = np.exp(1j * ens.phase).sum(axis=1) / math.sqrt(config.rays)
    res = abs(np.mean(np.abs(h) ** 2) - 1.0)
    return _check("gain_power", res, 0.05, f"|E|h|^2 - 1| over {realizations} ray sets")


CHECKS: List[Callable[[SimulationConfig], Check]] = [
    check_power_sum, check_determinism, check_chunk_invariance, check_recurrence,
    check_unit_modulus, check_phase_continuity, check_delays_positive,
    check_distance_linearization, check_sccf, check_tacf, check_zero_lag, check_bound,
    check_mc, check_gain_power,
]


def run_suite(config: SimulationConfig) -> Dict:
    checks = [c(config) for c in CHECKS]
    return {"passed": all(c.passed for c in checks), "checks": [c.as_dict() for c in checks]}
