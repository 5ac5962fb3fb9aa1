import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from v2vsim.errors import DegeneratePowerError, DomainError, HorizonError
from v2vsim.geometry import ClusterGeometry, VelocityProfile
from v2vsim.params import (PathState, PowerDelayParams, delay_at, geometric_delay, path_powers,
                           step_virtual_delay, virtual_delay_track)
from v2vsim.phase import SPEED_OF_LIGHT

PD = PowerDelayParams()


@given(arrays(float, st.integers(1, 12), elements=st.floats(0, 2e-6)),
       st.floats(-10, 10))
def test_powers_normalized(delays, z):
    p = path_powers(delays, PD, np.full(delays.shape, z))
    assert abs(p.sum() - 1) <= 1e-12
    assert np.all(p >= 0)


def test_powers_formula():
    tau = np.array([100e-9, 250e-9, 400e-9])
    z = np.array([1.0, -2.0, 0.5])
    raw = np.exp(-tau * (PD.r_tau - 1) / (PD.r_tau * PD.sigma_tau)) * 10 ** (-z / 10)
    np.testing.assert_allclose(path_powers(tau, PD, z), raw / raw.sum(), rtol=1e-13)


def test_powers_monotone_in_delay():
    p = path_powers(np.array([1e-7, 2e-7, 3e-7]), PD, np.zeros(3))
    assert p[0] > p[1] > p[2]


def test_powers_survive_huge_delays():
    # the naive exponentials all underflow to zero here
    p = path_powers(np.array([1e-3, 1.00001e-3]), PD, np.zeros(2))
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DegeneratePowerError):
        path_powers(np.array([math.inf, 1e-7]), PD, np.zeros(2))


def test_param_validation():
    with pytest.raises(DomainError):
        PowerDelayParams(r_tau=1.0)
    with pytest.raises(DomainError):
        PowerDelayParams(sigma_tau=0.0)
    with pytest.raises(DomainError):
        PowerDelayParams(virtual_delay=-1e-9)
    assert PowerDelayParams(virtual_delay=3e-8).virtual_delay == (3e-8,)


def test_delay_is_legs_over_c():
    cm = ClusterGeometry(50.0, math.pi / 4)
    cr = ClusterGeometry(60.0, 3 * math.pi / 4)
    pm, pr = VelocityProfile(10.0), VelocityProfile(10.0, 0, math.pi)
    t = 0.5
    legs = (50 - 10 * math.cos(math.pi / 4) * t) + (60 - 10 * math.cos(3 * math.pi / 4 - math.pi) * t)
    assert geometric_delay(cm, cr, pm, pr, t) == pytest.approx(legs / SPEED_OF_LIGHT, rel=1e-14)
    assert delay_at(cm, cr, pm, pr, t, 2e-8) == pytest.approx(legs / SPEED_OF_LIGHT + 2e-8)


def test_delay_beyond_validity():
    c = ClusterGeometry(10.0, 0.0)
    p = VelocityProfile(10.0)
    with pytest.raises(HorizonError):
        delay_at(c, c, p, p, 2.0)


def test_virtual_delay_step_formula_and_clamp():
    pd = PowerDelayParams(virtual_delay=(1e-8,), coherence_time=2.0, innovation_std=4e-9)
    s = PathState(tau=0.0, power=0.0, tau_virtual=1.2e-8)
    rho = math.exp(-0.1 / 2.0)
    new = step_virtual_delay(s, pd, 0.1, 0.5)
    assert new == pytest.approx(rho * 1.2e-8 + (1 - rho) * 1e-8 + 4e-9 * math.sqrt(1 - rho**2) * 0.5)
    assert s.tau_virtual == new
    assert step_virtual_delay(s, pd, 0.1, -1e3) == 0.0


def test_zero_coherence_time_is_white():
    pd = PowerDelayParams(virtual_delay=(5e-8,), coherence_time=0.0, innovation_std=1e-9)
    s = PathState(0.0, 0.0, 1.0)
    assert step_virtual_delay(s, pd, 0.01, 0.0) == pytest.approx(5e-8)


def test_track_matches_stepwise_recursion():
    pd = PowerDelayParams(virtual_delay=(3e-8,), coherence_time=1.0, innovation_std=2e-8)
    noise = np.random.default_rng(0).standard_normal(500)
    dt = 0.05
    s = PathState(0.0, 0.0, 3e-8)
    ref = [step_virtual_delay(s, pd, dt, e) for e in noise]
    out = virtual_delay_track(3e-8, 3e-8, pd.filter_coefficient(dt), pd.innovation_std, noise)
    np.testing.assert_allclose(out, ref, rtol=1e-14, atol=0)


def test_track_stationary_moments():
    rho = math.exp(-0.01)
    noise = np.random.default_rng(1).standard_normal(400_000)
    out = virtual_delay_track(1e-6, 1e-6, rho, 5e-9, noise)
    assert np.mean(out) == pytest.approx(1e-6, abs=1e-10 * 10)
    assert np.std(out) == pytest.approx(5e-9, rel=0.05)
