import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from v2vsim.errors import DegenerateGeometryError, DomainError, HorizonError
from v2vsim.geometry import (AntennaArray, ClusterGeometry, VelocityProfile, angle_diff,
                             bearing_rate, distance_exact, distance_linearized, mean_angle_at,
                             position_at, state_at, wrap_angle)

finite = st.floats(-1e4, 1e4, allow_nan=False)


@given(finite)
def test_wrap_angle_range_and_congruence(x):
    w = wrap_angle(x)
    assert -math.pi < w <= math.pi
    k = (x - w) / (2 * math.pi)
    assert abs(k - round(k)) < 1e-9


def test_wrap_angle_boundaries():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(0.0) == 0.0
    assert angle_diff(0.1, 2 * math.pi) == pytest.approx(0.1)


def test_negative_speed_rejected():
    with pytest.raises(DomainError, match="v0 ≥ 0"):
        VelocityProfile(speed=-3.0)


def test_nonfinite_rejected():
    with pytest.raises(DomainError):
        VelocityProfile(speed=math.inf)
    with pytest.raises(DomainError):
        ClusterGeometry(0.0, 1.0)


def test_horizon_check():
    p = VelocityProfile(speed=10, acceleration=-2)
    assert p.stop_time() == 5.0
    p.check_horizon(5.0)
    with pytest.raises(DomainError):
        p.check_horizon(5.5)
    with pytest.raises(DomainError):
        position_at(p, 6.0)
    with pytest.raises(HorizonError):
        position_at(VelocityProfile(1.0), 2.0, horizon=1.0)


def test_straight_line_motion():
    p = VelocityProfile(speed=10, acceleration=2, heading=math.pi / 3)
    t = 1.5
    s = 10 * t + t * t
    np.testing.assert_allclose(position_at(p, t), [s * 0.5, s * math.sqrt(3) / 2], rtol=1e-14)


def _quad_position(p, t):
    v = lambda s: p.speed + p.acceleration * s
    h = lambda s: p.heading + p.turn_rate * s
    x = quad(lambda s: v(s) * math.cos(h(s)), 0, t, epsabs=1e-12, epsrel=1e-13)[0]
    y = quad(lambda s: v(s) * math.sin(h(s)), 0, t, epsabs=1e-12, epsrel=1e-13)[0]
    return np.array([x, y])


@given(
    v0=st.floats(0, 40),
    a0=st.floats(0, 3),
    heading=st.floats(-math.pi, math.pi),
    b0=st.floats(-1.5, 1.5),
    t=st.floats(0, 6),
)
def test_position_matches_numerical_integration(v0, a0, heading, b0, t):
    p = VelocityProfile(v0, a0, heading, b0)
    np.testing.assert_allclose(position_at(p, t), _quad_position(p, t), atol=1e-8 * (1 + v0 * t + a0 * t * t))


@pytest.mark.parametrize("b0", [1e-13, 1e-6, 0.2])
def test_position_continuous_across_series_switch(b0):
    # |b0 t| = 0.5 is where the evaluation switches branch
    p = VelocityProfile(10, 1, 0.3, b0)
    t_switch = 0.5 / b0
    if t_switch > 1e6:
        t_switch = 1.0
    ts = np.array([t_switch * (1 - 1e-9), t_switch * (1 + 1e-9)])
    a, b = position_at(p, ts)
    assert np.linalg.norm(a - b) < 1e-6 * (1 + np.linalg.norm(a))


def test_position_vectorized_shape():
    p = VelocityProfile(5, 0, 0, 0.1)
    assert position_at(p, np.zeros((3, 4))).shape == (3, 4, 2)
    assert position_at(p, 0.0).shape == (2,)


def test_initial_geometry_recovered():
    c = ClusterGeometry(50.0, 2.0)
    p = VelocityProfile(10, 1, 0.5, 0.2)
    assert distance_exact(c, p, 0.0) == pytest.approx(50.0, rel=1e-15)
    assert mean_angle_at(c, p, 0.0) == pytest.approx(2.0, abs=1e-15)
    assert distance_linearized(c, p, 0.0) == 50.0


def test_terminal_at_cluster_is_degenerate():
    c = ClusterGeometry(10.0, 0.0)
    p = VelocityProfile(10.0)
    with pytest.raises(DegenerateGeometryError):
        mean_angle_at(c, p, 1.0)


@given(
    v0=st.floats(0.5, 30),
    ang=st.floats(-math.pi, math.pi),
    d=st.floats(20, 200),
)
def test_linearized_distance_is_first_order(v0, ang, d):
    c = ClusterGeometry(d, ang)
    p = VelocityProfile(v0, 0, 0.4, 0)
    t = 0.05
    err = abs(distance_exact(c, p, t) - distance_linearized(c, p, t))
    # second-order remainder of the law of cosines
    assert err <= (v0 * t) ** 2 / (2 * (d - v0 * t)) + 1e-9


def test_bearing_rate_matches_finite_difference():
    c = ClusterGeometry(50.0, math.pi / 4)
    p = VelocityProfile(10, 0, 0, 0)
    h = 1e-6
    fd = (mean_angle_at(c, p, h) - mean_angle_at(c, p, 0.0)) / h
    assert fd == pytest.approx(bearing_rate(c, p), rel=1e-4)


def test_state_at_rebases_profile_and_cluster():
    c = ClusterGeometry(50.0, math.pi / 4)
    p = VelocityProfile(10, 2, 0.1, 0.2)
    prof, clus = state_at(c, p, 1.0)
    assert prof.speed == 12.0
    assert prof.heading == pytest.approx(0.3)
    target = c.position - position_at(p, 1.0)
    np.testing.assert_allclose(clus.position, target, atol=1e-12)


def test_linear_array():
    arr = AntennaArray.linear_y(3, 0.05)
    assert arr.count == 3
    assert arr.on_y_axis
    np.testing.assert_array_equal(arr.positions[:, 1], [0.0, 0.05, 0.1])
    with pytest.raises(DomainError):
        AntennaArray(())
