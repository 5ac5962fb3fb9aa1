r"""Zeroth-order modified Bessel function of the first kind for complex argument.

.. math::
    I_0(z) = \sum_{k \ge 0} \frac{(z^2/4)^k}{(k!)^2}

The power series is used for :math:`|z| \le 12`. Above that the Hankel
asymptotic expansion is used in the right half plane, keeping both the
growing and the decaying exponential so that the result stays accurate
near the imaginary axis, where :math:`I_0(jx) = J_0(x)` oscillates.
:math:`I_0` is even, so the left half plane is reflected.
"""
import cmath
import math

import numpy as np

from .errors import BesselRangeError

SERIES_RADIUS = 12.0
OVERFLOW_GUARD = 700.0
_SERIES_TERMS = 64
# optimal truncation of the asymptotic series sits near k = 2|z| >= 24
_ASYMPTOTIC_TERMS = 24


def _asymptotic_coefficients(terms):
    a = [1.0]
    for k in range(1, terms):
        a.append(a[-1] * (2 * k - 1) ** 2 / (8 * k))
    return np.array(a)


_A = _asymptotic_coefficients(_ASYMPTOTIC_TERMS)


def _series(z):
    w = z * z / 4
    total = np.ones_like(z)
    term = np.ones_like(z)
    for k in range(1, _SERIES_TERMS):
        term = term * w / (k * k)
        total = total + term
    return total


def _asymptotic(z):
    z = np.where(z.real < 0, -z, z)
    inv = 1.0 / z
    s_grow = np.zeros_like(z)
    s_decay = np.zeros_like(z)
    power = np.ones_like(z)
    for k, a in enumerate(_A):
        s_grow = s_grow + a * power
        s_decay = s_decay + (-1) ** k * a * power
        power = power * inv
    root = np.sqrt(2 * math.pi * z)
    sign = np.where(z.imag >= 0, 1.0, -1.0)
    return (np.exp(z) * s_grow + sign * 1j * np.exp(-z) * s_decay) / root


def bessel_i0_complex(z):
    """I0 of a complex scalar or array; raises BesselRangeError for |z| >= 700."""
    arr = np.asarray(z, dtype=complex)
    mag = np.abs(arr)
    if np.any(mag >= OVERFLOW_GUARD) or not np.all(np.isfinite(arr)):
        raise BesselRangeError(f"|z| must be < {OVERFLOW_GUARD} for I0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= SERIES_RADIUS
    if np.any(small):
        out[small] = _series(flat[small])
    if not np.all(small):
        out[~small] = _asymptotic(flat[~small])
    out = out.reshape(arr.shape)
    return complex(out) if out.ndim == 0 else out


def i0_sqrt(w2):
    """I0 of the principal square root of ``w2``."""
    if np.ndim(w2) == 0:
        return bessel_i0_complex(cmath.sqrt(complex(w2)))
    return bessel_i0_complex(np.sqrt(np.asarray(w2, dtype=complex)))
