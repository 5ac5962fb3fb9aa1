"""Compiled inner loops for gain synthesis."""
import numpy as np
from numba import njit, prange

# samples between exact phasor re-evaluations of the recurrence
ANCHOR = 64


@njit(cache=True, parallel=True)
def sum_of_cubic_phasors(start, h, count, A, B, C, D, theta, out):
    """out[n, p, q, k] = M**-0.5 * sum_m exp(j * phase_nmpq((start + k) * h)).

    A, B, theta: (N, M); C, D: (N, M, P, Q); out: (N, P, Q, count).

    Consecutive samples are produced by a third-order difference recurrence
    (three complex products per sample) re-anchored with exact sin/cos every
    ``ANCHOR`` absolute samples, so results do not depend on how the time
    axis is split into calls as long as ``start`` is a multiple of ANCHOR.
    """
    N, M, P, Q = C.shape
    scale = 1.0 / np.sqrt(M)
    for flat in prange(N * P * Q):
        n = flat // (P * Q)
        p = (flat // Q) % P
        q = flat % Q
        acc = out[n, p, q]
        for k in range(count):
            acc[k] = 0.0
        for m in range(M):
            a = A[n, m]
            b = B[n, m]
            c = C[n, m, p, q]
            d = D[n, m, p, q] + theta[n, m]
            k0 = 0
            while k0 < count:
                ta = (start + k0) * h
                f0 = ((a * ta + b) * ta + c) * ta + d
                c3 = a * h * h * h
                c2 = (3.0 * a * ta + b) * h * h
                c1 = ((3.0 * a * ta + 2.0 * b) * ta + c) * h
                d1 = c3 + c2 + c1
                d2 = 6.0 * c3 + 2.0 * c2
                d3 = 6.0 * c3
                z = complex(np.cos(f0), np.sin(f0))
                w = complex(np.cos(d1), np.sin(d1))
                u = complex(np.cos(d2), np.sin(d2))
                s = complex(np.cos(d3), np.sin(d3))
                stop = min(count, k0 + ANCHOR - (start + k0) % ANCHOR)
                for k in range(k0, stop):
                    acc[k] += z
                    z *= w
                    w *= u
                    u *= s
                k0 = stop
        for k in range(count):
            acc[k] *= scale


@njit(cache=True)
def clamped_ar1(initial, mean, rho, scale, noise):
    """x_k = max(rho*x_{k-1} + (1-rho)*mean + scale*sqrt(1-rho^2)*e_k, 0)."""
    out = np.empty(noise.shape[0])
    x = initial
    b = (1.0 - rho) * mean
    g = scale * np.sqrt(1.0 - rho * rho)
    for k in range(noise.shape[0]):
        x = rho * x + b + g * noise[k]
        if x < 0.0:
            x = 0.0
        out[k] = x
    return out
