"""Spherical Bessel j_l and Hankel h_l^(1) for complex arguments, l = 0..L.

j_l: Miller's downward recurrence normalised by j_0 or j_1 (whichever is
larger), power series for |z| < 0.5.  h_l^(1): upward recurrence from
h_0 = -i e^{iz}/z, h_1 = -e^{iz}(z + i)/z^2, which is the stable direction
for the dominant solution.
"""
import numpy as np

from .errors import ConvergenceError

SERIES_RADIUS = 0.5


def _series_j(L, z):
    out = np.empty((L + 1,) + z.shape, dtype=complex)
    z2 = -0.5 * z * z
    for ell in range(L + 1):
        term = np.ones_like(z)
        total = np.ones_like(z)
        for k in range(1, 30):
            term = term * z2 / (k * (2 * ell + 2 * k + 1))
            total = total + term
            if np.all(np.abs(term) < 1e-17 * np.abs(total)):
                break
        dfact = 1.0
        for i in range(1, 2 * ell + 2, 2):
            dfact *= i
        out[ell] = z ** ell / dfact * total
    return out


def _miller_j(L, z):
    N = int(L + 20 + np.max(np.abs(z)) * 1.5) + 10
    f_next = np.zeros_like(z)
    f = np.full_like(z, 1e-30)
    vals = np.empty((N + 1,) + z.shape, dtype=complex)
    vals[N] = f
    for ell in range(N, 0, -1):
        f_prev = (2 * ell + 1) / z * f - f_next
        f_next, f = f, f_prev
        vals[ell - 1] = f
        big = np.abs(f) > 1e250
        if big.any():
            scale = np.where(big, 1e-250, 1.0)
            vals[ell - 1:] *= scale
            f = f * scale
            f_next = f_next * scale
    j0 = np.sin(z) / z
    j1 = np.sin(z) / z ** 2 - np.cos(z) / z
    use0 = np.abs(j0) >= np.abs(j1)
    norm = np.where(use0, j0 / vals[0], j1 / vals[1])
    out = vals[:L + 1] * norm
    out[0] = j0
    if L >= 1:
        out[1] = j1
    return out


def spherical_jn_all(L, z):
    """Array (L + 1, *z.shape) of j_l(z)."""
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    out = np.empty((L + 1, z.size), dtype=complex)
    small = np.abs(z) < SERIES_RADIUS
    if small.any():
        out[:, small] = _series_j(L, z[small])
    if (~small).any():
        out[:, ~small] = _miller_j(L, z[~small])
    if not np.all(np.isfinite(out)):
        raise ConvergenceError("spherical Bessel recurrence overflowed")
    return out.reshape((L + 1,) + shape)


def spherical_h1_all(L, z):
    """Array (L + 1, *z.shape) of h_l^(1)(z) = j_l + i y_l; z must be non-zero."""
    z = np.asarray(z, dtype=complex)
    e = np.exp(1j * z)
    out = np.empty((L + 1,) + z.shape, dtype=complex)
    out[0] = -1j * e / z
    if L >= 1:
        out[1] = -e * (z + 1j) / z ** 2
    for ell in range(1, L):
        out[ell + 1] = (2 * ell + 1) / z * out[ell] - out[ell - 1]
    if not np.all(np.isfinite(out)):
        raise ConvergenceError("spherical Hankel recurrence overflowed; reduce ell or |lambda|")
    return out
