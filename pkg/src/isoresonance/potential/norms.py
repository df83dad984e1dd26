"""Derivatives, L^p and Sobolev norms, and the Frechet metric.

All integrals are Gauss-Legendre on the pieces between ``V.breakpoints()``
with node doubling until successive values agree to ``rtol``.  Sampled
potentials use the trapezoid rule / Parseval on their grid, which is
spectrally accurate for smooth compactly supported data.

Radial (d = 3) Sobolev norms use u(r) = r f(r):
    ||(-Laplacian)^{m/2} f||^2 = 4 pi int_0^R (u^(m))^2 dr,
    ||D^alpha f||^2 = <omega^{2 alpha}>_{S^2} ||(-Laplacian)^{|alpha|/2} f||^2,
with the sphere average <omega^{2 alpha}> = (2a-1)!!(2b-1)!!(2c-1)!!/(2m+1)!!.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq, minimize_scalar

from .. import quadrature
from ..errors import NonSmoothPotentialError, ResolutionError, ValidationError
from .core import BumpSum, GridSampled, SquareWell, evaluate, sample, scale

DEFAULT_MAX_ORDER = 24
DEFAULT_RTOL = 1e-10


def _order(V, multi_index):
    alpha = np.atleast_1d(np.asarray(multi_index, dtype=int))
    if alpha.shape != (V.dimension,) and not (V.dimension == 1 and alpha.size == 1):
        raise ValidationError(f"multi-index {multi_index!r} does not match dimension {V.dimension}")
    if np.any(alpha < 0):
        raise ValidationError("multi-index entries must be non-negative")
    return tuple(int(a) for a in alpha)


def _double_factorial(n):
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def sphere_moment(alpha):
    """<omega^{2 alpha}> over the unit sphere S^2, as an exact fraction."""
    m = sum(alpha)
    num = 1
    for a in alpha:
        num *= _double_factorial(2 * a - 1)
    return Fraction(num, _double_factorial(2 * m + 1))


@lru_cache(maxsize=None)
def sphere_moment_sum(m):
    """Sum of <omega^{2 alpha}> over |alpha| = m in N^3."""
    return sum((sphere_moment(a) for a in multi_indices(3, m)), Fraction(0))


@lru_cache(maxsize=None)
def multi_indices(d, m):
    """Multi-indices of order m in N^d, lexicographically descending."""
    out = [a for a in itertools.product(range(m, -1, -1), repeat=d) if sum(a) == m]
    return tuple(out)


def _require_smooth(V):
    if isinstance(V, SquareWell) and not V.is_zero:
        raise NonSmoothPotentialError("derivative of a non-smooth kind (SquareWell)")


# --- grid (spectral) helpers ------------------------------------------------

def _grid_derivative_spectrum(V, order, odd_radial=False):
    """Padded periodic samples' spectrum times (ik)^order, with a resolution check."""
    F, k, offset = V.periodic_spectrum()
    if odd_radial:
        # u = r f: odd extension built from the line samples
        line = V.line_samples()
        N2 = len(line) - 1
        x = V.grid_spacing * (np.arange(N2 + 1) - N2 // 2)
        per = np.zeros(len(F))
        per[offset:offset + N2 + 1] = x * line
        F = np.fft.fft(per)
    D = F * (1j * k) ** order
    if order > 0:
        energy = np.abs(D) ** 2
        total = energy.sum()
        tail = energy[np.abs(k) > (2.0 / 3.0) * np.max(np.abs(k))].sum()
        if total > 0 and np.sqrt(tail / total) > 1e-6:
            raise ResolutionError(
                f"derivative of order {order} is Nyquist-limited on this grid; refine the grid")
    return D, k, offset


def _grid_l2_sq(V, order, odd_radial=False):
    D, k, _ = _grid_derivative_spectrum(V, order, odd_radial)
    M = len(D)
    return float(V.grid_spacing * np.sum(np.abs(D) ** 2) / M)


# --- public operations --------------------------------------------------------

def derivative(V, multi_index, grid_spacing=None, max_order=DEFAULT_MAX_ORDER):
    """D^alpha V sampled on a uniform grid (a ``GridSampled`` potential).

    Bump sums are differentiated exactly and then sampled (default spacing
    R/256); sampled potentials use Fourier differentiation on the zero-padded
    periodic extension over [-2R, 2R].  In d = 3 only alpha = 0 is available
    because derivatives of radial functions are not radial.
    """
    alpha = _order(V, multi_index)
    n = sum(alpha)
    _require_smooth(V)
    if n > max_order:
        raise ValidationError(f"derivative order {n} exceeds the configured maximum {max_order}")
    if isinstance(V, GridSampled):
        h = V.grid_spacing
    else:
        h = grid_spacing if grid_spacing is not None else V.support_radius / 256
    if n == 0:
        return V if isinstance(V, GridSampled) else sample(V, h)
    if V.dimension == 3:
        raise ValidationError("non-zero derivatives of radial potentials are not radial")
    if isinstance(V, GridSampled):
        D, k, offset = _grid_derivative_spectrum(V, n)
        vals = np.fft.ifft(D).real[offset:offset + len(V.samples)]
        return GridSampled(V.support_radius, 1, h, tuple(vals))
    span = 2 * V.support_radius
    x = -V.support_radius + h * np.arange(int(round(span / h)) + 1)
    vals = np.zeros_like(x) if V.is_zero else V.profile(x, n)
    return GridSampled(V.support_radius, 1, h, tuple(vals))


def _weight(V):
    if V.dimension == 3:
        return lambda r: 4.0 * np.pi * r * r
    return lambda x: 1.0


def integrate(V, func, rtol=DEFAULT_RTOL, breakpoints=None):
    """int func(x) dx over the support pieces of V (radial weight in d = 3)."""
    w = _weight(V)
    bps = V.breakpoints() if breakpoints is None else breakpoints
    return quadrature.integrate(lambda x: func(x) * w(x), bps, rtol=rtol)


def sign_changes(V, samples=4001):
    """Breakpoints of V refined by its sign changes (the kinks of |V|)."""
    bps = list(V.breakpoints())
    x = np.linspace(bps[0], bps[-1], samples)
    f = V.profile(x)
    for i in np.nonzero(f[:-1] * f[1:] < 0)[0]:
        bps.append(brentq(lambda t: float(V.profile(np.array([t]))[0]), x[i], x[i + 1], xtol=1e-15, rtol=1e-15))
    return tuple(sorted(set(bps)))


def sup_norm(V):
    if V.is_zero:
        return 0.0
    if isinstance(V, SquareWell):
        return abs(V.depth)
    lo = 0.0 if V.dimension == 3 else -V.support_radius
    x = np.linspace(lo, V.support_radius, 4001)
    vals = np.abs(evaluate(V, x))
    best = float(vals.max())
    i = int(vals.argmax())
    a, b = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
    res = minimize_scalar(lambda t: -abs(evaluate(V, t)), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    return max(best, float(-res.fun))


def lp_norm(V, p, rtol=DEFAULT_RTOL):
    """||V||_p over R^d (radial weight 4 pi r^2 in d = 3)."""
    p = float(p)
    if p < 1:
        raise ValidationError("p must be >= 1")
    if np.isinf(p):
        return sup_norm(V)
    if V.is_zero:
        return 0.0
    if isinstance(V, SquareWell):
        a = V.half_width
        vol = 2 * a if V.dimension == 1 else 4.0 * np.pi * a ** 3 / 3.0
        return abs(V.depth) * vol ** (1.0 / p)
    if isinstance(V, GridSampled):
        x = V.grid
        vals = np.abs(V.samples) ** p * (4 * np.pi * x * x if V.dimension == 3 else 1.0)
        return float(trapezoid(vals, dx=V.grid_spacing)) ** (1.0 / p)
    # |V|^p is only finitely smooth where V changes sign unless p is even
    bps = V.breakpoints() if p % 2 == 0 else sign_changes(V)
    return integrate(V, lambda x: np.abs(V.profile(x)) ** p, rtol, bps) ** (1.0 / p)


def _radial_u_derivs(V, r, order):
    """u^(m)(r) for u = r f(r), m = 0..order."""
    f = V.profile_all(r, order)
    u = r * f
    u[1:] += np.arange(1, order + 1).reshape(-1, *([1] * r.ndim)) * f[:-1]
    return u


def _order_l2_sq(V, orders, rtol=DEFAULT_RTOL):
    """Dict m -> ||(-Laplacian)^{m/2} V||^2 (equals ||V^(m)||^2 in d = 1)."""
    orders = sorted(set(orders))
    if V.is_zero:
        return {m: 0.0 for m in orders}
    _require_smooth(V)
    if isinstance(V, GridSampled):
        odd = V.dimension == 3
        factor = 2 * np.pi if odd else 1.0  # 4 pi int_0^R = 2 pi int_{-R}^{R}
        return {m: factor * _grid_l2_sq(V, m, odd) for m in orders}
    out = {}
    bps = V.breakpoints()
    for m in orders:
        if V.dimension == 1:
            f = lambda x, m=m: V.profile_all(x, m)[m] ** 2
        else:
            f = lambda r, m=m: 4.0 * np.pi * _radial_u_derivs(V, r, m)[m] ** 2
        out[m] = quadrature.integrate(f, bps, rtol=rtol)
    return out


def derivative_norm(V, multi_index, rtol=DEFAULT_RTOL):
    """||D^alpha V||_2."""
    alpha = _order(V, multi_index)
    m = sum(alpha)
    val = _order_l2_sq(V, [m], rtol)[m]
    if V.dimension == 3:
        val *= float(sphere_moment(alpha))
    return float(np.sqrt(max(val, 0.0)))


def sobolev_norm(V, s, rtol=DEFAULT_RTOL):
    """(sum_{|alpha| <= s} ||D^alpha V||_2^2)^{1/2}."""
    s = int(s)
    if s < 0:
        raise ValidationError("Sobolev order must be >= 0")
    if s == 0:
        return lp_norm(V, 2, rtol)
    sq = _order_l2_sq(V, range(s + 1), rtol)
    if V.dimension == 3:
        total = sum(float(sphere_moment_sum(m)) * sq[m] for m in sq)
    else:
        total = sum(sq.values())
    return float(np.sqrt(max(total, 0.0)))


@dataclass(frozen=True)
class FrechetIndexing:
    """Graded lexicographic enumeration i -> alpha(i), i = 1, 2, ... of N^d."""
    dimension: int = 1
    i_max: int = 24

    def multi_index(self, i):
        if i < 1:
            raise ValidationError("Frechet indices start at 1")
        m, count = 0, 0
        while True:
            layer = multi_indices(self.dimension, m)
            if i <= count + len(layer):
                return layer[i - count - 1]
            count += len(layer)
            m += 1

    def indices(self):
        return [self.multi_index(i) for i in range(1, self.i_max + 1)]

    @property
    def tail_bound(self):
        return 2.0 ** (-self.i_max)


def difference(V, W):
    """V - W as a potential of a kind the norm routines accept."""
    if V.dimension != W.dimension:
        raise ValidationError("potentials have different dimensions")
    if isinstance(V, BumpSum) and isinstance(W, BumpSum):
        return V - W
    grids = [P for P in (V, W) if isinstance(P, GridSampled)]
    if grids:
        g = grids[0]
        Vs = V if isinstance(V, GridSampled) else sample(V, g.grid_spacing)
        Ws = W if isinstance(W, GridSampled) else sample(W, g.grid_spacing)
        if len(Vs.samples) != len(Ws.samples) or Vs.support_radius != Ws.support_radius:
            raise ValidationError("sampled potentials live on different grids")
        return GridSampled(Vs.support_radius, Vs.dimension, Vs.grid_spacing,
                           tuple(np.asarray(Vs.samples) - np.asarray(Ws.samples)))
    if isinstance(V, SquareWell) and isinstance(W, SquareWell) and V == W:
        return scale(V, 0.0)
    raise NonSmoothPotentialError("Frechet metric needs smooth potentials")


def frechet_metric(V, W, idx=None, rtol=1e-9):
    """sum_{i <= i_max} 2^{-i} n_i / (1 + n_i), n_i = ||D^{alpha(i)} (V - W)||_2.

    The neglected tail is below ``idx.tail_bound`` = 2^{-i_max}.
    """
    idx = idx or FrechetIndexing(V.dimension)
    if idx.dimension != V.dimension:
        raise ValidationError("indexing dimension does not match the potentials")
    if V is W:
        return 0.0
    diff = difference(V, W)
    if diff.is_zero:
        return 0.0
    alphas = idx.indices()
    orders = sorted({sum(a) for a in alphas})
    sq = _order_l2_sq(diff, orders, rtol)
    total = 0.0
    for i, a in enumerate(alphas, start=1):
        v = sq[sum(a)]
        if V.dimension == 3:
            v *= float(sphere_moment(a))
        n = np.sqrt(max(v, 0.0))
        total += 2.0 ** (-i) * n / (1.0 + n)
    return float(total)
