"""Independent references for determinant zeros.

* 1-D transfer matrices over piecewise-constant potentials: a solution that
  is outgoing on the left, psi = e^{-i lambda x}, is propagated through the
  pieces; lambda is a resonance (or i kappa a bound state) when it is also
  outgoing on the right, i.e. when f(lambda) = i lambda psi(b) - psi'(b)
  vanishes.  Each piece's matrix depends on k only through cos(kL),
  sin(kL)/k and k sin(kL), so f is entire and branch-free.
* 3-D s-wave matching for a spherical well: cos(k'a) - i lambda sin(k'a)/k'.
* Textbook square-well bound states (even/odd transcendental equations).
* Finite-difference Dirichlet-box eigenvalues of -u'' + V u.
"""
import numpy as np
from scipy.optimize import brentq

from .. import linalg
from ..errors import ResolutionError, ValidationError
from ..potential.core import SquareWell
from .contour import SearchRegion, locate_zeros


def _sinc_len(k, L):
    """sin(kL)/k, analytic through k = 0."""
    x = k * L
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, L * (1 - x * x / 6 + x ** 4 / 120), np.sin(safe) / safe * L)


def piece_matrix(lam, value, length):
    k = np.sqrt(complex(lam) ** 2 - value + 0j)
    c = np.cos(k * length)
    s = complex(_sinc_len(k, length))
    return np.array([[c, s], [-(k * k) * s, c]], dtype=complex)


def _normalize_pieces(pieces):
    """Sorted pieces with zero-valued gaps filled in."""
    pieces = sorted((float(a), float(b), float(v)) for a, b, v in pieces)
    out = []
    for a, b, v in pieces:
        if b <= a:
            raise ValidationError("each piece needs left < right")
        if out and a < out[-1][1] - 1e-15:
            raise ValidationError("pieces overlap")
        if out and a > out[-1][1]:
            out.append((out[-1][1], a, 0.0))
        out.append((a, b, v))
    return out


def pieces_of(V):
    if isinstance(V, SquareWell):
        if V.dimension != 1:
            raise ValidationError("transfer matrices are 1-D")
        return V.pieces()
    if isinstance(V, (list, tuple)):
        return list(V)
    raise ValidationError("transfer-matrix oracle needs a piecewise-constant potential")


def matching_function(pieces):
    """f(lambda) = i lambda psi(b) - psi'(b) for the left-outgoing solution."""
    pieces = _normalize_pieces(pieces)
    a0 = pieces[0][0]

    def f(lam):
        lam = complex(lam)
        state = np.array([np.exp(-1j * lam * a0), -1j * lam * np.exp(-1j * lam * a0)])
        for a, b, v in pieces:
            state = piece_matrix(lam, v, b - a) @ state
        return complex(1j * lam * state[0] - state[1])

    return f


def transfer_matrix_oracle_1d(V, region, tol=1e-10):
    """Resonance set of a piecewise-constant 1-D potential (SquareWell or a
    list of (left, right, value) pieces)."""
    from .finder import ResonanceSet
    pieces = [p for p in pieces_of(V) if p[2] != 0.0]
    if not pieces:
        return ResonanceSet([], region, tol)
    zeros = locate_zeros(matching_function(pieces), region, tol)
    return ResonanceSet([(z.lam, z.multiplicity) for z in zeros], region, tol)


def swave_matching(depth, a):
    """g(lambda) = cos(k'a) - i lambda sin(k'a)/k', k' = sqrt(lambda^2 - depth)."""
    def g(lam):
        lam = complex(lam)
        kp = np.sqrt(lam * lam - depth + 0j)
        return complex(np.cos(kp * a) - 1j * lam * _sinc_len(kp, a))
    return g


def swave_oracle_3d(depth, a, region, tol=1e-10):
    from .finder import ResonanceSet
    if depth == 0:
        return ResonanceSet([], region, tol, ell_max=0)
    zeros = locate_zeros(swave_matching(depth, a), region, tol)
    return ResonanceSet([(z.lam, z.multiplicity) for z in zeros], region, tol, ell_max=0)


def square_well_bound_states(depth, half_width):
    """kappa > 0 of the bound states E = -kappa^2 of a 1-D well (depth < 0),
    sorted by kappa descending (ground state first)."""
    if depth >= 0:
        return []
    a = half_width
    k0 = np.sqrt(-depth)
    kap = lambda k: np.sqrt(max(k0 * k0 - k * k, 0.0))
    out = []
    # even: k tan(ka) = kappa on branches ka in (n pi, n pi + pi/2)
    # odd: -k cot(ka) = kappa on branches ka in (n pi + pi/2, (n + 1) pi)
    eps = 1e-14
    n = 0
    while n * np.pi / 2 < k0 * a:
        lo = n * np.pi / 2 / a
        hi = min((n + 1) * np.pi / 2 / a, k0)
        if n % 2 == 0:
            g = lambda k: k * np.sin(k * a) - kap(k) * np.cos(k * a)
        else:
            g = lambda k: -k * np.cos(k * a) - kap(k) * np.sin(k * a)
        glo, ghi = g(lo + eps), g(hi - eps)
        if glo * ghi < 0:
            k = brentq(g, lo + eps, hi - eps, xtol=1e-15, rtol=1e-15, maxiter=200)
            out.append(kap(k))
        n += 1
    return sorted(out, reverse=True)


def dirichlet_box_eigenvalues(V, count=None, half_width=None, h=1e-3, richardson=True,
                              upper=0.0):
    """Eigenvalues below ``upper`` (at most ``count``) of -u'' + V u on [-L, L]
    with Dirichlet conditions (second-order differences, cell-averaged V),
    Richardson-extrapolated from spacings h and h/2.  L defaults to 8 R."""
    if V.dimension != 1:
        raise ValidationError("the Dirichlet box is 1-D")
    L = 8.0 * V.support_radius if half_width is None else float(half_width)

    def eig(hh):
        N = int(round(2 * L / hh))
        x = -L + hh * np.arange(1, N)
        d = 2.0 / hh ** 2 + _cell_average(V, x, hh)
        e = np.full(N - 2, -1.0 / hh ** 2)
        ev = linalg.tridiagonal_eigenvalues(d, e, hi=upper)
        return ev if count is None else ev[:count]

    e1 = eig(h)
    if not richardson:
        return e1
    e2 = eig(h / 2)
    if len(e1) != len(e2):
        raise ResolutionError("eigenvalue count changed under refinement; decrease h")
    return (4 * e2 - e1) / 3


def box_half_width(R, kappa, decay_lengths=25.0):
    """Dirichlet-box half-width that leaves a bound state e^{-kappa |x|} with
    relative energy error ~ e^{-2 decay_lengths}: max(8R, R + decay_lengths/kappa)."""
    return max(8.0 * R, R + decay_lengths / kappa)


def box_eigenvalue_near(V, kappa, h=1e-3):
    """The Dirichlet-box eigenvalue closest to -kappa^2 (box sized for kappa)."""
    ev = dirichlet_box_eigenvalues(V, half_width=box_half_width(V.support_radius, kappa), h=h)
    if len(ev) == 0:
        raise ResolutionError("no negative box eigenvalues")
    return float(ev[np.argmin(np.abs(ev + kappa * kappa))])


def _cell_average(V, x, h, sub=8):
    """Average of V over [x - h/2, x + h/2] (Gauss-Legendre, piece-aware for wells)."""
    from ..potential.core import evaluate
    if isinstance(V, SquareWell):
        lo = np.clip(x - h / 2, -V.half_width, V.half_width)
        hi = np.clip(x + h / 2, -V.half_width, V.half_width)
        return V.depth * (hi - lo) / h
    g, w = np.polynomial.legendre.leggauss(sub)
    pts = x[:, None] + 0.5 * h * g[None, :]
    return (np.asarray(evaluate(V, pts.ravel())).reshape(pts.shape) * w[None, :]).sum(axis=1) / 2


__all__ = ["SearchRegion", "matching_function", "transfer_matrix_oracle_1d", "swave_matching",
           "swave_oracle_3d", "square_well_bound_states", "dirichlet_box_eigenvalues",
           "box_half_width", "box_eigenvalue_near"]
