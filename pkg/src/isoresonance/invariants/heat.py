"""Heat invariants: closed forms, the symbolic density, and a numerical
heat-trace oracle with a small-t fit.

Normalizations.  ``heat_invariant_closed`` returns the integrals

    c1 = int V,   c2 = int V^2,   c3 = int (V^3 + |grad V|^2 / 2).

The coefficients of the regularized heat trace

    Tr(e^{-tH_V} - e^{-tH_0}) ~ (4 pi t)^{-d/2} sum_j gamma_j t^j

are gamma_j = kappa_j c_j with kappa_j = (-1)^j / j!.  The symbolic density
produces gamma_j directly (its int V^j coefficient is exactly kappa_j);
``heat_invariant_symbolic`` divides by kappa_j so both functions share the
closed-form normalization.  The heat-trace fit measures kappa_j
independently (``calibrate``).
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .. import linalg
from ..errors import NonSmoothPotentialError, ResolutionError, ValidationError
from ..potential.core import SquareWell, evaluate, values
from ..potential.norms import integrate
from . import symbolic

TRACE_STEPS = (2e-3, 1e-3)
CUTOFF = 36.0          # eigenvalues above CUTOFF / t contribute < e^-36


def kappa_exact(j):
    """(-1)^j / j!: heat-trace coefficient of int V^j."""
    return Fraction((-1) ** j, factorial(j))


def heat_invariant_closed(j, V, rtol=1e-12):
    """c_1, c_2, c_3 in closed form (radial weight 4 pi r^2 in d = 3)."""
    if j not in (1, 2, 3):
        raise ValidationError("closed forms exist for j = 1, 2, 3")
    if V.is_zero:
        return 0.0
    if isinstance(V, SquareWell):
        if j == 3:
            raise NonSmoothPotentialError("c_3 needs a differentiable potential")
        a = V.half_width
        vol = 2 * a if V.dimension == 1 else 4.0 * np.pi * a ** 3 / 3.0
        return float(V.depth ** j * vol)
    if j == 1:
        return float(integrate(V, lambda x: evaluate(V, x), rtol))
    if j == 2:
        return float(integrate(V, lambda x: evaluate(V, x) ** 2, rtol))
    return float(integrate(V, lambda x: evaluate(V, x) ** 3 + 0.5 * values(V, x, 1) ** 2, rtol))


def heat_invariant_symbolic(j, V, rtol=1e-12, max_j=symbolic.DEFAULT_MAX_J, calibrated=True):
    """int c_j(x) dx from the symbolic density (d = 1); divided by kappa_j
    when ``calibrated`` so that it is directly comparable with the closed forms."""
    if V.dimension != 1:
        raise ValidationError("the symbolic engine is one-dimensional")
    if not (1 <= j <= max_j):
        raise ValidationError(f"j must lie in [1, {max_j}]")
    reduced = symbolic.reduce_integral(symbolic.density(j))
    if V.is_zero:
        return 0.0
    if not V.smooth and any(max(k) > 0 for k in reduced):
        raise NonSmoothPotentialError("the density involves derivatives of V")
    val = integrate(V, lambda x: symbolic.evaluate_monomials(reduced, V, x), rtol)
    return float(val / float(kappa_exact(j)) if calibrated else val)


# ---------------------------------------------------------------- heat trace

def _box(V, t_max):
    R = V.support_radius
    return max(8.0 * R, R + 10.0 * np.sqrt(t_max))


def _cell_values(V, x, h, sub=6):
    g, w = np.polynomial.legendre.leggauss(sub)
    pts = x[:, None] + 0.5 * h * g[None, :]
    return (evaluate(V, pts.ravel()).reshape(pts.shape) * w).sum(axis=1) / 2


def _free_spectrum(N, h):
    """Exact eigenvalues of the Dirichlet second-difference matrix."""
    k = np.arange(1, N + 1)
    return 4.0 / h ** 2 * np.sin(k * np.pi / (2 * (N + 1))) ** 2


def _trace_on_grid(V, ts, L, h, threads):
    N = int(round(2 * L / h)) - 1
    x = -L + h * np.arange(1, N + 1)
    d = 2.0 / h ** 2 + _cell_values(V, x, h)
    e = np.full(N - 1, -1.0 / h ** 2)
    top = CUTOFF / min(ts)
    mu = linalg.tridiagonal_eigenvalues(d, e, hi=top, threads=threads)
    nu = _free_spectrum(N, h)
    nu = nu[nu < top + 4 * abs(np.min(d) - 2.0 / h ** 2) + 1.0]
    return np.array([np.exp(-t * mu).sum() - np.exp(-t * nu).sum() for t in ts])


def heat_trace_oracle(V, t, steps=TRACE_STEPS, threads=1, check=True):
    """Tr(e^{-tH_V} - e^{-tH_0}) for d = 1 on a Dirichlet box (second-order
    differences, Richardson-extrapolated in h).  ``t`` may be a sequence."""
    if V.dimension != 1:
        raise ValidationError("the heat-trace oracle is one-dimensional")
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts < 1e-3 - 1e-15) or np.any(ts > 1.0):
        raise ValidationError("t must lie in [1e-3, 1]")
    if V.is_zero:
        return 0.0 if np.ndim(t) == 0 else np.zeros(len(ts))
    L = _box(V, ts.max())
    h1, h2 = steps
    if threads > 1:
        with ThreadPoolExecutor(2) as pool:
            coarse, fine = pool.map(lambda h: _trace_on_grid(V, ts, L, h, max(1, threads // 2)),
                                    (h1, h2))
    else:
        coarse = _trace_on_grid(V, ts, L, h1, 1)
        fine = _trace_on_grid(V, ts, L, h2, 1)
    ratio = (h1 / h2) ** 2
    out = (ratio * fine - coarse) / (ratio - 1)
    if check:
        disagreement = np.max(np.abs(out - fine))
        if disagreement > 1e-6:
            raise ResolutionError(f"Richardson correction {disagreement:.2e} too large")
    return float(out[0]) if np.ndim(t) == 0 else out


DEFAULT_T_GRID = tuple(np.geomspace(1e-3, 1e-2, 10))


@dataclass
class HeatFit:
    gamma: dict                      # j -> fitted coefficient
    t_grid: tuple
    residual: float
    condition: float


def fit_heat_coefficients(V, t_grid=DEFAULT_T_GRID, J=3, threads=1, traces=None):
    """Least squares of (4 pi t)^{1/2} Tr(t) against sum_{j<=J} gamma_j t^j."""
    if not (1 <= J <= 3):
        raise ValidationError("J must lie in [1, 3]")
    ts = np.asarray(t_grid, dtype=float)
    if len(ts) < 2 * J:
        raise ValidationError(f"need at least {2 * J} t values")
    if ts.max() / ts.min() < 10 * (1 - 1e-9):
        raise ValidationError("the t grid must span a decade")
    tr = heat_trace_oracle(V, ts, threads=threads) if traces is None else np.asarray(traces)
    y = np.sqrt(4 * np.pi * ts) * tr
    # columns scaled to unit size for conditioning
    M = np.stack([(ts / ts.max()) ** j for j in range(1, J + 1)], axis=1)
    cond = float(np.linalg.cond(M))
    if cond > 1e8:
        raise ResolutionError(f"ill-conditioned fit (cond {cond:.1e})")
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    gamma = {j: float(coef[j - 1] / ts.max() ** j) for j in range(1, J + 1)}
    res = float(np.linalg.norm(M @ coef - y))
    return HeatFit(gamma, tuple(float(t) for t in ts), res, cond)


@dataclass
class Calibration:
    """kappa_j = gamma_j / c_j per potential, and their spread."""
    kappa: dict                       # j -> mean kappa
    per_potential: list               # one dict j -> kappa per potential
    spread: dict                      # j -> max relative deviation from the mean
    exact: dict = field(default_factory=lambda: {j: float(kappa_exact(j)) for j in (1, 2, 3)})

    def consistent(self, tolerances=None):
        tolerances = tolerances or {1: 0.01, 2: 0.02}
        return all(self.spread[j] <= tol for j, tol in tolerances.items() if j in self.spread)


def calibrate(potentials, t_grid=DEFAULT_T_GRID, J=3, threads=1):
    """Fit gamma_j on each potential and form kappa_j = gamma_j / c_j (j <= 2:
    the higher fitted coefficients are too noisy to calibrate on)."""
    rows = []
    for V in potentials:
        fit = fit_heat_coefficients(V, t_grid, J, threads)
        rows.append({j: fit.gamma[j] / heat_invariant_closed(j, V) for j in (1, 2)})
    kappa = {j: float(np.mean([r[j] for r in rows])) for j in (1, 2)}
    spread = {j: float(max(abs(r[j] / kappa[j] - 1) for r in rows)) for j in (1, 2)}
    return Calibration(kappa, rows, spread)
