"""Free resolvent kernels (d = 1, d = 3, radial partial waves) and the
Nystrom matrices of the cut-off resolvent chi R_0(lambda) chi.

Conventions: R_0(lambda) = (-Laplacian - lambda^2)^{-1}, outgoing for
Im lambda > 0 and continued to the lower half-plane.

    d = 1:      (i / 2 lambda) exp(i lambda |x - y|)
    d = 3:      exp(i lambda r) / (4 pi r)
    sector l:   G_l(r, r') = i lambda r r' j_l(lambda r_<) h_l^(1)(lambda r_>)

G_l is the kernel of (-d^2/dr^2 + l(l+1)/r^2 - lambda^2)^{-1} on L^2((0, inf), dr)
(regular at 0, outgoing at infinity); for l = 0 it is
sin(lambda r_<) exp(i lambda r_>) / lambda.

Two assembly methods share the same composite Gauss-Legendre nodes:
``"nystrom"`` (entries k(x_m, x_n) w_n) and ``"product"``, which integrates
the kernel's derivative jump on the diagonal exactly within each panel.
"""
import csv
from dataclasses import dataclass

import numpy as np

from . import linalg, quadrature
from .errors import PoleProximityError, ResolutionError, ValidationError
from .special import spherical_h1_all, spherical_jn_all

LAMBDA_MIN = 1e-3
ELL_MAX = 8


def _check_lambda(lam, lam_min=LAMBDA_MIN):
    lam = complex(lam)
    if abs(lam) < lam_min:
        raise PoleProximityError(f"|lambda| = {abs(lam):.3g} is inside the exclusion disk {lam_min:g}")
    return lam


def kernel_1d(x, y, lam, lam_min=LAMBDA_MIN):
    """(i / 2 lambda) exp(i lambda |x - y|)."""
    lam = _check_lambda(lam, lam_min)
    val = 1j / (2 * lam) * np.exp(1j * lam * np.abs(np.subtract(x, y)))
    return complex(val) if np.ndim(val) == 0 else val


def kernel_3d(r, lam):
    """exp(i lambda r) / (4 pi r), r = |x - y| > 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValidationError("kernel_3d is singular at r = 0")
    val = np.exp(1j * complex(lam) * r) / (4 * np.pi * r)
    return complex(val) if val.ndim == 0 else val


def kernel_radial(ell, r, rp, lam, ell_max=ELL_MAX):
    """Outgoing partial-wave Green kernel G_l(r, r'; lambda)."""
    if not (0 <= ell <= ell_max):
        raise ValidationError(f"ell must lie in [0, {ell_max}]")
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    if np.any(r <= 0) or np.any(rp <= 0):
        raise ValidationError("radial kernel needs r, r' > 0")
    lam = complex(lam)
    lo = np.minimum(r, rp)
    hi = np.maximum(r, rp)
    if lam == 0:
        val = lo ** (ell + 1) * hi ** (-float(ell)) / (2 * ell + 1)
        return complex(val) if np.ndim(val) == 0 else val.astype(complex)
    j = spherical_jn_all(ell, lam * lo)[ell]
    h = spherical_h1_all(ell, lam * hi)[ell]
    val = 1j * lam * r * rp * j * h
    return complex(val) if np.ndim(val) == 0 else val


def kernel_function(d, lam, ell=0):
    """Broadcasting callable k(x, y) for the 1-D or sector-l kernel."""
    lam = complex(lam)
    if d == 1:
        _check_lambda(lam)
        return lambda x, y: 1j / (2 * lam) * np.exp(1j * lam * np.abs(x - y))
    if d == 3:
        return lambda x, y: kernel_radial(ell, *np.broadcast_arrays(x, y), lam)
    raise ValidationError("dimension must be 1 or 3")


def domain(R, d):
    return (-R, R) if d == 1 else (0.0, R)


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Nystrom matrix A[m, n] ~ k(x_m, x_n) w_n of an integral operator."""
    nodes: np.ndarray
    weights: np.ndarray
    entries: np.ndarray
    lam: complex
    dimension: int
    ell: int = 0
    method: str = "nystrom"

    @property
    def n(self):
        return len(self.nodes)

    def symmetrized(self):
        """diag(sqrt w) A diag(1/sqrt w): the L^2-isometric representation."""
        s = np.sqrt(self.weights)
        return s[:, None] * self.entries / s[None, :]


def assemble_cutoff_resolvent(R, lam, n, d, ell=None, method="nystrom", breakpoints=None,
                              panel_size=20):
    """Nystrom matrix of chi_R R_0(lambda) chi_R on [-R, R] (d = 1) or of the
    sector-l cut-off resolvent on (0, R] (d = 3)."""
    if n < 4:
        raise ValidationError("need n >= 4 nodes")
    if d == 3 and ell is None:
        raise ValidationError("d = 3 assembly needs a sector ell")
    ell = 0 if ell is None else int(ell)
    bps = tuple(breakpoints) if breakpoints is not None else domain(R, d)
    rule = quadrature.panel_rule(bps, int(n), panel_size)
    k = kernel_function(d, lam, ell)
    x, w = rule.nodes, rule.weights
    if method == "nystrom":
        A = k(x[:, None], x[None, :]) * w[None, :]
    elif method == "product":
        A = quadrature.corrected_matrix(rule, k)
    else:
        raise ValidationError(f"unknown assembly method {method!r}")
    return KernelMatrix(x, w, A, complex(lam), d, ell, method)


def _matrix(A):
    return A.symmetrized() if isinstance(A, KernelMatrix) else np.asarray(A)


def operator_norm(A, rtol=1e-10):
    """Largest singular value (L^2 operator norm for a ``KernelMatrix``)."""
    return linalg.operator_norm(_matrix(A), rtol=rtol)


def singular_values(A):
    """Descending singular values (cyclic one-sided Jacobi)."""
    return linalg.singular_values(_matrix(A))


def hilbert_schmidt_norm(A):
    return float(np.linalg.norm(_matrix(A)))


@dataclass
class BoundReport:
    constant: float
    values: list            # (lambda, ||chi R0 chi||, scaled) per grid point (and sector)
    alpha: float
    finite: bool


def verify_resolvent_bound(R, d, grid, n=120, ell_max=ELL_MAX, method="product"):
    """Empirical constants in ||chi R0 chi|| <= C e^{alpha |Im lambda|} / |lambda| (d = 1)
    and ||chi R0 chi|| <= D e^{alpha |Im lambda|} (d = 3, every sector), alpha = 2R."""
    alpha = 2.0 * R
    rows = []
    sectors = [None] if d == 1 else range(ell_max + 1)
    for lam in grid:
        lam = complex(lam)
        for ell in sectors:
            nrm = operator_norm(assemble_cutoff_resolvent(R, lam, n, d, ell, method))
            scaled = nrm * np.exp(alpha * lam.imag) * (abs(lam) if d == 1 else 1.0)
            rows.append((lam, ell, nrm, scaled))
    const = max((r[3] for r in rows), default=0.0)
    return BoundReport(const, rows, alpha, bool(np.isfinite(const)))


@dataclass
class DecayReport:
    slope: float
    intercept: float
    fit_range: tuple
    singular_values: np.ndarray
    target: float

    @property
    def passed(self):
        return self.slope <= self.target


def verify_singular_decay(R, d, lam, n, ell=0, method="nystrom", floor=1e-13, first=5):
    """Least-squares slope of log mu_j against log j over the reliable range
    j in [first, min(n/4, last j with mu_j > floor * mu_1)]."""
    A = assemble_cutoff_resolvent(R, lam, n, d, ell if d == 3 else None, method)
    mu = singular_values(A)
    resolved = int(np.sum(mu > floor * max(mu[0], 1e-300)))
    if resolved < 30:
        raise ResolutionError(f"only {resolved} singular values above {floor:g}; increase n")
    last = min(n // 4, resolved)
    j = np.arange(first, last + 1)
    slope, intercept = np.polyfit(np.log(j), np.log(mu[j - 1]), 1)
    return DecayReport(float(slope), float(intercept), (first, last), mu, -2.0 / d + 0.1)


def export_matrix_csv(A, path):
    """Row-major CSV with "re,im" cells."""
    M = A.entries if isinstance(A, KernelMatrix) else np.asarray(A)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in M:
            writer.writerow([f"{z.real:.17g},{z.imag:.17g}" for z in row])
