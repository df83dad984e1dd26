"""Wave-trace constants: w_j = d_j c_j with

    M_j = [(d/dtheta)^{d-1-2j} e^{-theta^2}]_{theta=0},   1 <= j <= (d-1)/2,
    N_j = int_R e^{-theta^2} |theta|^{2j-d} dtheta,       j >= (d+1)/2,
    d_j = 2^{2(j-d)+1} / M_j   or   2^{2(j-d)+1} / N_j.

M_j is exact: d^n/dtheta^n e^{-theta^2} = (-1)^n H_n(theta) e^{-theta^2} with
H_{n+1}(0) = -2n H_{n-1}(0).  N_j is computed by Gauss-Legendre quadrature
(its closed form Gamma(j - (d-1)/2) serves as the test oracle).
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import quadrature
from ..errors import ValidationError

THETA_MAX = 10.0     # e^{-100} tail is far below double precision


def _check(j, d):
    if d < 1 or d % 2 == 0:
        raise ValidationError("the wave/heat relation is used for odd d")
    if j < 1:
        raise ValidationError("j must be >= 1")


def hermite_at_zero(n):
    """H_n(0) (physicists' Hermite polynomials) as an exact integer."""
    prev, cur = 1, 0            # H_0(0), H_1(0)
    if n == 0:
        return 1
    for k in range(1, n):
        prev, cur = cur, -2 * k * prev
    return cur


def M_constant(j, d):
    _check(j, d)
    if not (1 <= j <= (d - 1) // 2):
        raise ValidationError("M_j is defined for 1 <= j <= (d-1)/2")
    n = d - 1 - 2 * j
    return Fraction((-1) ** n * hermite_at_zero(n))


def N_constant(j, d):
    _check(j, d)
    p = 2 * j - d
    if p <= -1:
        raise ValidationError(f"N_j diverges for 2j - d = {p} <= -1")
    # symmetric integrand: twice the half-line integral, split into unit pieces
    bps = tuple(np.arange(0.0, THETA_MAX + 0.5, 1.0))
    half = quadrature.integrate(lambda t: np.exp(-t * t) * t ** p, bps, rtol=1e-15, atol=1e-300)
    return 2.0 * float(half)


def wave_constants(j, d):
    """(d_j, M_j) for j <= (d-1)/2, else (d_j, N_j)."""
    _check(j, d)
    num = 2.0 ** (2 * (j - d) + 1)
    if j <= (d - 1) // 2:
        M = M_constant(j, d)
        return num / float(M), M
    N = N_constant(j, d)
    return num / N, N


@dataclass(frozen=True)
class WaveConstant:
    j: int
    d: int
    d_j: float
    kind: str          # "M" or "N"
    value: float

    def to_dict(self):
        return {"d_j": self.d_j, self.kind: self.value}


def wave_constant(j, d):
    dj, c = wave_constants(j, d)
    return WaveConstant(j, d, dj, "M" if j <= (d - 1) // 2 else "N", float(c))
