"""Derivatives of the standard bump B(s) = exp(-1/(1 - s^2)) on |s| < 1.

``bump_derivatives`` propagates truncated Taylor series of 1/(1 - s^2) and
of its exponential, which stays accurate to ~1e-13 relative through order
~25. Expanding B^(n) = Q_n(s) (1 - s^2)^(-2n) B(s) and evaluating the
polynomial Q_n in floating point cancels catastrophically beyond n ~ 10, so
the polynomials are kept only as exact (``Fraction``) reference values.
"""
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np


def bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def bump_derivatives(s, order):
    """Array of shape (order + 1, *s.shape) holding B^(m)(s), m = 0..order."""
    s = np.asarray(s, dtype=float)
    out = np.zeros((order + 1,) + s.shape)
    inside = np.abs(s) < 1.0
    if not inside.any():
        return out
    si = s[inside]
    a0 = 1.0 - si * si
    a1 = -2.0 * si
    # Taylor coefficients of g(u) = -1 / (1 - (s + u)^2) = -1 / (a0 + a1 u - u^2)
    r = [1.0 / a0]
    for k in range(1, order + 1):
        prev2 = r[k - 2] if k >= 2 else 0.0
        r.append(-(a1 * r[k - 1] - prev2) / a0)
    g = [-x for x in r]
    b0 = np.exp(g[0])
    live = b0 > 0.0  # exp underflowed: every coefficient is 0 there
    b = [b0]
    for k in range(1, order + 1):
        acc = np.zeros_like(si)
        for j in range(1, k + 1):
            acc += j * g[j] * b[k - j]
        b.append(np.where(live, acc / k, 0.0))
    for m in range(order + 1):
        vals = factorial(m) * b[m]
        out[m][inside] = np.where(live, vals, 0.0)
    return out


@lru_cache(maxsize=None)
def q_polynomial(n):
    """Integer coefficients (ascending) of Q_n with
    B^(n)(s) = Q_n(s) (1 - s^2)^(-2n) B(s)."""
    if n == 0:
        return (1,)
    q = list(q_polynomial(n - 1))
    m = n - 1

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    def add(*ps):
        out = [0] * max(len(p) for p in ps)
        for p in ps:
            for i, x in enumerate(p):
                out[i] += x
        return out

    one_m = [1, 0, -1]
    dq = [i * q[i] for i in range(1, len(q))] or [0]
    new = add(mul(dq, mul(one_m, one_m)), mul([0, 4 * m], mul(q, one_m)), mul([0, -2], q))
    while len(new) > 1 and new[-1] == 0:
        new.pop()
    return tuple(new)


def bump_derivative_exact(n, s):
    """B^(n)(s) / B(s) as an exact rational, for rational ``s`` with |s| < 1."""
    s = Fraction(s)
    q = q_polynomial(n)
    val = sum(Fraction(c) * s ** i for i, c in enumerate(q))
    return val / (1 - s * s) ** (2 * n)
