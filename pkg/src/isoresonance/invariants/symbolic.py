"""Exact term algebra for the heat-invariant densities in d = 1.

A term is  coeff * z^p * prod_i V^(m_i)(y)  with z = x - y, stored as
(coeff: Fraction, z_power: int, v_derivs: sorted tuple).  The operator
H_y = -d^2/dy^2 + V(y) acts by the rules

    d/dy z^p = -p z^(p-1),   d/dy V^(m) = V^(m+1),   product rule,

and the density is

    c_j(x) = (-1)^j sum_{k<j} c_{j,k} [H_y^{k+j} z^{2k}]_{z=0} / (4^k k! (k+j)!),
    c_{j,k} = binom(j - 1 + d/2, k + d/2) = prod_{i=1}^{j-1-k} (k + d/2 + i) / i.

Integrated densities are reduced modulo total derivatives to a normal form
in which the highest derivative order of every monomial occurs at least
twice (see ``reduce_integral``).
"""
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from ..errors import ValidationError

DEFAULT_MAX_J = 6


@dataclass(frozen=True)
class SymbolicTerm:
    coeff: Fraction
    z_power: int
    v_derivs: tuple

    def __post_init__(self):
        if self.z_power < 0 or any(m < 0 for m in self.v_derivs):
            raise ValidationError("powers and derivative orders must be non-negative")

    @property
    def key(self):
        return (self.z_power, self.v_derivs)

    @property
    def weight(self):
        """Scaling weight: V counts 2, each derivative 1, z counts -1."""
        return 2 * len(self.v_derivs) + sum(self.v_derivs) - self.z_power


def canonicalize(terms):
    """Sort derivative multisets, merge equal keys, drop zero coefficients."""
    acc = defaultdict(Fraction)
    for t in terms:
        acc[(t.z_power, tuple(sorted(t.v_derivs)))] += Fraction(t.coeff)
    out = [SymbolicTerm(c, p, v) for (p, v), c in acc.items() if c != 0]
    out.sort(key=lambda t: (t.z_power, len(t.v_derivs), t.v_derivs))
    return tuple(out)


class DifferentialPolynomial:
    """Canonical sum of ``SymbolicTerm``s."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        self.terms = canonicalize(terms)

    @classmethod
    def constant(cls, c=1):
        return cls([SymbolicTerm(Fraction(c), 0, ())])

    @classmethod
    def z_power(cls, p, c=1):
        return cls([SymbolicTerm(Fraction(c), p, ())])

    def __add__(self, other):
        return DifferentialPolynomial(self.terms + other.terms)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        c = Fraction(c)
        return DifferentialPolynomial([SymbolicTerm(t.coeff * c, t.z_power, t.v_derivs)
                                       for t in self.terms])

    def __eq__(self, other):
        return isinstance(other, DifferentialPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def at_zero(self):
        """Evaluation on the diagonal z = 0."""
        return DifferentialPolynomial([t for t in self.terms if t.z_power == 0])

    def max_z_power(self):
        return max((t.z_power for t in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            f = [f"z^{t.z_power}"] if t.z_power else []
            f += [f"V{'′' * m}" if m <= 3 else f"V^({m})" for m in t.v_derivs]
            parts.append(f"{t.coeff}" + ("*" + "*".join(f) if f else ""))
        return " + ".join(parts)


def _d_dy(terms):
    out = []
    for t in terms:
        if t.z_power:
            out.append(SymbolicTerm(-t.coeff * t.z_power, t.z_power - 1, t.v_derivs))
        for i, m in enumerate(t.v_derivs):
            v = t.v_derivs[:i] + (m + 1,) + t.v_derivs[i + 1:]
            out.append(SymbolicTerm(t.coeff, t.z_power, v))
    return out


def hp_apply_H(P, max_z_power=None):
    """H_y P = -P'' + V P (terms with z power above ``max_z_power`` dropped)."""
    terms = P.terms
    second = _d_dy(canonicalize(_d_dy(terms)))
    out = [SymbolicTerm(-t.coeff, t.z_power, t.v_derivs) for t in second]
    out += [SymbolicTerm(t.coeff, t.z_power, t.v_derivs + (0,)) for t in terms]
    if max_z_power is not None:
        out = [t for t in out if t.z_power <= max_z_power]
    return DifferentialPolynomial(out)


def hp_power_at_zero(n, k):
    """[H_y^n z^(2k)]_{z=0}; each application lowers the z power by at most
    2, so terms that cannot reach z^0 are pruned along the way."""
    P = DifferentialPolynomial.z_power(2 * k)
    for step in range(n):
        P = hp_apply_H(P, max_z_power=2 * (n - step - 1))
    return P.at_zero()


def c_jk(j, k, d=1):
    """binom(j - 1 + d/2, k + d/2) as an exact rational (product form)."""
    out = Fraction(1)
    half_d = Fraction(d, 2)
    for i in range(1, j - k):
        out *= (k + half_d + i) / i
    return out


@lru_cache(maxsize=None)
def density(j, d=1):
    """The density c_j(x) as a DifferentialPolynomial in V and its derivatives."""
    if d != 1:
        raise ValidationError("the symbolic engine is one-dimensional")
    if j < 1:
        raise ValidationError("j must be >= 1")
    total = DifferentialPolynomial()
    for k in range(j):
        coeff = Fraction((-1) ** j) * c_jk(j, k, d) / (4 ** k * factorial(k) * factorial(k + j))
        total = total + hp_power_at_zero(k + j, k).scaled(coeff)
    return total


def _ibp_step(derivs):
    """One integration-by-parts rewrite of int prod V^(m_i) dx, or None if
    the monomial is already in normal form.  Returns a list of
    (factor, derivs) whose sum equals the input modulo total derivatives."""
    if not derivs:
        return None
    ms = sorted(derivs)
    top = ms[-1]
    if top == 0 or (len(ms) >= 2 and ms[-2] == top):
        return None
    rest = ms[:-1]
    if len(rest) == 0:
        return []                      # int V^(top) = 0
    # V^(top) (V^(top-1))^p Q  with Q of order < top - 1
    p = sum(1 for m in rest if m == top - 1)
    Q = [m for m in rest if m != top - 1]
    lifted = [top - 1] * (p + 1)
    # int (V^(top-1))^{p+1}/(p+1) ' Q = -1/(p+1) int (V^(top-1))^{p+1} Q'
    out = []
    for i, m in enumerate(Q):
        out.append((Fraction(-1, p + 1), tuple(sorted(lifted + Q[:i] + [m + 1] + Q[i + 1:]))))
    return out


def reduce_integral(P):
    """Normal form of int P dx (z-free part) modulo total derivatives:
    a dict derivs -> coefficient in which the highest derivative order of
    every monomial occurs at least twice (or the monomial is V^k)."""
    work = defaultdict(Fraction)
    for t in P.at_zero().terms:
        work[t.v_derivs] += t.coeff
    out = defaultdict(Fraction)
    while work:
        derivs, c = work.popitem()
        if c == 0:
            continue
        step = _ibp_step(derivs)
        if step is None:
            out[derivs] += c
            continue
        for f, dv in step:
            work[dv] += c * f
    return {k: v for k, v in sorted(out.items()) if v != 0}


def leading_coefficient(j):
    """Coefficient of int V^j in the reduced c_j: the engine's normalization
    relative to the closed forms."""
    return reduce_integral(density(j)).get((0,) * j, Fraction(0))


def evaluate_monomials(reduced, V, x):
    """Pointwise value of sum_c c * prod V^(m) at ``x`` (d = 1 potentials)."""
    if not reduced:
        return np.zeros(np.shape(x))
    top = max((max(k) for k in reduced if k), default=0)
    derivs = _derivative_table(V, x, top)
    total = np.zeros(np.shape(x))
    for key, c in reduced.items():
        term = np.full(np.shape(x), float(c))
        for m in key:
            term = term * derivs[m]
        total += term
    return total


def _derivative_table(V, x, order):
    from ..potential.core import SquareWell, values
    if order == 0 or isinstance(V, SquareWell):
        return [values(V, x, 0)] + [values(V, x, m) for m in range(1, order + 1)]
    x = np.asarray(x, dtype=float)
    out = np.zeros((order + 1,) + x.shape)
    inside = np.abs(x) < V.support_radius
    if inside.any():
        out[:, inside] = V.profile_all(x[inside], order)
    return list(out)


def index_set_membership(derivs, j):
    """Structural check: every monomial of the reduced c_j has weight 2j
    (V counts 2, each derivative 1) and an even total derivative order."""
    return 2 * len(derivs) + sum(derivs) == 2 * j and sum(derivs) % 2 == 0
