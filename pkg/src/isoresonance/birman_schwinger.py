"""Discretized Birman-Schwinger operator K_V(lambda) = V R_0(lambda) chi.

``BSMatrix.entries`` is the plain Nystrom matrix V(x_m) k(x_m, x_n) w_n.
Determinants use the kink-corrected matrix ``corrected`` together with two
trace quantities computed by quadrature of the exact kernels:

    trace_exact = int V(x) k(x, x) dx               (= tr K)
    trace_sq    = int int V(x) k(x, y) V(y) k(y, x) (= tr K^2)

Plain Nystrom converges only like n^-2 because k has a derivative jump on
the diagonal; the corrected matrix is accurate to high order off the
diagonal trace, and the two traces restore the diagonal exactly (see
``determinant``).
"""
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .errors import ValidationError
from .freeresolvent import ELL_MAX, kernel_function
from .potential.core import evaluate


@dataclass(frozen=True, eq=False)
class ResolventData:
    """lambda-dependent kernel matrices on a fixed panel rule (shared by all V)."""
    rule: quadrature.PanelRule
    lam: complex
    dimension: int
    ell: int
    plain: np.ndarray        # k(x_m, x_n)
    corrected: np.ndarray    # corrected quadrature of y -> k(x_m, y)
    corrected_sq: np.ndarray  # corrected quadrature of y -> k(x_m, y)^2
    diagonal: np.ndarray     # k(x_m, x_m)


def resolvent_data(rule, lam, d, ell=0):
    k = kernel_function(d, lam, ell)
    x = rule.nodes
    plain = k(x[:, None], x[None, :])
    corrected = quadrature.corrected_matrix(rule, k, plain)
    corrected_sq = quadrature.corrected_matrix(rule, lambda a, b: k(a, b) ** 2, plain ** 2)
    return ResolventData(rule, complex(lam), d, ell, plain, corrected, corrected_sq,
                         np.diagonal(plain).copy())


@dataclass(frozen=True, eq=False)
class BSMatrix:
    lam: complex
    n: int
    entries: np.ndarray
    dimension: int
    ell: int
    nodes: np.ndarray
    weights: np.ndarray
    potential_values: np.ndarray
    corrected: np.ndarray
    trace_exact: complex
    trace_sq: complex

    def symmetrized(self):
        s = np.sqrt(self.weights)
        return s[:, None] * self.entries / s[None, :]


def node_rule(V, n, panel_size=20):
    return quadrature.panel_rule(tuple(float(b) for b in V.breakpoints()), int(n), panel_size)


def from_data(Vvals, data):
    w = data.rule.weights
    entries = Vvals[:, None] * data.plain * w[None, :]
    corrected = Vvals[:, None] * data.corrected
    tr1 = complex(np.sum(w * Vvals * data.diagonal))
    tr2 = complex(np.sum(w * Vvals * (data.corrected_sq @ Vvals)))
    return BSMatrix(data.lam, data.rule.n, entries, data.dimension, data.ell, data.rule.nodes,
                    w, Vvals, corrected, tr1, tr2)


def assemble_K(V, lam, n, ell=None, panel_size=20):
    """Nystrom discretization of K_V(lambda) (sector ``ell`` in d = 3)."""
    d = V.dimension
    if d == 3:
        if ell is None:
            raise ValidationError("d = 3 needs a partial-wave sector ell")
        if not (0 <= int(ell) <= ELL_MAX):
            raise ValidationError(f"ell must lie in [0, {ELL_MAX}]")
    ell = 0 if ell is None else int(ell)
    rule = node_rule(V, n, panel_size)
    Vvals = np.asarray(evaluate(V, rule.nodes), dtype=float)
    return from_data(Vvals, resolvent_data(rule, lam, d, ell))


def trace(K):
    """Sum of the diagonal of the plain Nystrom matrix."""
    return complex(np.trace(K.entries))


def hilbert_schmidt_norm(K):
    """(sum_{m,n} w_m |V(x_m) k(x_m, x_n)|^2 w_n)^{1/2}."""
    return float(np.linalg.norm(K.symmetrized()))
