"""Gauss-Legendre rules, adaptive node doubling, and kink-corrected panels.

``PanelRule`` is the discretization shared by every Nystrom matrix in the
package: composite Gauss-Legendre panels plus, for each node, the data to
integrate a kernel with a derivative jump at ``y = x_m`` exactly over the
panel containing ``x_m`` (split at ``x_m``, interpolate the density with the
panel's Lagrange basis).
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ResolutionError


@lru_cache(maxsize=64)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n, a=-1.0, b=1.0):
    """Nodes and weights of the n-point rule on [a, b]."""
    x, w = _leggauss(int(n))
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


MAX_RULE = 64


def composite_rule(breakpoints, n_per_piece):
    """About ``n_per_piece`` Gauss-Legendre nodes on every interval between
    consecutive breakpoints (pieces split into equal panels of at most
    ``MAX_RULE`` nodes)."""
    n_per_piece = int(n_per_piece)
    panels = max(1, -(-n_per_piece // MAX_RULE))
    q = -(-n_per_piece // panels)
    xs, ws = [], []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b > a:
            edges = np.linspace(a, b, panels + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                x, w = gauss_legendre(q, lo, hi)
                xs.append(x)
                ws.append(w)
    if not xs:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(xs), np.concatenate(ws)


def integrate(f, breakpoints, rtol=1e-10, atol=1e-300, n0=32, n_max=1 << 15):
    """Integrate ``f`` over the union of the intervals in ``breakpoints``.

    The node count per piece starts at ``n0`` and doubles until two
    successive values agree to ``rtol`` relative (or ``atol``).
    """
    prev = None
    n = n0
    while n <= n_max:
        x, w = composite_rule(breakpoints, n)
        if x.size == 0:
            return 0.0
        val = np.sum(w * f(x))
        if prev is not None and abs(val - prev) <= max(rtol * abs(val), atol):
            return val
        prev = val
        n *= 2
    raise ResolutionError(
        f"quadrature did not reach rtol={rtol:g} with {n_max} nodes per piece")


def _barycentric_weights(x):
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    return w / np.max(np.abs(w))


def lagrange_matrix(nodes, points):
    """Values L_n(points[q]) of the Lagrange basis on ``nodes``."""
    bw = _barycentric_weights(nodes)
    d = points[:, None] - nodes[None, :]
    hit = d == 0.0
    d[hit] = 1.0
    t = bw[None, :] / d
    L = t / t.sum(axis=1, keepdims=True)
    rows = hit.any(axis=1)
    if rows.any():
        L[rows] = hit[rows].astype(float)
    return L


@dataclass(frozen=True)
class PanelRule:
    """Composite Gauss-Legendre panels with per-node self-panel correction data.

    Attributes:
        nodes, weights: the global rule (length n).
        panel: panel index of each node.
        panel_slices: (start, stop) node range of each panel.
        sub_nodes: (n, 2q) split-panel nodes for each row.
        sub_weights: (n, 2q) matching weights.
        interp: (n, 2q, p) Lagrange values of the row's panel basis at ``sub_nodes``.
    """
    nodes: np.ndarray
    weights: np.ndarray
    panel: np.ndarray
    panel_slices: tuple
    sub_nodes: np.ndarray
    sub_weights: np.ndarray
    interp: np.ndarray

    @property
    def n(self):
        return len(self.nodes)


def _panel_edges(breakpoints, n, panel_size):
    lengths = np.diff(breakpoints)
    pieces = [(a, b) for a, b, ln in zip(breakpoints[:-1], breakpoints[1:], lengths) if ln > 0]
    total = sum(b - a for a, b in pieces)
    n_panels = max(len(pieces), int(round(n / panel_size)))
    # share panels among pieces proportionally to length, at least one each
    counts = [max(1, int(round(n_panels * (b - a) / total))) for a, b in pieces]
    edges = []
    for (a, b), c in zip(pieces, counts):
        edges.extend((a + (b - a) * i / c, a + (b - a) * (i + 1) / c) for i in range(c))
    return edges


@lru_cache(maxsize=32)
def panel_rule(breakpoints, n, panel_size=20):
    """Build (and cache) a ``PanelRule`` with about ``n`` nodes.

    ``breakpoints`` is a tuple of increasing floats; panels never straddle
    them. Every panel gets the same node count p = max(4, round(n / panels)).
    """
    edges = _panel_edges(np.asarray(breakpoints, dtype=float), n, panel_size)
    p = max(4, int(round(n / len(edges))))
    g, gw = _leggauss(p)
    nodes, weights, panel, slices = [], [], [], []
    subs, subw, interp = [], [], []
    for i, (a, b) in enumerate(edges):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid + half * g
        slices.append((i * p, (i + 1) * p))
        nodes.append(x)
        weights.append(half * gw)
        panel.append(np.full(p, i))
        for xm in x:
            s1 = 0.5 * (a + xm) + 0.5 * (xm - a) * g
            s2 = 0.5 * (xm + b) + 0.5 * (b - xm) * g
            s = np.concatenate([s1, s2])
            subs.append(s)
            subw.append(np.concatenate([0.5 * (xm - a) * gw, 0.5 * (b - xm) * gw]))
            interp.append(lagrange_matrix(g, (s - mid) / half))
    rule = PanelRule(
        nodes=np.concatenate(nodes),
        weights=np.concatenate(weights),
        panel=np.concatenate(panel),
        panel_slices=tuple(slices),
        sub_nodes=np.array(subs),
        sub_weights=np.array(subw),
        interp=np.array(interp),
    )
    for arr in (rule.nodes, rule.weights, rule.panel, rule.sub_nodes,
                rule.sub_weights, rule.interp):
        arr.setflags(write=False)
    return rule


def corrected_matrix(rule, kernel, kernel_at_nodes=None):
    """Matrix M with sum_n M[m, n] phi(x_n) ~ int k(x_m, y) phi(y) dy.

    ``kernel(x, y)`` must broadcast. Off-panel entries are plain Nystrom
    ``k(x_m, x_n) w_n``; the row's own panel uses the split rule, which is
    exact for kernels that are smooth on either side of ``y = x_m``.
    """
    x, w = rule.nodes, rule.weights
    K = kernel(x[:, None], x[None, :]) if kernel_at_nodes is None else kernel_at_nodes
    M = K * w[None, :]
    ks = kernel(x[:, None], rule.sub_nodes) * rule.sub_weights      # (n, 2q)
    local = np.einsum("mq,mqp->mp", ks, rule.interp)                 # (n, p)
    for start, stop in rule.panel_slices:
        M[start:stop, start:stop] = local[start:stop]
    return M
