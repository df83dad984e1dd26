"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and return conventions; vectorized across shifts
(bisection) and across disjoint column pairs (Jacobi) instead of looping.
"""
import numpy as np


def _pivmin(e):
    m = float(np.max(np.square(e))) if len(e) else 1.0
    return 1e-300 * max(m, 1.0)


def _count_many(d, e2, x, pivmin):
    x = np.asarray(x, dtype=float)
    q = d[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    c = (q < 0).astype(np.int64)
    for i in range(1, len(d)):
        q = d[i] - x - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        c += q < 0
    return c


def sturm_count(d, e, shifts):
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    return _count_many(d, np.square(e), np.atleast_1d(shifts), _pivmin(e))


def bisect_eigenvalues(d, e, il, iu, lo, hi, abstol):
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    e2 = np.square(e)
    pivmin = _pivmin(e)
    idx = np.arange(il, iu)
    lower = np.full(len(idx), float(lo))
    upper = np.full(len(idx), float(hi))
    while True:
        width = upper - lower
        tol = abstol + 4.4e-16 * np.maximum(np.abs(lower), np.abs(upper))
        active = width > tol
        if not active.any():
            break
        mid = 0.5 * (lower[active] + upper[active])
        stuck = (mid <= lower[active]) | (mid >= upper[active])
        if stuck.all():
            break
        c = _count_many(d, e2, mid, pivmin)
        below = c > idx[active]
        up = upper[active]
        lw = lower[active]
        upper[active] = np.where(below, mid, up)
        lower[active] = np.where(below, lw, mid)
    return 0.5 * (lower + upper)


def _round_robin(n):
    """Disjoint pair schedule covering every pair once per sweep (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        rounds.append((np.array(players[: n // 2]), np.array(players[n // 2:][::-1])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_singular_values(A, tol=1e-15, max_sweeps=60):
    G = np.array(A, dtype=np.complex128, copy=True)
    m, n = G.shape
    if n % 2:
        G = np.hstack([G, np.zeros((m, 1), dtype=np.complex128)])
    rounds = _round_robin(G.shape[1])
    sweep = 0
    rotated = True
    while rotated and sweep < max_sweeps:
        rotated = False
        sweep += 1
        for P, Q in rounds:
            gp = G[:, P]
            gq = G[:, Q]
            alpha = np.sum(np.abs(gp) ** 2, axis=0)
            beta = np.sum(np.abs(gq) ** 2, axis=0)
            gamma = np.sum(np.conj(gp) * gq, axis=0)
            gabs = np.abs(gamma)
            act = (gabs > 0) & (gabs > tol * np.sqrt(alpha * beta))
            if not act.any():
                continue
            rotated = True
            P, Q = P[act], Q[act]
            gp, gq = gp[:, act], gq[:, act]
            ph = gamma[act] / gabs[act]
            zeta = (beta[act] - alpha[act]) / (2.0 * gabs[act])
            t = np.sign(zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            t = np.where(zeta == 0, 1.0, t)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            gq = gq * np.conj(ph)
            G[:, P] = c * gp - s * gq
            G[:, Q] = s * gp + c * gq
    vals = np.sqrt(np.sum(np.abs(G) ** 2, axis=0))[:n]
    return np.sort(vals)[::-1], sweep
