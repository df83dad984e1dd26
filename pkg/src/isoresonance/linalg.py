"""Dense and tridiagonal linear algebra used across the package."""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import solve_banded

from . import kernels
from .errors import ConvergenceError


def singular_values(A):
    """Descending singular values of a dense (complex) matrix, cyclic Jacobi."""
    A = np.asarray(A, dtype=np.complex128)
    if A.size == 0:
        return np.zeros(0)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if A.shape[0] < A.shape[1]:
        A = A.conj().T
    vals, _ = kernels.jacobi_singular_values(A)
    return np.asarray(vals)


def operator_norm(A, rtol=1e-10, max_iter=20000, seed=0):
    """Largest singular value by power iteration on ``A^* A``.

    The estimate increases geometrically towards sigma_1; iteration stops
    once the extrapolated remaining error (from the ratio of successive
    increments) is below ``rtol`` relative.
    """
    A = np.asarray(A, dtype=np.complex128)
    if A.size == 0 or not np.any(A):
        return 0.0
    if A.shape == (1, 1):
        return float(abs(A[0, 0]))
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    AH = A.conj().T
    sigma = 0.0
    step = None
    for _ in range(max_iter):
        w = A @ v
        new = float(np.linalg.norm(w))
        u = AH @ w
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return new
        v = u / nu
        delta = new - sigma
        if step is not None and sigma > 0:
            if abs(delta) <= 1e-15 * new:
                return new
            ratio = delta / step if step != 0 else 0.0
            if 0.0 <= ratio < 1.0 and abs(delta) * ratio / (1.0 - ratio) <= rtol * new:
                return new
        step = delta
        sigma = new
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def tridiagonal_eigenvalues(d, e, lo=None, hi=None, abstol=0.0, threads=1):
    """Eigenvalues of the symmetric tridiagonal matrix (diag ``d``, offdiag ``e``)
    lying in ``[lo, hi)``, ascending, by Sturm-sequence bisection.

    ``threads > 1`` bisects disjoint index blocks concurrently (the compiled
    kernel releases the GIL); the result is identical."""
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    n = len(d)
    if n == 0:
        return np.zeros(0)
    ae = np.abs(e)
    radius = np.zeros(n)
    radius[:-1] += ae
    radius[1:] += ae
    glo = float(np.min(d - radius))
    ghi = float(np.max(d + radius))
    span = max(ghi - glo, 1.0)
    glo -= 1e-12 * span
    ghi += 1e-12 * span
    lo = glo if lo is None else max(float(lo), glo)
    hi = ghi if hi is None else min(float(hi), ghi)
    if hi <= lo:
        return np.zeros(0)
    il, iu = (int(c) for c in kernels.sturm_count(d, e, np.array([lo, hi])))
    if iu <= il:
        return np.zeros(0)
    if threads <= 1 or iu - il < 2 * threads:
        return np.asarray(kernels.bisect_eigenvalues(d, e, il, iu, lo, hi, abstol))
    edges = np.linspace(il, iu, threads + 1).astype(int)
    with ThreadPoolExecutor(threads) as pool:
        parts = pool.map(lambda ab: np.asarray(kernels.bisect_eigenvalues(
            d, e, int(ab[0]), int(ab[1]), lo, hi, abstol)), zip(edges[:-1], edges[1:]))
        return np.concatenate(list(parts))


def tridiagonal_eigenvector(d, e, mu, iterations=3, seed=0):
    """Unit eigenvector for the eigenvalue estimate ``mu`` by inverse iteration."""
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    n = len(d)
    shift = mu + 1e-13 * max(1.0, abs(mu))
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1] = d - shift
    ab[2, :-1] = e
    x = np.random.default_rng(seed).standard_normal(n)
    for _ in range(iterations):
        x = solve_banded((1, 1), ab, x)
        x /= np.linalg.norm(x)
    return x
