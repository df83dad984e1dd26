"""Argument-principle zero counting and isolation for analytic functions.

The winding number of f along a rectangle is accumulated from principal
arguments of f(b)/f(a) over boundary segments, bisected until every
increment is below pi/4 and agrees with the sum over its two halves.
Regions are quadrisected (at an off-centre split point, to keep zeros off
the new edges) until each cell holds one zero, which Newton's method then
refines; clusters are resolved with the multiplicity-aware Newton step
lambda <- lambda - m f / f'.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import (BudgetExceededError, ConvergenceError, ValidationError,
                      ZeroOnBoundaryError)

MAX_STEP = np.pi / 4
SPLITS = (0.4931, 0.5373, 0.4519, 0.5811, 0.4177)


@dataclass(frozen=True)
class SearchRegion:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    exclusion_radius: float = 1e-3

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValidationError("region needs re_min < re_max and im_min < im_max")
        if self.exclusion_radius > 0 and self.distance_to_origin() <= self.exclusion_radius:
            raise ValidationError(
                f"region intersects the exclusion disk |lambda| <= {self.exclusion_radius:g}")

    def distance_to_origin(self):
        dx = max(self.re_min, 0.0, -self.re_max)
        dy = max(self.im_min, 0.0, -self.im_max)
        return float(np.hypot(dx, dy))

    @property
    def corners(self):
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))

    @property
    def diameter(self):
        return float(np.hypot(self.re_max - self.re_min, self.im_max - self.im_min))

    @property
    def center(self):
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def contains(self, z, margin=0.0):
        return (self.re_min - margin <= z.real <= self.re_max + margin
                and self.im_min - margin <= z.imag <= self.im_max + margin)

    def split(self, fx=0.5, fy=0.5):
        xm = self.re_min + fx * (self.re_max - self.re_min)
        ym = self.im_min + fy * (self.im_max - self.im_min)
        mk = lambda a, b, c, d: SearchRegion(a, b, c, d, 0.0)
        # canonical order: lower-left, lower-right, upper-left, upper-right
        return [mk(self.re_min, xm, self.im_min, ym), mk(xm, self.re_max, self.im_min, ym),
                mk(self.re_min, xm, ym, self.im_max), mk(xm, self.re_max, ym, self.im_max)]

    def to_dict(self):
        return {"re_min": self.re_min, "re_max": self.re_max, "im_min": self.im_min,
                "im_max": self.im_max, "exclusion_radius": self.exclusion_radius}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(float(d["re_min"]), float(d["re_max"]), float(d["im_min"]),
                       float(d["im_max"]), float(d.get("exclusion_radius", 1e-3)))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed region: {exc!r}") from exc


class MemoFunction:
    """Caches f on rounded keys so shared cell edges are evaluated once."""

    def __init__(self, f, digits=13):
        self.f = f
        self.digits = digits
        self.cache = {}
        self.calls = 0

    def __call__(self, z):
        z = complex(z)
        key = (round(z.real, self.digits), round(z.imag, self.digits))
        if key not in self.cache:
            self.calls += 1
            self.cache[key] = complex(self.f(z))
        return self.cache[key]


def _as_memo(f):
    return f if isinstance(f, MemoFunction) else MemoFunction(f)


def _segment_phase(f, a, b, fa, fb, floor, depth, max_depth):
    d = np.angle(fb / fa)
    m = 0.5 * (a + b)
    fm = f(m)
    if abs(fm) < floor:
        raise ZeroOnBoundaryError(f"|f| = {abs(fm):.2e} on the contour near {m}")
    d1 = np.angle(fm / fa)
    d2 = np.angle(fb / fm)
    if abs(d) < MAX_STEP and abs(d1) < MAX_STEP and abs(d2) < MAX_STEP and abs(d1 + d2 - d) < 1e-6:
        return d1 + d2
    if depth >= max_depth:
        raise ConvergenceError("argument tracking did not converge; perturb the region")
    return (_segment_phase(f, a, m, fa, fm, floor, depth + 1, max_depth)
            + _segment_phase(f, m, b, fm, fb, floor, depth + 1, max_depth))


def winding(f, region, samples_per_edge=8, floor=1e-10, max_depth=40):
    """Real winding number (total phase / 2 pi) of f along the region boundary."""
    f = _as_memo(f)
    corners = region.corners
    total = 0.0
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        pts = [a + (b - a) * t for t in np.linspace(0.0, 1.0, samples_per_edge + 1)]
        vals = [f(z) for z in pts]
        if min(abs(v) for v in vals) < floor:
            raise ZeroOnBoundaryError("f vanishes (|f| < %g) on the region boundary" % floor)
        for k in range(samples_per_edge):
            total += _segment_phase(f, pts[k], pts[k + 1], vals[k], vals[k + 1], floor, 0,
                                    max_depth)
    return total / (2 * np.pi)


def count_zeros(f, region, **kw):
    """Number of zeros (with multiplicity) of f inside the rectangle."""
    w = winding(f, region, **kw)
    n = int(round(w))
    if abs(w - n) >= 0.25:
        raise ConvergenceError(f"winding residual {abs(w - n):.3f} too large")
    return n


def newton(f, z0, multiplicity=1, tol=1e-10, max_iter=60, fprime=None, radius=np.inf):
    """Multiplicity-aware Newton iteration; returns (z, last step size).
    Gives up (step = inf) once an iterate leaves the disk |z - z0| <= radius."""
    z = complex(z0)
    z_start = z
    step = np.inf
    for _ in range(max_iter):
        if abs(z - z_start) > radius:
            return z, np.inf
        fz = f(z)
        if fz == 0:
            return z, 0.0
        if fprime is not None:
            dz = fprime(z)
        else:
            h = 1e-5 * (1.0 + abs(z))
            dz = (f(z + h) - f(z - h)) / (2 * h)
        if dz == 0 or not np.isfinite(dz):
            break
        delta = multiplicity * fz / dz
        z -= delta
        step = abs(delta)
        if not np.isfinite(z):
            break
        if step < tol:
            return z, step
    return z, step


@dataclass
class Zero:
    lam: complex
    multiplicity: int


def _cell_winding(f, cell, floor):
    """Winding of a sub-cell; None if a zero sits on its boundary."""
    try:
        return count_zeros(f, cell, floor=floor)
    except ZeroOnBoundaryError:
        return None


def _confirm(f, z, m, tol, floor):
    """True if a small box around z has winding exactly m.  The box grows
    until f is safely non-zero on its boundary (needed for clusters, where
    |f| ~ |z - z0|^m)."""
    r = max(5.0 * tol, 1e-9 * (1.0 + abs(z)))
    for _ in range(12):
        box = SearchRegion(z.real - r, z.real + r, z.imag - r, z.imag + r, 0.0)
        w = _cell_winding(f, box, floor)
        if w is not None:
            return w == m
        r *= 4.0
    return False


def locate_zeros(f, region, tol=1e-8, max_cells=4000, floor=1e-10, threads=1):
    """Zeros of f inside ``region`` as a list of ``Zero`` (canonical order).

    With ``threads > 1`` the four child windings of each split are computed
    concurrently; the result does not depend on the thread count."""
    if tol < 1e-12:
        raise ValidationError("tol must be >= 1e-12")
    f = _as_memo(f)
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        return _locate(f, region, tol, max_cells, floor, pool)
    finally:
        if pool is not None:
            pool.shutdown()


def _locate(f, region, tol, max_cells, floor, pool):
    total = count_zeros(f, region, floor=floor)
    found = []
    stack = [(region, total)]
    cells = 0
    while stack:
        cell, w = stack.pop(0)
        cells += 1
        if cells > max_cells:
            raise BudgetExceededError(f"more than {max_cells} cells examined")
        if w == 0:
            continue
        # try to resolve the whole cell with one (multiplicity-w) Newton run
        z, step = newton(f, cell.center, multiplicity=w, tol=tol * 1e-3, radius=cell.diameter)
        if step < tol and cell.contains(z, margin=tol) and _confirm(f, z, w, tol, floor):
            found.append(Zero(z, w))
            continue
        if cell.diameter < tol:
            found.append(Zero(cell.center, w))
            continue
        for fx in SPLITS:
            kids = cell.split(fx, 1.0 - fx if fx != 0.5 else 0.5)
            if pool is None:
                ws = [_cell_winding(f, k, floor) for k in kids]
            else:
                ws = list(pool.map(lambda k: _cell_winding(f, k, floor), kids))
            if None not in ws:
                break
        else:
            raise ZeroOnBoundaryError("could not split a cell without cutting through a zero")
        if sum(ws) != w:
            raise ConvergenceError(f"sub-cell windings {ws} do not add up to {w}")
        stack.extend((k, kw) for k, kw in zip(kids, ws) if kw > 0)
    merged = merge_zeros(found, tol)
    if sum(zz.multiplicity for zz in merged) != total:
        raise ConvergenceError("located multiplicities do not match the region winding")
    return merged


def merge_zeros(zeros, tol):
    """Merge zeros closer than 2 tol into their multiplicity-weighted centroid."""
    zeros = sorted(zeros, key=lambda z: (z.lam.real, z.lam.imag))
    groups = []
    for z in zeros:
        for g in groups:
            if any(abs(z.lam - o.lam) < 2 * tol for o in g):
                g.append(z)
                break
        else:
            groups.append([z])
    out = []
    for g in groups:
        m = sum(z.multiplicity for z in g)
        c = sum(z.lam * z.multiplicity for z in g) / m
        out.append(Zero(complex(c), m))
    return sorted(out, key=lambda z: (round(z.lam.real, 9), round(z.lam.imag, 9)))
