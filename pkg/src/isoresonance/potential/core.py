"""Potential types, pointwise evaluation, arithmetic and JSON I/O.

Three kinds are supported: ``SquareWell`` (centred well or barrier),
``BumpSum`` (sum of smooth bumps a*exp(-1/(1 - ((x - c)/w)^2))) and
``GridSampled`` (samples on a uniform grid).  In d = 3 every potential is
radial and all positional arguments are radii.
"""
import json
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import NonSmoothPotentialError, ValidationError
from .bump import bump_derivatives


@dataclass(frozen=True)
class Potential:
    support_radius: float
    dimension: int

    kind = "Potential"

    @property
    def radial(self):
        return self.dimension == 3

    def _check_common(self):
        if self.dimension not in (1, 3):
            raise ValidationError(f"dimension must be 1 or 3, got {self.dimension}")
        if not (np.isfinite(self.support_radius) and self.support_radius > 0):
            raise ValidationError("support_radius must be positive")

    def breakpoints(self):
        """Points where V (or a derivative) may be non-analytic, as a sorted
        tuple covering the integration domain ([-R, R], or [0, R] in d = 3)."""
        lo = 0.0 if self.dimension == 3 else -self.support_radius
        return (lo, self.support_radius)

    @property
    def is_zero(self):
        return False

    @property
    def smooth(self):
        return True


@dataclass(frozen=True)
class SquareWell(Potential):
    """V = depth on |x| < half_width (a well for depth < 0, a barrier for > 0)."""
    depth: float = 0.0
    half_width: float = 1.0

    kind = "SquareWell"

    def __post_init__(self):
        self._check_common()
        if not (0 < self.half_width <= self.support_radius):
            raise ValidationError("need 0 < half_width <= support_radius")

    @property
    def is_zero(self):
        return self.depth == 0.0

    @property
    def smooth(self):
        return self.is_zero

    def breakpoints(self):
        a, R = self.half_width, self.support_radius
        pts = {0.0, a, R} if self.dimension == 3 else {-R, -a, a, R}
        return tuple(sorted(pts))

    def pieces(self):
        """Piecewise-constant description [(left, right, value), ...]."""
        a = self.half_width
        if self.dimension == 3:
            return [(0.0, a, float(self.depth))]
        return [(-a, a, float(self.depth))]


@dataclass(frozen=True)
class BumpTerm:
    amplitude: float
    center: float
    width: float


@dataclass(frozen=True)
class BumpSum(Potential):
    terms: tuple = field(default_factory=tuple)

    kind = "BumpSum"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(
            t if isinstance(t, BumpTerm) else BumpTerm(*map(float, t)) for t in self.terms))
        self._check_common()
        R = self.support_radius
        for t in self.terms:
            if t.width <= 0:
                raise ValidationError("bump width must be positive")
            if self.dimension == 1 and abs(t.center) + t.width > R * (1 + 1e-12):
                raise ValidationError(f"bump {t} leaves the ball of radius {R}")
            if self.dimension == 3:
                if t.center != 0.0 and abs(t.center) < t.width:
                    raise ValidationError("radial bump must be centred at 0 or stay off the origin")
                if abs(t.center) + t.width > R * (1 + 1e-12):
                    raise ValidationError(f"bump {t} leaves the ball of radius {R}")

    @property
    def is_zero(self):
        return all(t.amplitude == 0.0 for t in self.terms)

    def breakpoints(self):
        pts = set(super().breakpoints())
        lo = min(pts)
        for t in self.terms:
            for p in (t.center - t.width, t.center + t.width):
                if lo <= p <= self.support_radius:
                    pts.add(p)
        return tuple(sorted(pts))

    def __add__(self, other):
        if not isinstance(other, BumpSum) or other.dimension != self.dimension:
            return NotImplemented
        return BumpSum(max(self.support_radius, other.support_radius), self.dimension,
                       self.terms + other.terms)

    def __mul__(self, c):
        return BumpSum(self.support_radius, self.dimension,
                       tuple(BumpTerm(c * t.amplitude, t.center, t.width) for t in self.terms))

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1.0) * other

    def profile(self, x, order=0):
        """V^(order) at ``x`` (d = 1) or f^(order)(r) of the radial profile (d = 3)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for t in self.terms:
            s = (x - t.center) / t.width
            out += t.amplitude * t.width ** (-order) * bump_derivatives(s, order)[order]
            if self.dimension == 3 and t.center != 0.0:
                # shell bumps mirrored so the profile is even in r
                s = (x + t.center) / t.width
                out += t.amplitude * t.width ** (-order) * bump_derivatives(s, order)[order]
        return out

    def profile_all(self, x, order):
        """Stack of V^(m)(x), m = 0..order (one Taylor pass per term)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros((order + 1,) + x.shape)
        for t in self.terms:
            scale = t.amplitude * t.width ** (-np.arange(order + 1.0))
            centers = [t.center]
            if self.dimension == 3 and t.center != 0.0:
                centers.append(-t.center)
            for c in centers:
                out += scale.reshape((-1,) + (1,) * x.ndim) * bump_derivatives((x - c) / t.width, order)
        return out


@dataclass(frozen=True, eq=False)
class GridSampled(Potential):
    """Samples on x_i = -R + i*h (d = 1) or r_i = i*h (d = 3), i = 0..N."""
    grid_spacing: float = 0.0
    samples: tuple = field(default_factory=tuple)

    kind = "GridSampled"

    def __post_init__(self):
        self._check_common()
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValidationError("samples must be a finite 1-D array")
        h = float(self.grid_spacing)
        span = self.support_radius * (1 if self.dimension == 3 else 2)
        if h <= 0:
            raise ValidationError("grid_spacing must be positive")
        N = span / h
        if abs(N - round(N)) > 1e-9 * max(N, 1):
            raise ValidationError("grid_spacing must divide the support interval")
        if len(arr) != int(round(N)) + 1:
            raise ValidationError(f"expected {int(round(N)) + 1} samples, got {len(arr)}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def grid(self):
        n = len(self.samples)
        lo = 0.0 if self.dimension == 3 else -self.support_radius
        return lo + self.grid_spacing * np.arange(n)

    @property
    def is_zero(self):
        return not np.any(self.samples)

    def line_samples(self):
        """Samples on the symmetric grid over [-R, R] (even extension in d = 3)."""
        if self.dimension == 1:
            return np.asarray(self.samples)
        return np.concatenate([self.samples[:0:-1], self.samples])

    def periodic_spectrum(self):
        """FFT of the zero-padded periodic extension on [-2R, 2R) and wavenumbers."""
        line = self.line_samples()          # N2 + 1 points on [-R, R]
        N2 = len(line) - 1
        if N2 % 2:
            raise ValidationError("grid must have an even number of intervals on [-R, R]")
        per = np.zeros(2 * N2)
        per[N2 // 2:N2 // 2 + N2 + 1] = line
        h = self.grid_spacing
        k = 2 * np.pi * np.fft.fftfreq(2 * N2, d=h)
        return np.fft.fft(per), k, N2 // 2

    def profile(self, x, order=0):
        """Trigonometric interpolant (or its derivative) at arbitrary points."""
        x = np.asarray(x, dtype=float)
        F, k, offset = self.periodic_spectrum()
        M = len(F)
        x0 = -2 * self.support_radius
        if M % 2 == 0:
            F = F.copy()
            F[M // 2] = 0.0  # drop the unpaired Nyquist mode: keeps the interpolant real
        coef = F * (1j * k) ** order / M
        flat = x.ravel()
        out = np.empty(flat.shape)
        for start in range(0, flat.size, 2048):
            chunk = flat[start:start + 2048]
            phase = np.exp(1j * np.outer(chunk - x0, k))
            out[start:start + 2048] = (phase @ coef).real
        out = out.reshape(x.shape)
        return out

    def profile_all(self, x, order):
        return np.stack([self.profile(x, m) for m in range(order + 1)])


def _as_points(V, x):
    x = np.asarray(x, dtype=float)
    if V.dimension == 3 and x.ndim >= 1 and x.shape[-1] == 3:
        return np.linalg.norm(x, axis=-1)
    return x


def evaluate(V, x):
    """V(x); exactly 0 for |x| >= R.  In d = 3 ``x`` may be radii or 3-vectors."""
    pts = _as_points(V, x)
    scalar = np.ndim(pts) == 0
    pts = np.atleast_1d(pts)
    out = np.zeros(pts.shape)
    inside = np.abs(pts) < V.support_radius
    if inside.any():
        xi = np.abs(pts[inside]) if V.dimension == 3 else pts[inside]
        if isinstance(V, SquareWell):
            out[inside] = np.where(np.abs(xi) < V.half_width, V.depth, 0.0)
        elif isinstance(V, BumpSum):
            out[inside] = V.profile(xi)
        elif isinstance(V, GridSampled):
            out[inside] = V.profile(xi)
        else:
            raise ValidationError(f"unknown potential kind {type(V).__name__}")
    return float(out[0]) if scalar else out


def values(V, x, order=0):
    """V^(order) (d = 1) or f^(order)(r) (d = 3) at points inside the support.

    Square wells have no classical derivatives, so only order 0 is allowed.
    """
    if order == 0:
        return evaluate(V, x)
    if isinstance(V, SquareWell):
        if V.is_zero:
            return np.zeros(np.shape(x))
        raise NonSmoothPotentialError("derivative of a non-smooth kind (SquareWell)")
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    inside = np.abs(x) < V.support_radius
    out[inside] = V.profile(x[inside], order)
    return out


def zero_potential(dimension=1, support_radius=1.0):
    return BumpSum(support_radius, dimension, ())


def scale(V, c):
    """c * V (same kind)."""
    if isinstance(V, SquareWell):
        return replace(V, depth=c * V.depth)
    if isinstance(V, BumpSum):
        return c * V
    if isinstance(V, GridSampled):
        return replace(V, samples=tuple(c * np.asarray(V.samples)))
    raise ValidationError(f"unknown potential kind {type(V).__name__}")


def reflect(V):
    """x -> V(-x) (d = 1); the identity on radial potentials."""
    if V.dimension == 3 or isinstance(V, SquareWell):
        return V
    if isinstance(V, BumpSum):
        return BumpSum(V.support_radius, 1,
                       tuple(BumpTerm(t.amplitude, -t.center, t.width) for t in V.terms))
    return replace(V, samples=tuple(np.asarray(V.samples)[::-1]))


def translate(V, shift):
    """x -> V(x - shift) for bump sums (must stay inside the ball)."""
    if not isinstance(V, BumpSum) or V.dimension != 1:
        raise ValidationError("translation is supported for 1-D bump sums only")
    return BumpSum(V.support_radius, 1,
                   tuple(BumpTerm(t.amplitude, t.center + shift, t.width) for t in V.terms))


def sample(V, grid_spacing):
    """Sample V on the uniform grid of a ``GridSampled`` potential."""
    span = V.support_radius * (1 if V.dimension == 3 else 2)
    n = int(round(span / grid_spacing))
    lo = 0.0 if V.dimension == 3 else -V.support_radius
    x = lo + grid_spacing * np.arange(n + 1)
    return GridSampled(V.support_radius, V.dimension, grid_spacing, tuple(evaluate(V, x)))


def random_bump_sum(rng, dimension=1, support_radius=1.0, max_terms=4, max_amplitude=2.0):
    """A random bump sum supported in the ball; ``rng`` is a numpy Generator."""
    R = support_radius
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        w = float(rng.uniform(0.15, 0.6)) * R
        if dimension == 3:
            c = 0.0 if rng.random() < 0.5 else float(rng.uniform(w, R - w)) if R - w > w else 0.0
        else:
            c = float(rng.uniform(-(R - w), R - w))
        a = float(rng.uniform(-max_amplitude, max_amplitude))
        terms.append(BumpTerm(a, c, w))
    return BumpSum(R, dimension, tuple(terms))


# --- JSON -----------------------------------------------------------------

def to_dict(V):
    d = {"kind": V.kind, "dimension": V.dimension, "support_radius": V.support_radius}
    if isinstance(V, SquareWell):
        d.update(depth=V.depth, half_width=V.half_width)
    elif isinstance(V, BumpSum):
        d["terms"] = [{"amplitude": t.amplitude, "center": t.center, "width": t.width}
                      for t in V.terms]
    elif isinstance(V, GridSampled):
        d.update(grid_spacing=V.grid_spacing, samples=[float(s) for s in V.samples])
    return d


def from_dict(d):
    if not isinstance(d, dict):
        raise ValidationError("potential document must be a JSON object")
    try:
        kind = d["kind"]
        dim = int(d.get("dimension", 1))
        R = float(d["support_radius"])
        if d.get("radial") is False and dim == 3:
            raise ValidationError("d = 3 potentials must be radial")
        if kind == "SquareWell":
            return SquareWell(R, dim, float(d["depth"]), float(d["half_width"]))
        if kind == "BumpSum":
            terms = tuple(BumpTerm(float(t["amplitude"]), float(t["center"]), float(t["width"]))
                          for t in d.get("terms", []))
            return BumpSum(R, dim, terms)
        if kind == "GridSampled":
            return GridSampled(R, dim, float(d["grid_spacing"]),
                               tuple(float(s) for s in d["samples"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed potential document: {exc!r}") from exc
    raise ValidationError(f"unknown potential kind {kind!r}")


def dumps(V):
    return json.dumps(to_dict(V), sort_keys=True)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc
    return from_dict(doc)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(V, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(V) + "\n")
