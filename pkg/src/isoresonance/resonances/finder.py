"""Resonance sets of a potential: zeros of D_V in a search region.

d = 1 contours the full determinant.  d = 3 contours each partial-wave
sector determinant separately and reports the union, a sector-l zero of
multiplicity m contributing (2l + 1) m (spherical-harmonic degeneracy).
"""
import json
from dataclasses import dataclass, field

import numpy as np

from ..determinant import DEFAULT_N, Evaluator
from ..errors import ValidationError
from ..freeresolvent import ELL_MAX
from .contour import SearchRegion, Zero, locate_zeros, merge_zeros


class ResonanceSet:
    """Resonances (lambda, multiplicity) located in ``region`` to ``tolerance``."""

    def __init__(self, entries, region, tolerance, ell_max=None):
        norm = []
        for e in entries:
            lam, m = (e.lam, e.multiplicity) if isinstance(e, Zero) else e
            m = int(m)
            if m < 1:
                raise ValidationError("multiplicities must be positive")
            norm.append((complex(lam), m))
        self.entries = sorted(norm, key=lambda e: (round(e[0].real, 9), round(e[0].imag, 9)))
        self.region = region
        self.tolerance = float(tolerance)
        self.ell_max = ell_max

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.entries)

    @property
    def points(self):
        return np.array([lam for lam, _ in self.entries], dtype=complex)

    def to_dict(self):
        return {"region": self.region.to_dict(), "tolerance": self.tolerance,
                "entries": [{"re": lam.real, "im": lam.imag, "multiplicity": m}
                            for lam, m in self.entries],
                "ell_max": self.ell_max}

    @classmethod
    def from_dict(cls, d):
        try:
            entries = [(complex(e["re"], e["im"]), e["multiplicity"]) for e in d["entries"]]
            return cls(entries, SearchRegion.from_dict(d["region"]), d["tolerance"],
                       d.get("ell_max"))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed resonance set: {exc!r}") from exc

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def __repr__(self):
        return f"ResonanceSet({len(self.entries)} entries, tol={self.tolerance:g})"


def locate_resonances(V, region, tol=1e-8, n=DEFAULT_N, ell_max=None, sectors=None, threads=1,
                      method="product"):
    """Zeros of D_V in ``region`` with multiplicities (see module docstring)."""
    if tol < 1e-10:
        raise ValidationError("tol must be >= 1e-10")
    if not isinstance(region, SearchRegion):
        raise ValidationError("region must be a SearchRegion")
    if V.dimension == 3:
        ell_max = ELL_MAX if ell_max is None else int(ell_max)
        sectors = tuple(range(ell_max + 1)) if sectors is None else tuple(sectors)
    if V.is_zero:
        return ResonanceSet([], region, tol, ell_max)
    if V.dimension == 1:
        zeros = locate_zeros(Evaluator(V, n, method=method), region, tol, threads=threads)
        return ResonanceSet(zeros, region, tol)
    found = []
    for ell in sectors:
        # det_1 of the sector: same zeros as det_2, without the e^{-tr K_l}
        # factor whose modulus ranges over many decades deep in the half-plane
        ev = Evaluator(V, n, ell_max=ell_max, method=method, sectors=(ell,), p=1)
        f = lambda lam, ev=ev, ell=ell: np.exp(ev.log(lam) / (2 * ell + 1))
        for z in locate_zeros(f, region, tol, threads=threads):
            found.append(Zero(z.lam, (2 * ell + 1) * z.multiplicity))
    return ResonanceSet(merge_zeros(found, tol), region, tol, ell_max)


@dataclass
class IsoReport:
    iso_resonant: bool
    pairs: list = field(default_factory=list)         # (a, b, distance)
    unmatched_a: list = field(default_factory=list)
    unmatched_b: list = field(default_factory=list)
    max_distance: float = 0.0

    def to_dict(self):
        c = lambda z: {"re": z[0].real, "im": z[0].imag, "multiplicity": z[1]}
        return {"iso_resonant": self.iso_resonant, "max_distance": self.max_distance,
                "pairs": [{"a": c(a), "b": c(b), "distance": d} for a, b, d in self.pairs],
                "unmatched_a": [c(a) for a in self.unmatched_a],
                "unmatched_b": [c(b) for b in self.unmatched_b]}


def compare_resonance_sets(A, B, tol=1e-6):
    """Greedy nearest-pair matching (equal multiplicities, distance < tol);
    iso-resonant iff the matching is perfect."""
    if A.region != B.region:
        raise ValidationError("resonance sets must share the search region")
    a_left = list(A.entries)
    b_left = list(B.entries)
    cand = sorted(((abs(a[0] - b[0]), i, j) for i, a in enumerate(a_left)
                   for j, b in enumerate(b_left) if a[1] == b[1]), key=lambda t: t[0])
    used_a, used_b, pairs = set(), set(), []
    for dist, i, j in cand:
        if dist >= tol:
            break
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        pairs.append((a_left[i], b_left[j], float(dist)))
    ua = [a for i, a in enumerate(a_left) if i not in used_a]
    ub = [b for j, b in enumerate(b_left) if j not in used_b]
    iso = not ua and not ub
    return IsoReport(iso, pairs, ua, ub, max((p[2] for p in pairs), default=0.0))


def bound_state_region(kappa, half=None):
    """Small box around i kappa on the positive imaginary axis."""
    half = 0.05 * kappa if half is None else half
    return SearchRegion(-half, half, kappa - half, kappa + half)
