"""Invariant vectors (c_j, w_j with their constants), equality checks and JSON."""
import json
from dataclasses import dataclass, field

from ..errors import ValidationError
from . import symbolic
from .heat import heat_invariant_closed, heat_invariant_symbolic, kappa_exact
from .wave import wave_constant


def _max_j(d):
    return symbolic.DEFAULT_MAX_J if d == 1 else 3


def heat_invariants(V, J):
    """j -> c_j for j <= J (symbolic engine in d = 1, closed forms in d = 3)."""
    if J < 1 or J > _max_j(V.dimension):
        raise ValidationError(f"J must lie in [1, {_max_j(V.dimension)}] for d = {V.dimension}")
    if V.dimension == 1:
        # c_1, c_2 need no derivatives, so square wells are fine there
        return {j: (heat_invariant_closed(j, V) if j <= 2 else heat_invariant_symbolic(j, V))
                for j in range(1, J + 1)}
    return {j: heat_invariant_closed(j, V) for j in range(1, J + 1)}


@dataclass
class InvariantVector:
    dimension: int
    c: dict
    w: dict
    constants: dict                       # j -> WaveConstant
    kappa: dict = field(default_factory=dict)

    def to_dict(self):
        s = lambda m: {str(k): v for k, v in sorted(m.items())}
        return {"dimension": self.dimension, "c": s(self.c), "w": s(self.w),
                "constants": {str(j): k.to_dict() for j, k in sorted(self.constants.items())},
                "calibration": {"kappa": s(self.kappa)}}

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def wave_trace_expansion(V, J, c=None):
    """j -> w_j = d_j c_j."""
    c = heat_invariants(V, J) if c is None else c
    return {j: wave_constant(j, V.dimension).d_j * c[j] for j in range(1, J + 1)}


def invariant_vector(V, J, kappa=None):
    c = heat_invariants(V, J)
    consts = {j: wave_constant(j, V.dimension) for j in range(1, J + 1)}
    w = {j: consts[j].d_j * c[j] for j in range(1, J + 1)}
    kappa = kappa or {j: float(kappa_exact(j)) for j in range(1, J + 1)}
    return InvariantVector(V.dimension, c, w, consts, dict(kappa))


@dataclass
class EqualityReport:
    equal: bool
    residuals: dict                      # j -> |c_j(V0) - c_j(V1)| / (1 + |c_j(V0)|)
    values0: dict
    values1: dict
    tol: float

    def to_dict(self):
        s = lambda m: {str(k): v for k, v in sorted(m.items())}
        return {"equal": self.equal, "tol": self.tol, "residuals": s(self.residuals),
                "c0": s(self.values0), "c1": s(self.values1)}


def verify_invariants_equal(V0, V1, J=3, tol=1e-10):
    """|c_j(V0) - c_j(V1)| <= tol (1 + |c_j(V0)|) for every j <= J."""
    if V0.dimension != V1.dimension:
        raise ValidationError("potentials must share the dimension")
    c0 = heat_invariants(V0, J)
    c1 = heat_invariants(V1, J)
    res = {j: abs(c0[j] - c1[j]) / (1.0 + abs(c0[j])) for j in c0}
    return EqualityReport(all(r <= tol for r in res.values()), res, c0, c1, tol)
