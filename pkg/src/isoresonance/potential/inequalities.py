"""Numerical checks of the inequalities used for the uniform Sobolev bounds.

Every check evaluates both sides by quadrature and passes when
lhs <= rhs + slack * (1 + |rhs|).  A failure means the quadrature is
misconfigured (the inequalities are theorems) and raises
``InequalityViolation`` unless ``strict=False``.

Constants (d = 1, support in [-R, R]):
  * sup bound  ||u||_inf^2 <= ||u||_2 ||u'||_2, hence ||u||_inf <= C ||u||_{1,2}
    with C = 1/sqrt(2);
  * per-tuple chain for alpha in A_{j,k}, M = ||V||_{j-3,2}, by the number of
    factors of top order j - 3:
      none: int|prod| <= 2R prod ||D^a V||_inf <= 2R (C M)^k
      one:  int|prod| <= (C M)^{k-1} int|D^{a1} V| <= (C M)^{k-1} sqrt(2R) M
      two:  int|prod| <= (C M)^{k-2} ||D^{a1} V||_2 ||D^{a2} V||_2 <= (C M)^{k-2} M^2
    (j = 3, where all three factors are V itself, uses
     int|V|^3 <= ||V||_inf ||V||_2^2 <= C ||V||_{1,2} M^2).
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .. import quadrature
from ..errors import InequalityViolation, ValidationError
from .core import SquareWell
from .indexsets import enumerate_index_set
from .norms import sobolev_norm

SUP_CONSTANT = 1.0 / np.sqrt(2.0)
HOLDER_TUPLES = ((3, 3, 3), (2, 4, 4), (4, 2, 4), (2, 2, np.inf), (6, 3, 2), (1, np.inf, np.inf))


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    slack: float

    @property
    def holds(self):
        return self.lhs <= self.rhs + self.slack * (1.0 + abs(self.rhs))


@dataclass
class InequalityReport:
    checks: list = field(default_factory=list)
    sobolev_constants: dict = field(default_factory=dict)
    sup_ratio: float = 0.0

    @property
    def all_hold(self):
        return all(c.holds for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.holds]


class _Derivs:
    """Cached quadrature nodes with V^(m) values, refined until stable."""

    def __init__(self, V, order, rtol=1e-12):
        self.V = V
        self.order = order
        self.rtol = rtol
        self.bps = V.breakpoints()
        self._cache = {}
        self._sups = {}

    def stack(self, n):
        if n not in self._cache:
            x, w = quadrature.composite_rule(self.bps, n)
            self._cache[n] = (x, w, self.V.profile_all(x, self.order))
        return self._cache[n]

    def integral(self, fn, n0=64, n_max=1 << 13):
        prev = None
        n = n0
        while n <= n_max:
            x, w, D = self.stack(n)
            val = float(np.sum(w * fn(D)))
            if prev is not None and abs(val - prev) <= self.rtol * max(abs(val), 1e-300):
                return val
            prev = val
            n *= 2
        return val

    def sup(self, m):
        if m not in self._sups:
            f = lambda t: float(np.abs(self.V.profile_all(np.atleast_1d(t), m)[m][0]))
            x = np.linspace(self.bps[0], self.bps[-1], 20001)
            vals = np.abs(self.V.profile_all(x, m)[m])
            best = float(vals.max())
            i = int(vals.argmax())
            res = minimize_scalar(lambda t: -f(t), method="bounded",
                                  bounds=(x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]),
                                  options={"xatol": 1e-13})
            self._sups[m] = max(best, -float(res.fun))
        return self._sups[m]


def _lp(dv, m, p):
    if np.isinf(p):
        return dv.sup(m)
    return dv.integral(lambda D: np.abs(D[m]) ** p) ** (1.0 / p)


def verify_inequality_suite(V, j=4, slack=1e-9, strict=True):
    """Evaluate the inequality suite on a smooth d = 1 potential."""
    if V.dimension != 1:
        raise ValidationError("the inequality suite is implemented for d = 1")
    if isinstance(V, SquareWell) and not V.is_zero:
        raise ValidationError("the inequality suite needs a smooth potential")
    if j < 3:
        raise ValidationError("need j >= 3")
    report = InequalityReport()
    add = lambda name, lhs, rhs: report.checks.append(InequalityCheck(name, float(lhs), float(rhs), slack))

    if V.is_zero:
        for name in ("holder", "interpolation", "cubic", "sup_bound"):
            add(name, 0.0, 0.0)
        report.sobolev_constants = {jj: 0.0 for jj in range(3, j + 1)}
        return report

    top = max(j - 3, 2)
    dv = _Derivs(V, top)
    R = V.support_radius

    # generalized Holder on (V, V', V'')
    for ps in HOLDER_TUPLES:
        lhs = dv.integral(lambda D: np.abs(D[0] * D[1] * D[2]))
        rhs = np.prod([_lp(dv, m, p) for m, p in enumerate(ps)])
        add(f"holder{tuple(float(p) for p in ps)}", lhs, rhs)

    n2, n4, n6 = (_lp(dv, 0, p) for p in (2, 4, 6))
    add("interpolation L4 <= L2^(1/4) L6^(3/4)", n4, n2 ** 0.25 * n6 ** 0.75)
    add("cubic |int V^3| <= ||V||_4^2 ||V||_2", abs(dv.integral(lambda D: D[0] ** 3)), n4 ** 2 * n2)

    sup = _lp(dv, 0, np.inf)
    d1 = _lp(dv, 1, 2)
    h12 = np.hypot(n2, d1)
    add("sup^2 <= ||V||_2 ||V'||_2", sup ** 2, n2 * d1)
    add("sup <= C ||V||_{1,2}", sup, SUP_CONSTANT * h12)
    report.sup_ratio = sup / h12

    for jj in range(3, j + 1):
        M = sobolev_norm(V, jj - 3)
        CM = SUP_CONSTANT * M
        total = 0.0
        for k in range(3, jj + 1):
            for tup in enumerate_index_set(jj, k, 1):
                orders = [a[0] for a in tup.alphas]
                lhs = dv.integral(lambda D, o=orders: np.abs(np.prod([D[a] for a in o], axis=0)))
                total += lhs
                if jj == 3:
                    add("A1[j=3]", lhs, sup * n2 ** 2)
                    add("A1[j=3] chain", sup * n2 ** 2, SUP_CONSTANT * h12 * M ** 2)
                    continue
                tops = [a for a in orders if a == jj - 3]
                rest = [a for a in orders if a != jj - 3]
                sups = np.prod([_lp(dv, a, np.inf) for a in rest]) if rest else 1.0
                tag = f"A1[j={jj},alpha={tuple(orders)}]"
                if not tops:
                    add(tag + " case1", lhs, 2 * R * sups)
                    for a in rest:
                        add(tag + f" sup D^{a}", _lp(dv, a, np.inf),
                            SUP_CONSTANT * np.hypot(_lp(dv, a, 2), _lp(dv, a + 1, 2)))
                    add(tag + " case1 final", 2 * R * sups, 2 * R * CM ** k)
                elif len(tops) == 1:
                    l1 = dv.integral(lambda D, a=tops[0]: np.abs(D[a]))
                    add(tag + " case2", lhs, sups * l1)
                    add(tag + " case2 final", sups * l1, CM ** (k - 1) * np.sqrt(2 * R) * M)
                else:
                    l2 = _lp(dv, tops[0], 2) * _lp(dv, tops[1], 2)
                    add(tag + " case3", lhs, sups * l2)
                    add(tag + " case3 final", sups * l2, CM ** (k - 2) * M ** 2)
        report.sobolev_constants[jj] = sobolev_norm(V, jj - 2) ** 2 / (1.0 + total)

    if strict and not report.all_hold:
        worst = report.failures[0]
        raise InequalityViolation(
            f"{worst.name}: lhs={worst.lhs:.17g} > rhs={worst.rhs:.17g}; refine the quadrature")
    return report
