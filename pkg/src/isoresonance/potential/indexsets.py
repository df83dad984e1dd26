"""The index sets A_{j,k} of k-tuples of multi-indices."""
import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .norms import multi_indices


@dataclass(frozen=True)
class MultiIndexTuple:
    j: int
    k: int
    alphas: tuple

    @property
    def orders(self):
        return tuple(sum(a) for a in self.alphas)

    def is_valid(self):
        return _admissible(self.alphas, self.j, self.k, len(self.alphas[0]) if self.alphas else 1)


def _admissible(alphas, j, k, d):
    if len(alphas) != k:
        return False
    orders = [sum(a) for a in alphas]
    if any(o > j - k for o in orders) or sum(orders) != 2 * (j - k):
        return False
    return all(sum(a[l] for a in alphas) % 2 == 0 for l in range(d))


def _check(j, k, d):
    if d not in (1, 3):
        raise ValidationError("dimension must be 1 or 3")
    if j < 3 or not (3 <= k <= j):
        raise ValidationError("need j >= 3 and 3 <= k <= j")


def enumerate_index_set(j, k, d):
    """All tuples in A_{j,k} (coordinate sums even; 0 counts as even),
    in lexicographic order of the flattened tuple."""
    _check(j, k, d)
    top = j - k
    target = 2 * top
    pool = [a for m in range(top + 1) for a in multi_indices(d, m)]
    pool.sort()
    out = []

    def rec(prefix, remaining, slots, parity):
        if slots == 0:
            if remaining == 0 and not any(parity):
                out.append(tuple(prefix))
            return
        # remaining order must fit in the remaining slots
        if remaining > slots * top:
            return
        for a in pool:
            o = sum(a)
            if o > remaining:
                continue
            prefix.append(a)
            rec(prefix, remaining - o, slots - 1,
                tuple((p + x) % 2 for p, x in zip(parity, a)))
            prefix.pop()

    rec([], target, k, (0,) * d)
    return [MultiIndexTuple(j, k, t) for t in out]


def brute_force_index_set(j, k, d, chunk=1 << 18):
    """Reference: filter every k-tuple of multi-indices with entries <= j - k."""
    _check(j, k, d)
    top = j - k
    cands = np.array(list(itertools.product(range(top + 1), repeat=d)), dtype=np.int64)
    n = len(cands)
    total = n ** k
    found = []
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((len(flat), k), dtype=np.int64)
        rest = flat.copy()
        for pos in range(k - 1, -1, -1):
            digits[:, pos] = rest % n
            rest //= n
        tup = cands[digits]                      # (m, k, d)
        orders = tup.sum(axis=2)
        ok = (orders <= top).all(axis=1) & (orders.sum(axis=1) == 2 * top)
        ok &= (tup.sum(axis=1) % 2 == 0).all(axis=1)
        for row in tup[ok]:
            found.append(tuple(tuple(int(v) for v in a) for a in row))
    return sorted(set(found))
