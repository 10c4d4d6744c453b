"""Independent reference implementations used only by the tests.

Nothing here imports the package's search or LP code: distances come from
plain popcounts and hull distances from scipy's HiGHS solver.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog


def popcount(x: int) -> int:
    return bin(x).count("1")


def chamfer_sum(S, L: int) -> int:
    return sum(min(popcount(b ^ s) for s in S) for b in range(1 << L))


def brute_avg_optimum(L: int, k: int) -> Fraction:
    """max over all size-2^k subsets of 1 - chamfer, no symmetry used."""
    M = 1 << k
    best = min(chamfer_sum(S, L) for S in itertools.combinations(range(1 << L), M))
    return 1 - Fraction(best, L << L)


def scipy_hull_distance(b: int, S, L: int) -> float:
    """min t  s.t.  |sum_j lam_j s_j - b|_inf <= t, lam in the simplex."""
    pts = np.array([[(s >> i) & 1 for i in range(L)] for s in S], dtype=float)
    bv = np.array([(b >> i) & 1 for i in range(L)], dtype=float)
    n = len(S)
    c = np.zeros(n + 1)
    c[-1] = 1
    A = np.vstack([np.hstack([pts.T, -np.ones((L, 1))]), np.hstack([-pts.T, -np.ones((L, 1))])])
    rhs = np.concatenate([bv, -bv])
    A_eq = np.hstack([np.ones((1, n)), np.zeros((1, 1))])
    res = linprog(c, A_ub=A, b_ub=rhs, A_eq=A_eq, b_eq=[1], bounds=[(0, None)] * (n + 1), method="highs")
    assert res.status == 0, res.message
    return float(res.fun)


def _permute(v: int, perm) -> int:
    out = 0
    for i, p in enumerate(perm):
        out |= ((v >> i) & 1) << p
    return out


@lru_cache(maxsize=None)
def _dist_from_zero(key: tuple, L: int) -> float:
    return scipy_hull_distance(0, key, L)


def hausdorff_value(S, L: int) -> float:
    """max_b dist(b, conv S); uses dist(b, S) = dist(0, S ^ b) and coordinate
    permutation invariance to share LP solves between subsets."""
    perms = list(itertools.permutations(range(L)))
    worst = 0.0
    for b in range(1 << L):
        if b in S:
            continue
        shifted = [s ^ b for s in S]
        key = min(tuple(sorted(_permute(v, p) for v in shifted)) for p in perms)
        worst = max(worst, _dist_from_zero(key, L))
    return worst


def brute_worst_value(L: int, k: int) -> float:
    """max over all size-2^k subsets of 1 - hausdorff, no symmetry in the outer loop."""
    M = 1 << k
    best = min(hausdorff_value(S, L) for S in itertools.combinations(range(1 << L), M))
    return 1 - best


def entropy(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))
