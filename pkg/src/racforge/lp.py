"""Dense two-phase primal simplex and the Chebyshev point-to-hull distance.

The solver works on numpy arrays of floats, or on object arrays of
``Fraction`` when ``exact=True``; the pivoting code is shared.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import BitString, Codebook, chebyshev

FEAS_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"


@dataclass
class LinearProgram:
    """minimize (or maximize) c @ x  s.t.  A_ub x <= b_ub,  A_eq x == b_eq,
    0 <= x <= upper (``None`` entries mean no upper bound)."""

    c: Sequence
    A_ub: Sequence = ()
    b_ub: Sequence = ()
    A_eq: Sequence = ()
    b_eq: Sequence = ()
    upper: Sequence | None = None
    maximize: bool = False

    def __post_init__(self):
        n = len(self.c)
        for name, A, b in (("ub", self.A_ub, self.b_ub), ("eq", self.A_eq, self.b_eq)):
            if len(A) != len(b):
                raise ValueError(f"A_{name} has {len(A)} rows but b_{name} has {len(b)}")
            for row in A:
                if len(row) != n:
                    raise ValueError(f"A_{name} row of length {len(row)}, expected {n}")
        if self.upper is not None and len(self.upper) != n:
            raise ValueError("upper must have one entry per variable")
        for v in _flat(self):
            if isinstance(v, float) and not np.isfinite(v):
                raise ValueError("non-finite coefficient")


def _flat(p: LinearProgram):
    yield from p.c
    for row in p.A_ub:
        yield from row
    yield from p.b_ub
    for row in p.A_eq:
        yield from row
    yield from p.b_eq


@dataclass
class LPResult:
    status: str
    optimum: object = None
    x: list = field(default_factory=list)
    iterations: int = 0


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] = T[r] / T[r, c]
    col = T[:, c].copy()
    col[r] = 0
    T -= np.outer(col, T[r])


def _run_simplex(T, basis, eps, max_iter, bland_after, n_cols, it0=0):
    """Iterate on tableau T (last row = reduced costs | -z) until optimal.

    Only the first ``n_cols`` columns may enter.  Returns (status, iterations).
    """
    it = it0
    while True:
        d = T[-1, :n_cols]
        if it >= bland_after:
            neg = [j for j in range(n_cols) if d[j] < -eps]
            if not neg:
                return OPTIMAL, it
            j = neg[0]
        else:
            j = int(np.argmin(d))
            if not d[j] < -eps:
                return OPTIMAL, it
        if it >= max_iter:
            return ITERATION_LIMIT, it
        colj = T[:-1, j]
        rhs = T[:-1, -1]
        best_r, best_ratio = -1, None
        for i in range(len(colj)):
            if colj[i] > eps:
                ratio = rhs[i] / colj[i]
                if (
                    best_ratio is None
                    or ratio < best_ratio - eps
                    or (abs(ratio - best_ratio) <= eps and basis[i] < basis[best_r])
                ):
                    best_r, best_ratio = i, ratio
        if best_r < 0:
            return UNBOUNDED, it
        _pivot(T, best_r, j)
        basis[best_r] = j
        it += 1


def solve_lp(p: LinearProgram, exact: bool = False, max_iter: int | None = None) -> LPResult:
    """Two-phase simplex with Dantzig pricing and a Bland fallback."""
    if exact:
        conv = Fraction
        dtype = object
        eps = 0
        zero, one = Fraction(0), Fraction(1)
    else:
        conv = float
        dtype = float
        eps = FEAS_TOL
        zero, one = 0.0, 1.0

    n = len(p.c)
    sign = -1 if p.maximize else 1
    c = [sign * conv(v) for v in p.c]

    rows: list[tuple[list, object, str]] = []
    for row, b in zip(p.A_ub, p.b_ub):
        rows.append(([conv(v) for v in row], conv(b), "ub"))
    if p.upper is not None:
        for j, u in enumerate(p.upper):
            if u is not None:
                e = [zero] * n
                e[j] = one
                rows.append((e, conv(u), "ub"))
    for row, b in zip(p.A_eq, p.b_eq):
        rows.append(([conv(v) for v in row], conv(b), "eq"))

    m = len(rows)
    n_slack = sum(1 for _, _, kind in rows if kind == "ub")
    needs_art = []
    for a, b, kind in rows:
        needs_art.append(kind == "eq" or b < 0)
    n_art = sum(needs_art)
    width = n + n_slack + n_art + 1
    T = np.empty((m + 1, width), dtype=dtype)
    T[...] = zero
    basis = [0] * m
    s_col, a_col = n, n + n_slack
    for i, (a, b, kind) in enumerate(rows):
        flip = b < 0
        f = -one if flip else one
        for j in range(n):
            T[i, j] = f * a[j]
        T[i, -1] = f * b
        if kind == "ub":
            T[i, s_col] = f
            if not flip:
                basis[i] = s_col
            s_col += 1
        if needs_art[i]:
            T[i, a_col] = one
            basis[i] = a_col
            a_col += 1

    total_cols = n + n_slack + n_art
    bland_after = 10 * (m + total_cols)
    if max_iter is None:
        max_iter = 50 * (m + total_cols) + 1000
    it = 0

    art_start = n + n_slack
    if n_art:
        T[-1, :] = zero
        for i in range(m):
            if basis[i] >= art_start:
                T[-1, :] -= T[i, :]
                T[-1, basis[i]] = zero
        status, it = _run_simplex(T, basis, eps, max_iter, bland_after, total_cols)
        if status == ITERATION_LIMIT:
            return LPResult(ITERATION_LIMIT, iterations=it)
        if -T[-1, -1] > (eps * max(1, m) if not exact else 0):
            return LPResult(INFEASIBLE, iterations=it)
        # drive artificials out of the basis, dropping redundant rows
        keep = list(range(m))
        for i in range(m):
            if basis[i] >= art_start:
                cand = [j for j in range(art_start) if abs(T[i, j]) > eps]
                if cand:
                    _pivot(T, i, cand[0])
                    basis[i] = cand[0]
                else:
                    keep.remove(i)
        T = np.concatenate([T[keep], T[-1:]], axis=0)
        T = np.concatenate([T[:, :art_start], T[:, -1:]], axis=1)
        basis = [basis[i] for i in keep]
        m = len(keep)

    cost = c + [zero] * n_slack
    T[-1, :] = zero
    for j in range(n):
        T[-1, j] = cost[j]
    for i in range(m):
        cb = cost[basis[i]]
        if cb != 0:
            T[-1, :] -= cb * T[i, :]
    status, it = _run_simplex(T, basis, eps, max_iter, bland_after, n + n_slack, it)
    if status != OPTIMAL:
        return LPResult(status, iterations=it)

    x = [zero] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    if not exact:
        x = [float(v) if abs(v) > 1e-15 else 0.0 for v in x]
    opt = sum((ci * xi for ci, xi in zip(p.c, x)), zero)
    if not exact:
        opt = float(opt)
    return LPResult(OPTIMAL, opt, x, it)


@dataclass
class HullDistanceResult:
    distance: object
    weights: list
    witness: tuple


def _point_coords(points) -> list[tuple]:
    if isinstance(points, Codebook):
        return [b.bits for b in points]
    out = []
    for pt in points:
        if isinstance(pt, str):
            pt = BitString.from_str(pt)
        out.append(pt.bits if isinstance(pt, BitString) else tuple(pt))
    return out


def cheb_dist_to_hull(b, points, exact: bool = False) -> HullDistanceResult:
    """Chebyshev distance from ``b`` to conv(points), with optimal simplex weights.

    Solves  min t  s.t.  -t <= b_i - sum_j lam_j s_ji <= t,  sum lam = 1,  lam >= 0.
    """
    if isinstance(b, str):
        b = BitString.from_str(b)
    bc = b.bits if isinstance(b, BitString) else tuple(b)
    pts = _point_coords(points)
    if not pts:
        raise ValueError("cannot measure distance to an empty set")
    L = len(bc)
    for pt in pts:
        if len(pt) != L:
            raise ValueError(f"dimension mismatch: point of length {len(pt)}, expected {L}")
    n = len(pts)
    conv = Fraction if exact else float
    A_ub, b_ub = [], []
    for i in range(L):
        A_ub.append([conv(pt[i]) for pt in pts] + [conv(-1)])
        b_ub.append(conv(bc[i]))
        A_ub.append([conv(-pt[i]) for pt in pts] + [conv(-1)])
        b_ub.append(conv(-bc[i]))
    lp = LinearProgram(
        c=[conv(0)] * n + [conv(1)],
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=[[conv(1)] * n + [conv(0)]],
        b_eq=[conv(1)],
    )
    res = solve_lp(lp, exact=exact)
    if res.status != OPTIMAL:
        raise RuntimeError(f"hull-distance LP ended with status {res.status!r}")
    lam = res.x[:n]
    if not exact:
        lam = [max(v, 0.0) for v in lam]
        total = sum(lam)
        lam = [v / total for v in lam]
    witness = tuple(sum((lam[j] * pts[j][i] for j in range(n)), conv(0)) for i in range(L))
    dist = chebyshev(bc, witness)
    if exact:
        assert dist == res.optimum, (dist, res.optimum)
    elif abs(dist - res.optimum) > 1e-9:
        raise RuntimeError(f"LP optimum {res.optimum} disagrees with witness distance {dist}")
    return HullDistanceResult(dist, lam, witness)
