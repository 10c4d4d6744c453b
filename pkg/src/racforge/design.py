"""Codebook search for average-optimal and worst-case RACs.

The average objective is the directed Chamfer dissimilarity
``(1/2^L) sum_b min_s d_H(b, s)/L`` and the worst-case objective is
``max_b dist_inf(b, conv S)`` with S restricted to binary strings (the
deterministic-decoder restriction).  Success probability is one minus the
objective in both cases.

Strategies: ``exhaustive`` enumerates every codebook containing 0 (XOR
translation is lossless), ``bnb`` is a depth-first branch-and-bound with
symmetry anchoring, ``local`` is multi-start swap hill climbing seeded with
structured and linear codebooks.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .bounds import closed_form_avg_rac_bound
from .core import Codebook, canonical_form, popcount
from .serialize import format_number

EXHAUSTIVE = "exhaustive"
BNB = "bnb"
LOCAL = "local"
STRATEGIES = (EXHAUSTIVE, BNB, LOCAL)

PROVEN = "proven"
ACHIEVABLE_ONLY = "achievable-only"

CHAMFER = "chamfer"
HAUSDORFF = "hausdorff"

SNAP_TOL = 1e-7
MAX_LINEAR_CODES = 20000
CANONICAL_WORK_LIMIT = 10**8
EXACT_CERTIFY_MAX_M = 64
_NO_LIMIT = 1 << 62


class BudgetExhausted(RuntimeError):
    """The search ran out of budget before finding any codebook."""


@dataclass(frozen=True)
class Budget:
    node_limit: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit < 0:
            raise ValueError("node_limit must be nonnegative")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class DesignResult:
    L: int
    k: int
    objective_kind: str
    S: Codebook
    objective: Fraction | float
    strategy: str
    optimality: str
    nodes_explored: int = 0
    wall_time: float = 0.0
    seed: int | None = None
    conditional_on_conjecture: bool = False
    certified_exact: bool = False
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.optimality == PROVEN and self.strategy == LOCAL:
            raise ValueError("local search cannot prove optimality")

    @property
    def success_probability(self):
        return 1 - self.objective

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "L": self.L,
            "k": self.k,
            "objective_kind": self.objective_kind,
            "S": self.S.strings(),
            "objective": format_number(self.objective),
            "success_probability": format_number(self.success_probability),
            "strategy": self.strategy,
            "optimality": self.optimality,
            "conditional_on_conjecture": self.conditional_on_conjecture,
            "certified_exact": self.certified_exact,
            "nodes": self.nodes_explored,
            "seed": self.seed,
            "notes": self.notes,
        }
        if timing:
            d["seconds"] = round(self.wall_time, 3)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=1)


def _as_codebook(S, L=None) -> Codebook:
    if isinstance(S, Codebook):
        return S
    return Codebook(S, L)


def chamfer_objective(S) -> Fraction:
    S = _as_codebook(S)
    if not len(S):
        raise ValueError("empty codebook")
    total = K.chamfer_cost(S.L, S.as_array())
    return Fraction(int(total), S.L << S.L)


def hausdorff_objective(S, exact: bool = False):
    """max_b dist_inf(b, conv S); float from the packing LP, or a Fraction
    from the exact simplex when ``exact``."""
    S = _as_codebook(S)
    if not len(S):
        raise ValueError("empty codebook")
    if not exact:
        return float(K.hausdorff_value(S.L, S.as_array()))
    from .core import BitString
    from .lp import cheb_dist_to_hull

    best = Fraction(0)
    for b in range(1 << S.L):
        if b not in S.values:
            best = max(best, cheb_dist_to_hull(BitString(b, S.L), S, exact=True).distance)
    return best


def snap_rational(x: float, max_den: int, tol: float = SNAP_TOL) -> Fraction | None:
    q = Fraction(x).limit_denominator(max_den)
    return q if abs(float(q) - x) <= tol else None


def bnb_lower_bound(partial_S, remaining: int, objective: str = CHAMFER, available=None, L: int | None = None):
    """Admissible bound on the objective of any completion of ``partial_S``
    by ``remaining`` further points drawn from ``available`` (default: all
    strings not yet chosen).

    Chamfer: the smaller cost left after either bounding reduction (sum of
    the r largest single-point gains, or r Hamming spheres of each radius).
    Hausdorff: the distance of points that can never be chosen to the hull
    of everything still possible, and the (r+1)-th largest such distance
    among candidates (at most r of them get chosen).
    """
    P = _as_codebook(partial_S, L)
    L = P.L
    N = 1 << L
    if not len(P):
        raise ValueError("partial codebook must be nonempty")
    if remaining < 0:
        raise ValueError("remaining must be nonnegative")
    pool = [x for x in (range(N) if available is None else available) if x not in P.values]
    if objective == CHAMFER:
        D = K.distance_table(L)
        cur = D[np.array(P.values)].min(axis=0).astype(np.int32)
        cost = int(cur.sum())
        if remaining == 0 or not pool:
            return Fraction(cost, L << L)
        r = min(remaining, len(pool))
        g = K.gain_bound(D, cur, np.array(pool, np.int64), r)
        c = K.count_bound(L, K.binomials(L), cur, r)
        return Fraction(max(0, cost - min(int(g), int(c))), L << L)
    if objective == HAUSDORFF:
        full = np.array(sorted(set(P.values) | set(pool)), np.int64)
        pset = set(pool)
        never = [b for b in range(N) if b not in pset and b not in P.values]
        lb = max((K.hull_distance(L, full, b) for b in never), default=0.0)
        if remaining < len(pool):
            vals = sorted((K.hull_distance(L, full[full != b], b) for b in pool), reverse=True)
            lb = max(lb, vals[remaining])
        return lb
    raise ValueError(f"unknown objective {objective!r}")


def _deadline(budget: Budget | None, t0: float) -> float:
    if budget is None or budget.time_limit is None:
        return 0.0
    return t0 + budget.time_limit


def _node_limit(budget: Budget | None) -> int:
    if budget is None or budget.node_limit is None:
        return _NO_LIMIT
    return budget.node_limit


def _structured_init(L: int, k: int) -> list[int] | None:
    if k == 1:
        return [0, (1 << L) - 1]
    if k == L - 1:
        return [v for v in range(1 << L) if not popcount(v) & 1]
    return None


def _linear_code(L: int, k: int, A) -> list[int]:
    S = [0]
    for i in range(k):
        row = (1 << i) | (A[i] << k)
        S = S + [s ^ row for s in S]
    return S


def linear_codebooks(L: int, k: int, rng: np.random.Generator | None = None, limit: int = MAX_LINEAR_CODES):
    """Systematic linear codes [I_k | A], one per multiset of rows of A.

    Every binary linear code is coordinate-equivalent to a systematic one,
    and reordering rows of A is a coordinate permutation, so sorted rows
    suffice.  Past ``limit`` codes a random sample is drawn instead.
    """
    m = L - k
    n_codes = math.comb((1 << m) + k - 1, k)
    if n_codes <= limit:
        gen = itertools.combinations_with_replacement(range(1 << m), k)
    else:
        rng = rng or np.random.default_rng(0)
        gen = (tuple(sorted(rng.integers(0, 1 << m, size=k).tolist())) for _ in range(limit))
    for A in gen:
        yield _linear_code(L, k, A)


def _best_linear(L: int, k: int, evaluate, rng) -> list[int] | None:
    if k >= L:
        return None
    best, best_S = None, None
    for S in linear_codebooks(L, k, rng):
        v = evaluate(np.array(sorted(S), np.int64))
        if best is None or v < best - K.EQ_TOL:
            best, best_S = v, sorted(S)
    return best_S


def _finish_codebook(S: Codebook) -> Codebook:
    """canonical_form-least representative, when affordable."""
    work = math.factorial(S.L) * len(S) * len(S)
    return canonical_form(S) if work <= CANONICAL_WORK_LIMIT else S


def _check_args(L: int, k: int, strategy: str) -> None:
    if not (isinstance(L, int) and isinstance(k, int) and 1 <= k <= L <= 24):
        raise ValueError(f"need integers 1 <= k <= L <= 24, got ({L}, {k})")
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")


def _local_starts(L, k, seeds, starts, rng):
    M = 1 << k
    pool = [np.array(sorted(s), np.int64) for s in seeds if s is not None]
    out = pool[:starts]
    while len(out) < starts:
        out.append(np.sort(rng.choice(1 << L, M, replace=False)).astype(np.int64))
    return out


def _local_search(L, k, kernel, cost_of, seeds, seed, starts, plateau, budget, t0):
    rng = np.random.default_rng(seed)
    deadline = _deadline(budget, t0)
    node_limit = _node_limit(budget)
    best, best_S, evals = None, None, 0
    for n, S0 in enumerate(_local_starts(L, k, seeds, starts, rng)):
        if n and ((deadline and time.perf_counter() > deadline) or evals >= node_limit):
            break
        v0 = cost_of(S0)
        if best is None or v0 < best - K.EQ_TOL:
            best, best_S = v0, S0
        v, S, e = kernel(L, S0, seed * 1_000_003 + n, plateau, 10**7)
        evals += int(e)
        if v < best - K.EQ_TOL:
            best, best_S = v, S
    return best, best_S, evals


def _bnb_branch(args):
    L, M, w, best, node_limit, deadline = args
    b, S, n, done = K.chamfer_bnb(L, M, w, best, node_limit, deadline)
    return int(b), S.copy(), int(n), bool(done)


def search_avg_optimal(
    L: int,
    k: int,
    strategy: str = BNB,
    budget: Budget | None = None,
    seed: int = 0,
    starts: int = 64,
    plateau: int = 100,
    root_bound: bool = True,
    warm_start: bool = True,
    incumbent=None,
    jobs: int = 1,
) -> DesignResult:
    """Minimize the Chamfer objective over codebooks of size 2^k.

    ``bnb`` seeds its incumbent with a short local search (or ``incumbent``)
    and, with ``root_bound``, stops at once when that incumbent meets the
    closed-form layer-counting bound.  ``warm_start=False`` starts the tree
    search with no incumbent at all.  Each branch fixes the closest pair of
    S at (0, 2^w - 1); branches are independent and may run on ``jobs``
    worker processes.
    """
    _check_args(L, k, strategy)
    t0 = time.perf_counter()
    M = 1 << k
    total = L << L
    notes: list[str] = []

    def done(S, cost, strat, opt, nodes):
        cb = _finish_codebook(Codebook(S, L))
        return DesignResult(L, k, CHAMFER, cb, Fraction(int(cost), total), strat, opt, nodes,
                            time.perf_counter() - t0, seed, notes=notes)

    if k == L:
        return done(range(1 << L), 0, strategy, PROVEN if strategy != LOCAL else ACHIEVABLE_ONLY, 0)

    cost_of = lambda S: int(K.chamfer_cost(L, S))  # noqa: E731

    if strategy == EXHAUSTIVE:
        best, S, n, complete = K.chamfer_exhaustive(L, M, _node_limit(budget), _deadline(budget, t0))
        if best >= (1 << 62):
            raise BudgetExhausted(f"no codebook evaluated within budget at ({L}, {k})")
        return done(S.tolist(), best, EXHAUSTIVE, PROVEN if complete else ACHIEVABLE_ONLY, int(n))

    rng = np.random.default_rng(seed)
    seeds = [_structured_init(L, k), _best_linear(L, k, cost_of, rng)]
    if strategy == LOCAL:
        best, S, evals = _local_search(L, k, K.chamfer_local, cost_of, seeds, seed, starts, plateau, budget, t0)
        return done(S.tolist(), best, LOCAL, ACHIEVABLE_ONLY, evals)

    # branch and bound
    if incumbent is not None:
        inc = np.array(sorted(_as_codebook(incumbent, L).values), np.int64)
        if len(inc) != M:
            raise ValueError(f"incumbent must have {M} codewords")
        best, best_S = cost_of(inc), inc
    elif warm_start:
        best, best_S, _ = _local_search(L, k, K.chamfer_local, cost_of, seeds, seed, min(starts, 8), plateau, None, t0)
        best = int(best)
    else:
        best, best_S = _NO_LIMIT, None
    floor = total - closed_form_avg_rac_bound(L, k) * total  # cost of the bound, integer or not
    if root_bound and best <= math.ceil(floor):
        notes.append("incumbent meets the closed-form bound at the root")
        return done(best_S.tolist(), best, BNB, PROVEN, 1)

    node_limit = _node_limit(budget)
    deadline = _deadline(budget, t0)
    nodes = 0
    complete = True
    tasks = [(L, M, w, best, node_limit, deadline) for w in range(1, L + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_bnb_branch, tasks))
    else:
        results = []
        for L_, M_, w, _, _, dl in tasks:
            left = node_limit - nodes
            if left <= 0:
                results.append((best, None, 0, False))
                continue
            r = _bnb_branch((L_, M_, w, best, left, dl))
            results.append(r)
            nodes += r[2]
            if r[0] < best:
                best, best_S = r[0], r[1]
        nodes = 0
    for b, S, n, ok in results:
        nodes += n
        complete &= ok
        if b < best:
            best, best_S = b, S
    if best_S is None:
        raise BudgetExhausted(f"no codebook found within budget at ({L}, {k})")
    return done([int(x) for x in best_S], best, BNB, PROVEN if complete else ACHIEVABLE_ONLY, nodes)


def _worst_bnb(L: int, M: int, budget: Budget | None, t0: float, incumbent: float):
    """Include/exclude DFS over strings in increasing order with 0 fixed."""
    N = 1 << L
    node_limit = _node_limit(budget)
    deadline = _deadline(budget, t0)
    best, best_S = incumbent, None
    nodes = 0
    complete = True

    def bound(P, avail, r):
        full = np.array(sorted(P + avail), np.int64)
        aset = set(avail)
        pset = set(P)
        lb = 0.0
        for b in range(N):
            if b not in aset and b not in pset:
                lb = max(lb, K.hull_distance(L, full, b))
        if r < len(avail):
            vals = sorted((K.hull_distance(L, full[full != b], b) for b in avail), reverse=True)
            lb = max(lb, vals[r])
        return lb

    def rec(P, nxt):
        nonlocal best, best_S, nodes, complete
        nodes += 1
        if nodes > node_limit or (deadline and time.perf_counter() > deadline):
            complete = False
            return
        r = M - len(P)
        if r == 0:
            v = float(K.hausdorff_value(L, np.array(P, np.int64)))
            if v < best - K.EQ_TOL:
                best, best_S = v, list(P)
            return
        avail = list(range(nxt, N))
        if len(avail) < r:
            return
        if bound(P, avail, r) >= best - K.EQ_TOL:
            return
        for c in range(nxt, N - r + 1):
            rec(P + [c], c + 1)
            if not complete:
                return

    rec([0], 1)
    return best, best_S, nodes, complete


def search_worst_achievable(
    L: int,
    k: int,
    strategy: str = LOCAL,
    budget: Budget | None = None,
    seed: int = 0,
    starts: int = 64,
    plateau: int = 100,
    certify: bool = True,
) -> DesignResult:
    """Minimize max_b dist_inf(b, conv S) over binary codebooks of size 2^k.

    Results are optimal only among deterministic decoders, so a proven
    result carries ``conditional_on_conjecture``.  Float objectives are
    snapped to a rational with denominator <= L 2^k and, when ``certify``,
    recomputed with the exact simplex.
    """
    _check_args(L, k, strategy)
    t0 = time.perf_counter()
    M = 1 << k
    notes: list[str] = []

    def done(S, value, strat, opt, nodes):
        cb = _finish_codebook(Codebook([int(x) for x in S], L))
        objective, certified = float(value), False
        q = snap_rational(float(value), L * M)
        if q is None:
            notes.append(f"objective {value!r} did not snap to a rational with denominator <= {L * M}")
        elif certify and M <= EXACT_CERTIFY_MAX_M:
            exact = hausdorff_objective(cb, exact=True)
            certified = exact == q
            objective = exact
            if not certified:
                notes.append(f"snapped value {q} disagrees with the exact LP value {exact}")
        else:
            objective = q
        return DesignResult(L, k, HAUSDORFF, cb, objective, strat, opt, nodes, time.perf_counter() - t0,
                            seed, conditional_on_conjecture=True, certified_exact=certified, notes=notes)

    if k == L:
        return done(range(1 << L), 0.0, strategy, PROVEN if strategy != LOCAL else ACHIEVABLE_ONLY, 0)

    value_of = lambda S: float(K.hausdorff_value(L, S))  # noqa: E731

    if strategy == EXHAUSTIVE:
        best, S, n, complete = K.hausdorff_exhaustive(L, M, _node_limit(budget), _deadline(budget, t0))
        if not np.isfinite(best):
            raise BudgetExhausted(f"no codebook evaluated within budget at ({L}, {k})")
        return done(S.tolist(), best, EXHAUSTIVE, PROVEN if complete else ACHIEVABLE_ONLY, int(n))

    rng = np.random.default_rng(seed)
    seeds = [_structured_init(L, k), _best_linear(L, k, value_of, rng)]
    if strategy == LOCAL:
        best, S, evals = _local_search(L, k, K.hausdorff_local, value_of, seeds, seed, starts, plateau, budget, t0)
        return done(S.tolist(), best, LOCAL, ACHIEVABLE_ONLY, evals)

    inc = [s for s in seeds if s is not None]
    inc_val = min((value_of(np.array(sorted(s), np.int64)) for s in inc), default=np.inf)
    inc_S = min(inc, key=lambda s: value_of(np.array(sorted(s), np.int64))) if inc else None
    # the search looks for strictly better codebooks; nudge so ties are found too
    best, S, nodes, complete = _worst_bnb(L, M, budget, t0, inc_val + 2 * K.EQ_TOL)
    if S is None:
        if inc_S is None:
            raise BudgetExhausted(f"no codebook found within budget at ({L}, {k})")
        S, best = inc_S, inc_val
    return done(S, best, BNB, PROVEN if complete else ACHIEVABLE_ONLY, nodes)
