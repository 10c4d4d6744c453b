"""Compiled inner loops for codebook search.

Codewords are integers; ``D`` tables hold Hamming distances.  Chamfer costs
are integer sums ``sum_b min_s d(b, s)`` (divide by ``L 2^L`` for the
objective).  Hull distances use the packing form of the Chebyshev LP: for
binary b and S, ``dist(b, conv S) = 1 / max{sum mu : A mu <= 1, mu >= 0}``
with ``A[i, j] = [s_j,i != b_i]``, which starts feasible at mu = 0.
"""

import time

import numba as nb
import numpy as np

EQ_TOL = 1e-9
TIME_CHECK_EVERY = 4096


@nb.njit(cache=True)
def popc(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@nb.njit(cache=True)
def distance_table(L):
    N = 1 << L
    D = np.empty((N, N), np.int32)
    for a in range(N):
        for b in range(N):
            D[a, b] = popc(a ^ b)
    return D


@nb.njit(cache=True)
def _now():
    with nb.objmode(t="float64"):
        t = time.perf_counter()
    return t


@nb.njit(cache=True)
def chamfer_cost(L, S):
    N = 1 << L
    tot = 0
    for b in range(N):
        m = L
        for s in S:
            d = popc(b ^ s)
            if d < m:
                m = d
        tot += m
    return tot


@nb.njit(cache=True)
def gain_bound(D, cur, avail, r):
    """Upper bound on the cost reduction from adding r points of ``avail``."""
    na = avail.shape[0]
    gains = np.empty(na, np.int64)
    N = cur.shape[0]
    for i in range(na):
        c = avail[i]
        g = 0
        for b in range(N):
            t = cur[b] - D[c, b]
            if t > 0:
                g += t
        gains[i] = g
    gs = np.sort(gains)
    tot = 0
    for i in range(min(r, na)):
        tot += gs[na - 1 - i]
    return tot


@nb.njit(cache=True)
def count_bound(L, binom, cur, r):
    """Reduction bound: r new points reach at most r C(L, h) strings at distance h."""
    cs = np.sort(cur)
    N = cs.shape[0]
    red = 0
    h = 0
    left = r
    idx = N - 1
    while idx >= 0:
        if left == 0:
            h += 1
            if h > L:
                break
            left = r * binom[h]
        v = cs[idx] - h
        if v <= 0:
            break
        red += v
        left -= 1
        idx -= 1
    return red


@nb.njit(cache=True)
def binomials(L):
    binom = np.zeros(L + 2, np.int64)
    binom[0] = 1
    for h in range(1, L + 1):
        binom[h] = binom[h - 1] * (L - h + 1) // h
    return binom


@nb.njit(cache=True)
def chamfer_bnb(L, M, w, best_init, node_limit, deadline):
    """Depth-first search over codebooks whose closest pair is (0, 2^w - 1).

    Every other pair is at distance >= w, further points are added in
    increasing order, and the smallest of them has a packed bit pattern
    (ones lowest inside the first w coordinates and inside the rest).
    Returns (best cost, best S, nodes, completed).  ``best`` only improves
    on strict decrease, so a caller-supplied incumbent survives ties.
    """
    N = 1 << L
    D = distance_table(L)
    u = (1 << w) - 1
    bestS = np.full(M, -1, np.int64)
    best = best_init
    if M < 2 or w > L:
        return best, bestS, 0, True
    cand = np.empty(N, np.int64)
    nc = 0
    for x in range(N):
        if x != 0 and x != u and D[0, x] >= w and D[u, x] >= w:
            cand[nc] = x
            nc += 1
    R = M - 2
    cur = np.empty((R + 1, N), np.int32)
    for b in range(N):
        cur[0, b] = min(D[0, b], D[u, b])
    avail = np.empty((R + 1, nc), np.int64)
    navail = np.zeros(R + 1, np.int64)
    pos = np.zeros(R + 1, np.int64)
    chosen = np.zeros(R + 1, np.int64)
    avail[0, :nc] = cand[:nc]
    navail[0] = nc
    binom = binomials(L)
    nodes = 0
    d = 0
    entering = True
    while d >= 0:
        if entering:
            nodes += 1
            if nodes > node_limit:
                return best, bestS, nodes, False
            if deadline > 0 and nodes % TIME_CHECK_EVERY == 0 and _now() > deadline:
                return best, bestS, nodes, False
            cost = 0
            for b in range(N):
                cost += cur[d, b]
            r = R - d
            entering = False
            if r == 0:
                if cost < best:
                    best = cost
                    bestS[0] = 0
                    bestS[1] = u
                    for j in range(d):
                        bestS[2 + j] = chosen[j]
                d -= 1
                continue
            na = navail[d]
            if na < r:
                d -= 1
                continue
            if cost - gain_bound(D, cur[d], avail[d, :na], r) >= best:
                d -= 1
                continue
            if cost - count_bound(L, binom, cur[d], r) >= best:
                d -= 1
                continue
            pos[d] = 0
        r = R - d
        i = pos[d]
        if i > navail[d] - r:
            d -= 1
            continue
        pos[d] = i + 1
        c = avail[d, i]
        if d == 0:
            lo = c & u
            hi = c >> w
            if lo != (1 << popc(lo)) - 1 or hi != (1 << popc(hi)) - 1:
                continue
        chosen[d] = c
        for b in range(N):
            v = cur[d, b]
            t = D[c, b]
            cur[d + 1, b] = t if t < v else v
        n2 = 0
        for j in range(i + 1, navail[d]):
            x = avail[d, j]
            if D[c, x] >= w:
                avail[d + 1, n2] = x
                n2 += 1
        navail[d + 1] = n2
        d += 1
        entering = True
    return best, bestS, nodes, True


@nb.njit(cache=True)
def _next_combination(idx, n):
    """Advance idx (strictly increasing, values < n) in lexicographic order."""
    m = idx.shape[0]
    i = m - 1
    while i >= 0 and idx[i] == n - m + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, m):
        idx[j] = idx[j - 1] + 1
    return True


@nb.njit(cache=True)
def chamfer_exhaustive(L, M, node_limit, deadline):
    """All codebooks {0} + (M-1 nonzero strings); returns (best, S, count, completed)."""
    N = 1 << L
    D = distance_table(L)
    bestS = np.zeros(M, np.int64)
    best = 1 << 62
    S = np.zeros(M, np.int64)
    m = M - 1
    idx = np.arange(m).astype(np.int64)
    count = 0
    while True:
        count += 1
        if count > node_limit:
            return best, bestS, count, False
        if deadline > 0 and count % TIME_CHECK_EVERY == 0 and _now() > deadline:
            return best, bestS, count, False
        for j in range(m):
            S[j + 1] = idx[j] + 1
        tot = 0
        for b in range(N):
            mn = D[0, b]
            for j in range(1, M):
                t = D[S[j], b]
                if t < mn:
                    mn = t
            tot += mn
        if tot < best:
            best = tot
            bestS[:] = S
        if m == 0 or not _next_combination(idx, N - 1):
            break
    return best, bestS, count, True


@nb.njit(cache=True)
def _nearest_two(D, S, N):
    M = S.shape[0]
    d1 = np.empty(N, np.int32)
    d2 = np.empty(N, np.int32)
    who = np.empty(N, np.int64)
    for b in range(N):
        a1 = 1 << 30
        a2 = 1 << 30
        w1 = -1
        for j in range(M):
            t = D[S[j], b]
            if t < a1:
                a2 = a1
                a1 = t
                w1 = j
            elif t < a2:
                a2 = t
        d1[b] = a1
        d2[b] = a2
        who[b] = w1
    return d1, d2, who


@nb.njit(cache=True)
def chamfer_local(L, S0, seed, plateau, max_steps):
    """Swap hill climbing with sideways moves; returns (cost, S, evaluations)."""
    np.random.seed(seed)
    N = 1 << L
    D = distance_table(L)
    S = S0.copy()
    M = S.shape[0]
    inS = np.zeros(N, np.bool_)
    for s in S:
        inS[s] = True
    cost = chamfer_cost(L, S)
    evals = 0
    side = 0
    base = np.empty(N, np.int32)
    for _ in range(max_steps):
        d1, d2, who = _nearest_two(D, S, N)
        best_delta = 1
        bj = -1
        bc = -1
        n_ties = 0
        for j in range(M):
            for b in range(N):
                base[b] = d2[b] if who[b] == j else d1[b]
            for c in range(N):
                if inS[c]:
                    continue
                evals += 1
                tot = 0
                for b in range(N):
                    t = D[c, b]
                    v = base[b]
                    tot += t if t < v else v
                delta = tot - cost
                if delta < best_delta:
                    best_delta = delta
                    bj = j
                    bc = c
                    n_ties = 1
                elif delta == best_delta:
                    n_ties += 1
                    if np.random.randint(n_ties) == 0:
                        bj = j
                        bc = c
        if bj < 0 or best_delta > 0:
            break
        if best_delta == 0:
            side += 1
            if side > plateau:
                break
        else:
            side = 0
        inS[S[bj]] = False
        inS[bc] = True
        S[bj] = bc
        cost += best_delta
    return cost, np.sort(S), evals


@nb.njit(cache=True)
def packing_value(L, S, b):
    """max sum mu s.t. A mu <= 1 (see module doc); returns inf if b in S."""
    M = S.shape[0]
    for j in range(M):
        if S[j] == b:
            return np.inf
    W = M + L + 1
    T = np.zeros((L + 1, W))
    for i in range(L):
        for j in range(M):
            T[i, j] = ((S[j] ^ b) >> i) & 1
        T[i, M + i] = 1.0
        T[i, W - 1] = 1.0
    for j in range(M):
        T[L, j] = -1.0
    basis = np.empty(L, np.int64)
    for i in range(L):
        basis[i] = M + i
    it = 0
    n_cols = M + L
    while True:
        col = -1
        if it < 50:
            best = -1e-12
            for j in range(n_cols):
                if T[L, j] < best:
                    best = T[L, j]
                    col = j
        else:
            for j in range(n_cols):
                if T[L, j] < -1e-12:
                    col = j
                    break
        if col < 0:
            break
        row = -1
        ratio = np.inf
        for i in range(L):
            a = T[i, col]
            if a > 1e-12:
                q = T[i, W - 1] / a
                if q < ratio - 1e-12 or (q <= ratio + 1e-12 and row >= 0 and basis[i] < basis[row]):
                    ratio = q
                    row = i
        if row < 0:
            return np.inf
        piv = T[row, col]
        for j in range(W):
            T[row, j] /= piv
        for i in range(L + 1):
            if i != row:
                f = T[i, col]
                if f != 0.0:
                    for j in range(W):
                        T[i, j] -= f * T[row, j]
        basis[row] = col
        it += 1
        if it > 10000:
            return -1.0
    return T[L, W - 1]


@nb.njit(cache=True)
def hull_distance(L, S, b):
    v = packing_value(L, S, b)
    if v == np.inf:
        return 0.0
    if v <= 0:
        return -1.0
    return 1.0 / v


@nb.njit(cache=True)
def hull_distances(L, S):
    N = 1 << L
    out = np.empty(N)
    for b in range(N):
        out[b] = hull_distance(L, S, b)
    return out


@nb.njit(cache=True)
def worst_eval(L, S, order, cap_max, cap_count):
    """(max distance, count at max) over ``order``, abandoned early once the
    result is known to be lexicographically above (cap_max, cap_count)."""
    mx = -1.0
    cnt = 0
    for b in order:
        d = hull_distance(L, S, b)
        if d > mx + EQ_TOL:
            mx = d
            cnt = 1
        elif d > mx - EQ_TOL:
            cnt += 1
        if mx > cap_max + EQ_TOL or (mx > cap_max - EQ_TOL and cnt > cap_count):
            return mx, cnt, False
    return mx, cnt, True


@nb.njit(cache=True)
def _lex_less(m1, c1, m2, c2):
    if m1 < m2 - EQ_TOL:
        return True
    if m1 > m2 + EQ_TOL:
        return False
    return c1 < c2


@nb.njit(cache=True)
def hausdorff_local(L, S0, seed, plateau, max_steps):
    """First-improvement swap search on (max hull distance, count at max).

    Candidate swaps are visited in random order; the inner evaluation scans
    the currently worst points first so most candidates are rejected early.
    Returns (max distance, S, evaluations).
    """
    np.random.seed(seed)
    N = 1 << L
    S = S0.copy()
    M = S.shape[0]
    inS = np.zeros(N, np.bool_)
    for s in S:
        inS[s] = True
    dist = hull_distances(L, S)
    mx = dist.max()
    cnt = 0
    for b in range(N):
        if dist[b] > mx - EQ_TOL:
            cnt += 1
    evals = 0
    side = 0
    n_out = N - M
    pairs = np.empty((M * n_out, 2), np.int64)
    for _ in range(max_steps):
        if mx < EQ_TOL:
            break
        order = np.argsort(-dist)
        p = 0
        for j in range(M):
            for c in range(N):
                if not inS[c]:
                    pairs[p, 0] = j
                    pairs[p, 1] = c
                    p += 1
        perm = np.random.permutation(p)
        found = -1
        side_pick = -1
        for q in perm:
            j = pairs[q, 0]
            c = pairs[q, 1]
            old = S[j]
            S[j] = c
            evals += 1
            # sideways candidates may tie, strict ones must beat (mx, cnt)
            m2, c2, full = worst_eval(L, S, order, mx, cnt)
            S[j] = old
            if full:
                if _lex_less(m2, c2, mx, cnt):
                    found = q
                    break
                if side_pick < 0:
                    side_pick = q
        if found < 0:
            if side_pick < 0:
                break
            side += 1
            if side > plateau:
                break
            found = side_pick
        else:
            side = 0
        j = pairs[found, 0]
        c = pairs[found, 1]
        inS[S[j]] = False
        inS[c] = True
        S[j] = c
        dist = hull_distances(L, S)
        mx = dist.max()
        cnt = 0
        for b in range(N):
            if dist[b] > mx - EQ_TOL:
                cnt += 1
    return mx, np.sort(S), evals


@nb.njit(cache=True)
def hausdorff_value(L, S):
    return hull_distances(L, S).max()


@nb.njit(cache=True)
def hausdorff_exhaustive(L, M, node_limit, deadline):
    """All codebooks containing 0; returns (best, S, count, completed)."""
    N = 1 << L
    bestS = np.zeros(M, np.int64)
    best = np.inf
    S = np.zeros(M, np.int64)
    m = M - 1
    idx = np.arange(m).astype(np.int64)
    count = 0
    order = np.arange(N).astype(np.int64)
    while True:
        count += 1
        if count > node_limit:
            return best, bestS, count, False
        if deadline > 0 and count % TIME_CHECK_EVERY == 0 and _now() > deadline:
            return best, bestS, count, False
        for j in range(m):
            S[j + 1] = idx[j] + 1
        v, c, full = worst_eval(L, S, order, best, 1 << 30)
        if full and v < best - EQ_TOL:
            best = v
            bestS[:] = S
        if m == 0 or not _next_combination(idx, N - 1):
            break
    return best, bestS, count, True
