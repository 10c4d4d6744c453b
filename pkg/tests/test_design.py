import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_avg_optimum, brute_worst_value, chamfer_sum, hausdorff_value
from racforge import _kernels as K
from racforge.bounds import l1_avg_optimum
from racforge.core import Codebook, canonical_form
from racforge.design import (
    ACHIEVABLE_ONLY,
    PROVEN,
    Budget,
    BudgetExhausted,
    DesignResult,
    bnb_lower_bound,
    chamfer_objective,
    hausdorff_objective,
    linear_codebooks,
    search_avg_optimal,
    search_worst_achievable,
    snap_rational,
)

SMALL = [(L, k) for L in range(1, 5) for k in range(1, L + 1)]


def test_objective_examples():
    assert chamfer_objective(Codebook.full(3)) == 0
    assert chamfer_objective(Codebook.even_parity(3)) == Fraction(1, 6)
    assert chamfer_objective(Codebook(["00", "11"])) == Fraction(1, 4)
    assert hausdorff_objective(Codebook.full(3)) == 0
    assert hausdorff_objective(Codebook.even_parity(3)) == pytest.approx(1 / 3, abs=1e-12)
    assert hausdorff_objective(Codebook.even_parity(5)) == pytest.approx(1 / 5, abs=1e-12)
    assert hausdorff_objective(Codebook.even_parity(3), exact=True) == Fraction(1, 3)


@settings(max_examples=40)
@given(st.integers(2, 5).flatmap(lambda L: st.tuples(st.just(L), st.sets(st.integers(0, (1 << L) - 1), min_size=1, max_size=8))))
def test_objectives_match_oracles(args):
    L, S = args
    S = sorted(S)
    assert chamfer_objective(Codebook(S, L)) == Fraction(chamfer_sum(S, L), L << L)
    assert hausdorff_objective(Codebook(S, L)) == pytest.approx(hausdorff_value(S, L), abs=1e-9)


def test_packing_kernel_matches_exact_lp_on_even_class():
    S = Codebook.even_parity(7).as_array()
    assert K.hull_distance(7, S, 0b0000111) == pytest.approx(1 / 7, abs=1e-12)
    assert K.hull_distance(7, S, 0b0000011) == 0.0


def test_lower_bound_examples():
    S = Codebook.even_parity(3)
    assert bnb_lower_bound(S, 0) == chamfer_objective(S)
    lb = bnb_lower_bound(Codebook(["000"]), 3)
    assert lb <= Fraction(1, 6)
    assert bnb_lower_bound(Codebook(["000"]), 7) == 0
    assert bnb_lower_bound(Codebook(["000"]), 7, "hausdorff") == 0
    assert bnb_lower_bound(S, 0, "hausdorff") == pytest.approx(1 / 3)


@settings(max_examples=30)
@given(st.integers(2, 4).flatmap(lambda L: st.tuples(
    st.just(L), st.integers(1, L - 1 if L > 1 else 1), st.sets(st.integers(0, (1 << L) - 1), min_size=1, max_size=3))))
def test_lower_bounds_are_admissible(args):
    L, k, P = args
    M = 1 << k
    P = sorted(P)
    if len(P) > M:
        P = P[:M]
    r = M - len(P)
    rest = [x for x in range(1 << L) if x not in P]
    best_c, best_h = None, None
    for extra in itertools.combinations(rest, r):
        S = list(P) + list(extra)
        c = Fraction(chamfer_sum(S, L), L << L)
        h = hausdorff_value(S, L)
        best_c = c if best_c is None else min(best_c, c)
        best_h = h if best_h is None else min(best_h, h)
    assert bnb_lower_bound(Codebook(P, L), r) <= best_c
    assert bnb_lower_bound(Codebook(P, L), r, "hausdorff") <= best_h + 1e-9


@pytest.mark.parametrize("L,k", SMALL)
def test_avg_strategies_agree_with_brute_force(L, k):
    expect = brute_avg_optimum(L, k)
    for strategy in ("exhaustive", "bnb"):
        res = search_avg_optimal(L, k, strategy)
        assert res.success_probability == expect
        assert res.optimality == PROVEN
    cold = search_avg_optimal(L, k, "bnb", root_bound=False, warm_start=False)
    assert cold.success_probability == expect and cold.optimality == PROVEN
    loc = search_avg_optimal(L, k, "local", starts=4)
    assert loc.success_probability <= expect and loc.optimality == ACHIEVABLE_ONLY


@pytest.mark.parametrize("L,k", SMALL)
def test_worst_strategies_agree_with_brute_force(L, k):
    expect = brute_worst_value(L, k)
    for strategy in ("exhaustive", "bnb"):
        res = search_worst_achievable(L, k, strategy)
        assert float(res.success_probability) == pytest.approx(expect, abs=1e-9)
        assert res.optimality == PROVEN and res.conditional_on_conjecture
        assert res.certified_exact


@pytest.mark.parametrize("L,k", [(3, 1), (3, 2), (4, 2), (4, 3)])
def test_canonical_representatives_suffice(L, k):
    reps = {canonical_form(Codebook(S, L)) for S in itertools.combinations(range(1 << L), 1 << k)}
    best_c = min(chamfer_objective(S) for S in reps)
    best_h = min(hausdorff_value(list(S.values), L) for S in reps)
    assert 1 - best_c == brute_avg_optimum(L, k)
    assert 1 - best_h == pytest.approx(brute_worst_value(L, k), abs=1e-9)


def test_cold_bnb_medium_cases():
    for L, k, expect in [(5, 2, Fraction(31, 40)), (5, 3, Fraction(17, 20)), (6, 3, Fraction(5, 6)),
                         (6, 5, Fraction(11, 12)), (7, 2, Fraction(163, 224))]:
        res = search_avg_optimal(L, k, "bnb", root_bound=False, warm_start=False)
        assert res.success_probability == expect and res.optimality == PROVEN


def test_chamfer_monotone_in_k():
    for L in range(2, 8):
        vals = [search_avg_optimal(L, k).objective for k in range(1, L + 1)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("L", range(2, 9))
def test_k1_search_equals_l1_formula(L):
    assert search_avg_optimal(L, 1).success_probability == l1_avg_optimum(L)


@pytest.mark.parametrize("L", range(3, 7))
def test_worst_diagonal_entries(L):
    res = search_worst_achievable(L, L - 1, "local", starts=1)
    assert res.success_probability == 1 - Fraction(1, L)


def test_local_never_worse_than_structured_start():
    for L in range(3, 7):
        parity = Codebook.even_parity(L)
        res = search_avg_optimal(L, L - 1, "local", starts=2)
        assert res.objective <= chamfer_objective(parity)
        pair = Codebook([0, (1 << L) - 1], L)
        res = search_worst_achievable(L, 1, "local", starts=2)
        assert res.objective <= hausdorff_objective(pair, exact=True)


def test_trivial_k_equals_L():
    res = search_avg_optimal(3, 3)
    assert res.success_probability == 1 and len(res.S) == 8
    res = search_worst_achievable(3, 3, "exhaustive")
    assert res.success_probability == 1


def test_budget_exhaustion():
    with pytest.raises(BudgetExhausted):
        search_avg_optimal(5, 3, "exhaustive", Budget(node_limit=0))
    res = search_avg_optimal(7, 2, "bnb", Budget(node_limit=3), root_bound=False)
    assert res.optimality == ACHIEVABLE_ONLY
    res = search_avg_optimal(5, 3, "exhaustive", Budget(node_limit=50))
    assert res.optimality == ACHIEVABLE_ONLY
    with pytest.raises(ValueError):
        Budget(time_limit=0)


def test_determinism_and_json():
    a = search_worst_achievable(5, 3, "local", seed=7, starts=3)
    b = search_worst_achievable(5, 3, "local", seed=7, starts=3)
    assert a.to_json(timing=False) == b.to_json(timing=False)
    d = json.loads(a.to_json())
    assert d["strategy"] == "local" and d["optimality"] == ACHIEVABLE_ONLY
    assert d["conditional_on_conjecture"] is True and "seconds" in d
    assert Fraction(d["success_probability"]) == a.success_probability


def test_result_invariants():
    with pytest.raises(ValueError):
        DesignResult(2, 1, "chamfer", Codebook(["00", "11"]), Fraction(1, 4), "local", PROVEN)
    for L, k in SMALL:
        p = search_avg_optimal(L, k).success_probability
        assert Fraction(1, 2) <= p <= 1


def test_parallel_jobs_give_same_objective():
    a = search_avg_optimal(6, 3, "bnb", root_bound=False, warm_start=False, jobs=1)
    b = search_avg_optimal(6, 3, "bnb", root_bound=False, warm_start=False, jobs=2)
    assert a.objective == b.objective


def test_linear_codebooks_are_subspaces():
    for S in itertools.islice(linear_codebooks(5, 2), 20):
        assert len(set(S)) == 4
        assert all((a ^ b) in S for a in S for b in S)


def test_snap_rational():
    assert snap_rational(0.2857142857, 56) == Fraction(2, 7)
    assert snap_rational(0.123456789, 8) is None


def test_argument_validation():
    with pytest.raises(ValueError):
        search_avg_optimal(3, 4)
    with pytest.raises(ValueError):
        search_worst_achievable(3, 2, "random")
