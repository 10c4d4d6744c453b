import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import chamfer_sum, popcount
from racforge.codes import (
    BitwiseDecoder,
    ClassicalCode,
    InvariantError,
    StochasticEncoder,
    avg_success,
    bit_success_prob,
    build_avg_code,
    build_worst_code,
    identity_code,
    optimal_L1_code,
    optimal_LLm1_code,
    success_table,
    worst_success,
)
from racforge.core import Codebook
from racforge.design import hausdorff_objective


@pytest.mark.parametrize("L", range(2, 9))
def test_parity_code_exact_values(L):
    code = optimal_LLm1_code(L)
    assert avg_success(code) == 1 - Fraction(1, 2 * L)
    assert worst_success(code) == 1 - Fraction(1, L)


def test_parity_code_bit_probability():
    code = optimal_LLm1_code(4)
    assert bit_success_prob(code, "0111", 0) == Fraction(3, 4)
    assert bit_success_prob(code, "0110", 3) == 1


def test_l1_code():
    assert avg_success(optimal_L1_code(4)) == Fraction(11, 16)
    assert avg_success(optimal_L1_code(1)) == 1
    code = optimal_L1_code(2)
    assert (avg_success(code), worst_success(code)) == (Fraction(3, 4), Fraction(1, 2))


def test_identity_code():
    code = identity_code(3)
    assert avg_success(code) == worst_success(code) == 1


def test_avg_code_from_even_class():
    code = build_avg_code(Codebook.even_parity(3), 2)
    assert avg_success(code) == Fraction(5, 6)


def test_worst_code_from_even_class():
    code = build_worst_code(Codebook.even_parity(3), 2)
    assert worst_success(code) == Fraction(2, 3)
    assert code.encoder.rows[4] == (Fraction(1, 3), 0, Fraction(1, 3), Fraction(1, 3))
    assert worst_success(build_worst_code(Codebook.even_parity(4), 3)) == Fraction(3, 4)


def test_tie_break_options_keep_average():
    S = Codebook(["0000", "0011", "1100", "1111"])
    vals = {avg_success(build_avg_code(S, 2, tb)) for tb in ("lowest", "highest", "spread")}
    assert len(vals) == 1
    with pytest.raises(ValueError):
        build_avg_code(S, 2, "random")


def test_smaller_codebook_pads_messages():
    code = build_avg_code(Codebook(["000", "111"]), 2)
    assert avg_success(code) == Fraction(3, 4)


def test_encoder_validation():
    with pytest.raises(InvariantError):
        StochasticEncoder(1, 1, [[Fraction(9, 10), 0], [0, 1]])
    with pytest.raises(InvariantError):
        StochasticEncoder(1, 1, [[1.5, -0.5], [0, 1]])
    with pytest.raises(InvariantError):
        StochasticEncoder(1, 1, [[1, 0]])
    with pytest.raises(InvariantError):
        BitwiseDecoder(1, 1, [[2], [0]])


def test_json_round_trip_exact():
    code = optimal_LLm1_code(4)
    back = ClassicalCode.from_json(code.to_json())
    assert back.encoder.rows == code.encoder.rows
    assert avg_success(back) == Fraction(7, 8)
    with pytest.raises(InvariantError):
        ClassicalCode.from_dict({"type": "quantum-rac"})


def test_float_code_matches_exact():
    code = optimal_LLm1_code(3)
    rows = [[float(v) for v in r] for r in code.encoder.rows]
    fl = ClassicalCode(StochasticEncoder(3, 2, rows), code.decoder)
    assert avg_success(fl) == pytest.approx(float(avg_success(code)), abs=1e-12)
    assert np.allclose(success_table(fl), np.array(success_table(code), dtype=float))


def _direct_success(code, b, i):
    # sum over messages and decoder outcomes, written independently of the library
    total = 0
    for m in range(1 << code.k):
        p1 = code.decoder.rows[m][i]
        bit = (b >> i) & 1
        total += code.encoder.rows[b][m] * (p1 if bit else 1 - p1)
    return total


@settings(max_examples=40)
@given(st.integers(2, 4).flatmap(lambda L: st.tuples(
    st.just(L),
    st.integers(1, L),
    st.data(),
)))
def test_random_stochastic_code_evaluation(args):
    L, k, data = args
    fr = st.integers(0, 4)
    rows = []
    for _ in range(1 << L):
        w = [data.draw(fr) for _ in range(1 << k)]
        if not sum(w):
            w[0] = 1
        rows.append([Fraction(x, sum(w)) for x in w])
    dec = [[Fraction(data.draw(st.integers(0, 3)), 3) for _ in range(L)] for _ in range(1 << k)]
    code = ClassicalCode(StochasticEncoder(L, k, rows), BitwiseDecoder(L, k, dec))
    tab = success_table(code)
    for b in range(1 << L):
        for i in range(L):
            assert tab[b][i] == _direct_success(code, b, i)
    assert avg_success(code) == sum(map(sum, tab)) / (L << L)


@pytest.mark.parametrize("L,k", [(L, k) for L in range(1, 4) for k in range(1, L + 1)])
def test_codebook_evaluation_identities_all_subsets(L, k):
    """Building a code from any codebook reproduces 1 - objective exactly."""
    for S in itertools.combinations(range(1 << L), 1 << k):
        cb = Codebook(S, L)
        avg = avg_success(build_avg_code(cb, k))
        assert avg == 1 - Fraction(chamfer_sum(S, L), L << L)
        worst = worst_success(build_worst_code(cb, k))
        assert worst == 1 - hausdorff_objective(cb, exact=True)


def test_worst_code_rows_are_simplex_weights_on_S():
    S = Codebook(["00000", "00111", "11001", "11110", "01010", "10101", "01100", "10011"])
    code = build_worst_code(S, 3)
    for b, row in enumerate(code.encoder.rows):
        assert sum(row) == 1 and min(row) >= 0
        if b in S.values:
            assert row[S.values.index(b)] == 1
    assert popcount(7) == 3
