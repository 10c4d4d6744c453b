"""Classical (L,k)-RACs: stochastic encoder, bitwise decoder, exact evaluation.

An encoder is a row-stochastic table ``P_E(m | b)`` with rows ordered by the
integer value of ``b``; a decoder stores ``P(B'_i = 1 | m)`` for every message
``m`` and position ``i``.  Entries are either all ``Fraction`` (exact mode) or
floats.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import BitString, Codebook, parity, popcount
from .serialize import format_number, parse_number

ROW_TOL = 1e-12


class InvariantError(ValueError):
    """A code table violates a probability invariant."""


def _is_exact(v) -> bool:
    return isinstance(v, (Fraction, int)) and not isinstance(v, bool)


def _as_entry(v):
    return Fraction(v) if isinstance(v, int) else v


@dataclass(frozen=True)
class StochasticEncoder:
    L: int
    k: int
    rows: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(_as_entry(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != 1 << self.L:
            raise InvariantError(f"encoder needs {1 << self.L} rows, got {len(rows)}")
        for b, r in enumerate(rows):
            if len(r) != 1 << self.k:
                raise InvariantError(f"encoder row {b} has {len(r)} entries, expected {1 << self.k}")
            if any(v < -ROW_TOL for v in r):
                raise InvariantError(f"encoder row {b} has a negative entry")
            total = sum(r)
            if all(_is_exact(v) for v in r):
                if total != 1:
                    raise InvariantError(f"encoder row {b} sums to {total}, not 1")
            elif abs(total - 1) > ROW_TOL:
                raise InvariantError(f"encoder row {b} sums to {float(total)!r}, not 1")

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for r in self.rows for v in r)

    def matrix(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.rows])


@dataclass(frozen=True)
class BitwiseDecoder:
    L: int
    k: int
    rows: tuple[tuple, ...]  # rows[m][i] = P(B'_i = 1 | m)

    def __post_init__(self):
        rows = tuple(tuple(_as_entry(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != 1 << self.k:
            raise InvariantError(f"decoder needs {1 << self.k} rows, got {len(rows)}")
        for m, r in enumerate(rows):
            if len(r) != self.L:
                raise InvariantError(f"decoder row {m} has {len(r)} entries, expected {self.L}")
            for i, v in enumerate(r):
                if not -ROW_TOL <= v <= 1 + ROW_TOL:
                    raise InvariantError(f"decoder entry (m={m}, i={i}) = {v} outside [0, 1]")

    @classmethod
    def deterministic(cls, L: int, k: int, outputs: Sequence[int]) -> BitwiseDecoder:
        """Decoder sending message m to the fixed string ``outputs[m]``."""
        return cls(L, k, tuple(tuple(Fraction((o >> i) & 1) for i in range(L)) for o in outputs))

    @property
    def is_deterministic(self) -> bool:
        return all(v in (0, 1) for r in self.rows for v in r)

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for r in self.rows for v in r)

    def matrix(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.rows]).reshape(1 << self.k, self.L)


@dataclass(frozen=True)
class ClassicalCode:
    encoder: StochasticEncoder
    decoder: BitwiseDecoder
    label: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.encoder.L, self.encoder.k) != (self.decoder.L, self.decoder.k):
            raise InvariantError("encoder and decoder disagree on (L, k)")

    @property
    def L(self) -> int:
        return self.encoder.L

    @property
    def k(self) -> int:
        return self.encoder.k

    @property
    def exact(self) -> bool:
        return self.encoder.exact and self.decoder.exact

    def to_dict(self) -> dict:
        return {
            "type": "classical-rac",
            "L": self.L,
            "k": self.k,
            "bit_order": "b = b_{L-1}...b_0; row index = integer value of b, b_0 least significant",
            "encoder": [[format_number(v) for v in r] for r in self.encoder.rows],
            "decoder": [[format_number(v) for v in r] for r in self.decoder.rows],
            "metadata": {"construction": self.label, **self.metadata},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> ClassicalCode:
        if d.get("type") != "classical-rac":
            raise InvariantError(f"not a classical code file (type={d.get('type')!r})")
        L, k = int(d["L"]), int(d["k"])
        enc = StochasticEncoder(L, k, [[parse_number(v) for v in r] for r in d["encoder"]])
        dec = BitwiseDecoder(L, k, [[parse_number(v) for v in r] for r in d["decoder"]])
        meta = dict(d.get("metadata", {}))
        label = meta.pop("construction", "")
        return cls(enc, dec, label, meta)

    @classmethod
    def from_json(cls, text: str) -> ClassicalCode:
        return cls.from_dict(json.loads(text))


def _b_value(b) -> int:
    if isinstance(b, str):
        b = BitString.from_str(b)
    return b.value if isinstance(b, BitString) else int(b)


def bit_success_prob(code: ClassicalCode, b, i: int):
    """Pr(B'_i = b_i | B = b) = sum_m P_D(b_i | m) P_E(m | b)."""
    if not 0 <= i < code.L:
        raise IndexError(f"bit index {i} out of range for L = {code.L}")
    bv = _b_value(b)
    if not 0 <= bv < 1 << code.L:
        raise ValueError(f"input {bv} does not fit in L = {code.L} bits")
    bit = (bv >> i) & 1
    total = 0
    for m, p in enumerate(code.encoder.rows[bv]):
        if p:
            q = code.decoder.rows[m][i]
            total += p * (q if bit else 1 - q)
    return total


def success_table(code: ClassicalCode):
    """Per-(b, i) success probabilities: exact nested lists, or a float array."""
    if code.exact:
        return [[bit_success_prob(code, b, i) for i in range(code.L)] for b in range(1 << code.L)]
    P_E = code.encoder.matrix()
    P1 = code.decoder.matrix()
    ones = P_E @ P1  # Pr(B'_i = 1 | b)
    bits = (np.arange(1 << code.L)[:, None] >> np.arange(code.L)) & 1
    return np.where(bits == 1, ones, 1 - ones)


def avg_success(code: ClassicalCode):
    tab = success_table(code)
    if code.exact:
        return sum(sum(r) for r in tab) / Fraction(code.L << code.L)
    return float(np.mean(tab))


def worst_success(code: ClassicalCode):
    tab = success_table(code)
    if code.exact:
        return min(min(r) for r in tab)
    return float(np.min(tab))


def _codebook_elements(S, L, k) -> list[int]:
    if not isinstance(S, Codebook):
        S = Codebook(S)
    if len(S) > 1 << k:
        raise ValueError(f"|S| = {len(S)} exceeds 2^k = {1 << k}")
    if not len(S):
        raise ValueError("empty codebook")
    return list(S.values)


def _padded_outputs(elems: list[int], k: int) -> list[int]:
    # unused messages decode to the first codeword
    return elems + [elems[0]] * ((1 << k) - len(elems))


def build_avg_code(S, k: int, tie_break: str = "lowest") -> ClassicalCode:
    """Nearest-codeword encoder over S; message j decodes to the j-th codeword.

    ``tie_break`` is "lowest" or "highest" (message index among nearest
    codewords), or "spread" (uniform over all nearest codewords).
    """
    if not isinstance(S, Codebook):
        S = Codebook(S)
    L = S.L
    elems = _codebook_elements(S, L, k)
    rows = []
    for b in range(1 << L):
        d = [popcount(b ^ s) for s in elems]
        dmin = min(d)
        nearest = [j for j, dj in enumerate(d) if dj == dmin]
        row = [Fraction(0)] * (1 << k)
        if tie_break == "lowest":
            row[nearest[0]] = Fraction(1)
        elif tie_break == "highest":
            row[nearest[-1]] = Fraction(1)
        elif tie_break == "spread":
            for j in nearest:
                row[j] = Fraction(1, len(nearest))
        else:
            raise ValueError(f"unknown tie_break {tie_break!r}")
        rows.append(row)
    enc = StochasticEncoder(L, k, rows)
    dec = BitwiseDecoder.deterministic(L, k, _padded_outputs(elems, k))
    return ClassicalCode(enc, dec, "avg-from-codebook", {"codebook": S.strings()})


def build_worst_code(S, k: int, exact: bool | None = None) -> ClassicalCode:
    """Encoder rows are optimal simplex weights of the Chebyshev hull LP.

    ``exact=None`` picks exact rational LPs when 2^k <= 32.
    """
    from .lp import cheb_dist_to_hull

    if not isinstance(S, Codebook):
        S = Codebook(S)
    L = S.L
    elems = _codebook_elements(S, L, k)
    if exact is None:
        exact = len(elems) <= 32
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    rows = []
    index = {s: j for j, s in enumerate(elems)}
    for b in range(1 << L):
        row = [zero] * (1 << k)
        if b in index:
            row[index[b]] = one
        else:
            res = cheb_dist_to_hull(BitString(b, L), S, exact=exact)
            for j, w in enumerate(res.weights):
                row[j] = w
        rows.append(row)
    enc = StochasticEncoder(L, k, rows)
    dec = BitwiseDecoder.deterministic(L, k, _padded_outputs(elems, k))
    return ClassicalCode(enc, dec, "worst-from-codebook", {"codebook": S.strings()})


def identity_code(L: int) -> ClassicalCode:
    rows = [[Fraction(int(m == b)) for m in range(1 << L)] for b in range(1 << L)]
    enc = StochasticEncoder(L, L, rows)
    dec = BitwiseDecoder.deterministic(L, L, list(range(1 << L)))
    return ClassicalCode(enc, dec, "identity")


def optimal_L1_code(L: int) -> ClassicalCode:
    """Average-optimal (L,1)-RAC from S = {0^L, 1^L} (majority-style decoding).

    Ties at even L are split evenly, which keeps the worst case at 1/2.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    code = build_avg_code(Codebook([0, (1 << L) - 1], L), 1, tie_break="spread")
    return ClassicalCode(code.encoder, code.decoder, "l1", code.metadata)


def optimal_LLm1_code(L: int) -> ClassicalCode:
    """Parity-based (L,L-1)-RAC.

    Inputs of even parity send their lower L-1 bits unchanged; odd-parity
    inputs first flip one uniformly random bit.  The decoder copies the
    message and reports its parity as the top bit.
    """
    if L < 2:
        raise ValueError("L must be >= 2")
    k = L - 1
    low = (1 << k) - 1
    rows = []
    for b in range(1 << L):
        c = b & low
        row = [Fraction(0)] * (1 << k)
        if parity(b) == 0:
            row[c] = Fraction(1)
        else:
            row[c] = Fraction(1, L)
            for j in range(k):
                row[c ^ (1 << j)] = Fraction(1, L)
        rows.append(row)
    outputs = [m | (parity(m) << k) for m in range(1 << k)]
    enc = StochasticEncoder(L, k, rows)
    dec = BitwiseDecoder.deterministic(L, k, outputs)
    return ClassicalCode(enc, dec, "llm1-rac")
