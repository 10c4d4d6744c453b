"""Bit strings, distances and the hypercube symmetry group.

Bit-index convention: a string is written ``b_{L-1} ... b_1 b_0`` with
``b_0`` the least significant bit of the underlying integer.  So
``BitString.from_str("011")`` has ``b_0 = 1, b_1 = 1, b_2 = 0`` and value 3.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_LENGTH = 24
REAL_TOL = 1e-12


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True, order=True)
class BitString:
    """Fixed-length binary word stored as an integer."""

    value: int
    length: int

    def __post_init__(self):
        if not 0 <= self.length <= MAX_LENGTH:
            raise ValueError(f"length must be in [0, {MAX_LENGTH}], got {self.length}")
        if not 0 <= self.value < (1 << self.length) or (self.length == 0 and self.value):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_str(cls, text: str) -> BitString:
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a binary string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> BitString:
        """Build from ``(b_0, b_1, ..., b_{L-1})``."""
        value = 0
        for i, bit in enumerate(bits):
            if bit not in (0, 1):
                raise ValueError(f"bit {i} is {bit!r}, expected 0 or 1")
            value |= bit << i
        return cls(value, len(bits))

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        return (self.value >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: BitString) -> BitString:
        _check_same_length(self, other)
        return BitString(self.value ^ other.value, self.length)

    @property
    def bits(self) -> tuple[int, ...]:
        """Digits in index order ``(b_0, ..., b_{L-1})``."""
        return tuple((self.value >> i) & 1 for i in range(self.length))

    @property
    def weight(self) -> int:
        return popcount(self.value)


def _check_same_length(a: BitString, b: BitString) -> None:
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} != {b.length}")


def _as_bitstring(x: BitString | str) -> BitString:
    return BitString.from_str(x) if isinstance(x, str) else x


def hamming(a: BitString | str, b: BitString | str) -> int:
    a, b = _as_bitstring(a), _as_bitstring(b)
    _check_same_length(a, b)
    return popcount(a.value ^ b.value)


def relative_hamming(a: BitString | str, b: BitString | str) -> Fraction:
    a, b = _as_bitstring(a), _as_bitstring(b)
    if a.length == 0:
        raise ValueError("relative Hamming distance needs L >= 1")
    return Fraction(hamming(a, b), a.length)


def chebyshev(x: Sequence, y: Sequence):
    """max_i |x_i - y_i|; exact when both inputs are rational."""
    if isinstance(x, BitString):
        x = x.bits
    if isinstance(y, BitString):
        y = y.bits
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} != {len(y)}")
    if not len(x):
        return 0
    return max(abs(xi - yi) for xi, yi in zip(x, y))


def parity(b: BitString | str | int) -> int:
    if isinstance(b, str):
        b = BitString.from_str(b)
    value = b.value if isinstance(b, BitString) else b
    return popcount(value) & 1


def all_bitstrings(L: int) -> Iterator[BitString]:
    """All of {0,1}^L in increasing integer order."""
    for v in range(1 << L):
        yield BitString(v, L)


def check_point(coords: Sequence[float], tol: float = REAL_TOL) -> tuple:
    """Validate a point of [0,1]^L and return it as a tuple."""
    coords = tuple(coords)
    for i, c in enumerate(coords):
        if not -tol <= c <= 1 + tol:
            raise ValueError(f"coordinate {i} = {c} outside [0, 1]")
    return coords


class Codebook:
    """A duplicate-free set of length-L bit strings, held in sorted order."""

    __slots__ = ("L", "values")

    def __init__(self, elements: Iterable, L: int | None = None):
        vals = []
        for e in elements:
            if isinstance(e, str):
                e = BitString.from_str(e)
            if isinstance(e, BitString):
                if L is None:
                    L = e.length
                elif e.length != L:
                    raise ValueError(f"length mismatch in codebook: {e.length} != {L}")
                vals.append(e.value)
            else:
                if L is None:
                    raise ValueError("integer elements need an explicit L")
                vals.append(int(e))
        if L is None:
            raise ValueError("cannot infer L from an empty codebook")
        if len(set(vals)) != len(vals):
            raise ValueError("duplicate codewords")
        for v in vals:
            if not 0 <= v < (1 << L):
                raise ValueError(f"codeword {v} does not fit in {L} bits")
        self.L = L
        self.values = tuple(sorted(vals))

    @classmethod
    def even_parity(cls, L: int) -> Codebook:
        return cls((v for v in range(1 << L) if not popcount(v) & 1), L)

    @classmethod
    def full(cls, L: int) -> Codebook:
        return cls(range(1 << L), L)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[BitString]:
        return (BitString(v, self.L) for v in self.values)

    def __contains__(self, b) -> bool:
        if isinstance(b, str):
            b = BitString.from_str(b)
        return b.value in self.values if isinstance(b, BitString) else b in self.values

    def __eq__(self, other) -> bool:
        return isinstance(other, Codebook) and (self.L, self.values) == (other.L, other.values)

    def __lt__(self, other: Codebook) -> bool:
        return self.values < other.values

    def __hash__(self) -> int:
        return hash((self.L, self.values))

    def __repr__(self) -> str:
        return f"Codebook([{', '.join(repr(str(b)) for b in self)}])"

    def strings(self) -> list[str]:
        return [str(b) for b in self]

    def translate(self, t: int) -> Codebook:
        return Codebook((v ^ t for v in self.values), self.L)

    def permute(self, perm: Sequence[int]) -> Codebook:
        """Send coordinate i to coordinate perm[i]."""
        return Codebook((permute_bits(v, perm) for v in self.values), self.L)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)


def permute_bits(v: int, perm: Sequence[int]) -> int:
    out = 0
    for i, p in enumerate(perm):
        out |= ((v >> i) & 1) << p
    return out


def _bit_matrix(values: Sequence[int], L: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    return ((arr[:, None] >> np.arange(L)) & 1).astype(np.int64)


def canonical_form(S: Codebook) -> Codebook:
    """Lexicographically least member of the orbit of S under coordinate
    permutations and XOR translations.

    The least orbit member always contains 0, so only translations by
    codewords are tried; each is combined with all L! permutations. Cost is
    |S| * L! * |S|, fine up to L = 8 or so.
    """
    L = S.L
    if not len(S) or L == 0:
        return S
    perms = np.array(list(itertools.permutations(range(L))), dtype=np.int64)
    weights = np.left_shift(1, perms)  # weight of coordinate i under perm -> 2**perm[i]
    best = None
    for t in S.values:
        bits = _bit_matrix([v ^ t for v in S.values], L)  # (|S|, L)
        images = np.sort(bits @ weights.T, axis=0).T  # (L!, |S|), each row sorted
        order = np.lexsort(images.T[::-1])
        cand = tuple(int(x) for x in images[order[0]])
        if best is None or cand < best:
            best = cand
    return Codebook(best, L)


def hamming_matrix(L: int) -> np.ndarray:
    """(2^L, 2^L) table of pairwise Hamming distances."""
    v = np.arange(1 << L, dtype=np.int64)
    x = v[:, None] ^ v[None, :]
    count = np.zeros_like(x)
    for i in range(L):
        count += (x >> i) & 1
    return count.astype(np.int32)
