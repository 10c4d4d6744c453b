"""Closed-form bounds and optima for (L,k)-RACs and QRACs."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

PROVED_UPPER = "proved-upper"
CONJECTURED_UPPER = "conjectured-upper"
CLOSED_FORM_OPTIMUM = "closed-form-optimum"
ACHIEVABLE = "achievable-value"

BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200


def _check_lk(L: int, k: int) -> None:
    if not (isinstance(L, int) and isinstance(k, int) and 1 <= k <= L):
        raise ValueError(f"need integers 1 <= k <= L, got (L, k) = ({L}, {k})")


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise ValueError(f"p = {p} outside [0, 1]")
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy_inverse_upper(y: float) -> float:
    """The p in [1/2, 1] with H2(p) = y, by bisection."""
    if not 0 <= y <= 1:
        raise ValueError(f"y = {y} outside [0, 1]")
    if y == 0:
        return 1.0
    if y == 1:
        return 0.5
    lo, hi = 0.5, 1.0  # H2 decreases from 1 to 0 on this bracket
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) > y:
            lo = mid
        else:
            hi = mid
        if hi - lo < BISECTION_TOL:
            break
    return 0.5 * (lo + hi)


def _clamp(v: float) -> tuple[float, bool]:
    return (1.0, True) if v > 1 else (v, False)


def nayak_bound(L: int, k: int) -> float:
    """H2^{-1}(1 - k/L): worst-case bound shared by RACs and QRACs."""
    _check_lk(L, k)
    return entropy_inverse_upper(1 - k / L)


def nayak_explicit_bound(L: int, k: int) -> float:
    """The looser 1/2 + sqrt(2 ln2 k / L)/2, clamped to 1."""
    _check_lk(L, k)
    return _clamp(0.5 + 0.5 * math.sqrt(2 * math.log(2) * k / L))[0]


def mancinska_avg_bound(L: int, k: int) -> float:
    _check_lk(L, k)
    return _clamp(0.5 + 0.5 * math.sqrt(2 ** (k - 1) / L))[0]


def conjectured_worst_qrac_bound(L: int, k: int) -> float:
    _check_lk(L, k)
    return 0.5 + 0.5 * math.sqrt(k / L)


def covering_radius_H(L: int, k: int) -> int:
    """Smallest h with sum_{l<=h} C(L, l) >= 2^(L-k)."""
    _check_lk(L, k)
    target = 1 << (L - k)
    total = 0
    for h in range(L + 1):
        total += comb(L, h)
        if total >= target:
            return h
    raise AssertionError("unreachable: the full ball has 2^L points")


def closed_form_avg_rac_bound(L: int, k: int) -> Fraction:
    """Layer-counting upper bound on the average success of an (L,k)-RAC."""
    H = covering_radius_H(L, k)
    inner = sum(h * comb(L, h) for h in range(H))
    rest = (1 << (L - k)) - sum(comb(L, h) for h in range(H))
    return 1 - Fraction(inner + H * rest, L * (1 << (L - k)))


def l1_avg_optimum(L: int) -> Fraction:
    if L < 1:
        raise ValueError("L must be >= 1")
    return Fraction(1, 2) + Fraction(comb(L - 1, L // 2), 1 << L)


def llm1_values(L: int) -> tuple[Fraction, Fraction, float]:
    """(classical average optimum, classical worst optimum, quantum value) for k = L-1."""
    if L < 2:
        raise ValueError("L must be >= 2")
    return (
        1 - Fraction(1, 2 * L),
        1 - Fraction(1, L),
        0.5 + 0.5 * math.sqrt((L - 1) / L),
    )


@dataclass(frozen=True)
class LiabotroValue:
    value: float
    classical_valid: bool
    quantum_valid: bool

    def __float__(self) -> float:
        return self.value


def liabotro_value(L: int, k: int) -> LiabotroValue:
    """1/2 + sqrt(1/((2^k - 1) L))/2, with validity flags for both regimes."""
    if L < 1 or k < 1:
        raise ValueError(f"need L, k >= 1, got ({L}, {k})")
    v = 0.5 + 0.5 * math.sqrt(1 / ((2**k - 1) * L))
    return LiabotroValue(v, L < 2**k, L < 4**k)


@dataclass(frozen=True)
class BoundEntry:
    label: str
    value: float | Fraction
    kind: str
    clamped: bool = False
    note: str = ""


@dataclass
class BoundReport:
    L: int
    k: int
    covering_radius: int
    entries: list[BoundEntry] = field(default_factory=list)

    def get(self, label: str) -> BoundEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    def to_rows(self) -> list[dict]:
        from .serialize import format_number

        return [
            {
                "L": self.L,
                "k": self.k,
                "label": e.label,
                "value": format_number(e.value),
                "kind": e.kind,
                "clamped": int(e.clamped),
                "note": e.note,
            }
            for e in self.entries
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=["L", "k", "label", "value", "kind", "clamped", "note"], lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(self.to_rows())
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {"L": self.L, "k": self.k, "covering_radius_H": self.covering_radius, "entries": self.to_rows()}
        return json.dumps(payload, indent=2)


def bound_report(L: int, k: int) -> BoundReport:
    """Every closed-form quantity that applies at (L, k)."""
    _check_lk(L, k)
    rep = BoundReport(L, k, covering_radius_H(L, k))
    add = rep.entries.append

    add(BoundEntry("nayak_worst_upper", nayak_bound(L, k), PROVED_UPPER,
                   note="H2^-1(1-k/L); RAC and QRAC worst case"))
    raw = 0.5 + 0.5 * math.sqrt(2 * math.log(2) * k / L)
    add(BoundEntry("nayak_worst_upper_explicit", min(raw, 1.0), PROVED_UPPER, raw > 1,
                   "1/2 + sqrt(2 ln2 k/L)/2"))
    raw = 0.5 + 0.5 * math.sqrt(2 ** (k - 1) / L)
    add(BoundEntry("mancinska_qrac_avg_upper", min(raw, 1.0), PROVED_UPPER, raw > 1,
                   "QRAC average (hence worst) case"))
    add(BoundEntry("conjectured_worst_qrac_bound", conjectured_worst_qrac_bound(L, k), CONJECTURED_UPPER))
    add(BoundEntry("closed_form_avg_rac_bound", closed_form_avg_rac_bound(L, k), PROVED_UPPER,
                   note=f"layer counting with H = {rep.covering_radius}"))
    if k == 1:
        add(BoundEntry("l1_rac_avg_optimum", l1_avg_optimum(L), CLOSED_FORM_OPTIMUM))
    if k == L - 1:
        avg, worst, q = llm1_values(L)
        add(BoundEntry("llm1_rac_avg_optimum", avg, CLOSED_FORM_OPTIMUM))
        add(BoundEntry("llm1_rac_worst_optimum", worst, CLOSED_FORM_OPTIMUM,
                       note="optimal if the optimal decoder can be deterministic"))
        add(BoundEntry("llm1_qrac_value", q, ACHIEVABLE, note="meets the conjectured QRAC bound"))
    if k == L:
        add(BoundEntry("trivial_identity_code", Fraction(1), CLOSED_FORM_OPTIMUM))
    lv = liabotro_value(L, k)
    if lv.quantum_valid:
        regime = "RAC and QRAC" if lv.classical_valid else "QRAC only"
        add(BoundEntry("liabotro_value", lv.value, ACHIEVABLE, note=regime))
    return rep
