"""Number formatting shared by the JSON and CSV writers.

Rationals are written as ``"p/q"`` strings and reals with 17 significant
digits, so both round-trip exactly.
"""

from __future__ import annotations

from fractions import Fraction


def format_number(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return f"{v}/1"
    return format(float(v), ".17g")


def parse_number(v):
    """Inverse of :func:`format_number`; JSON numbers come back as floats."""
    if isinstance(v, str):
        if "/" in v:
            return Fraction(v)
        return float(v)
    if isinstance(v, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(v, (int, float)):
        return float(v)
    raise TypeError(f"cannot parse number from {v!r}")


def to_float(v) -> float:
    return float(v)
