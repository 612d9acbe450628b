"""Scalar backend helpers.

Every routine in the package is written against plain arithmetic operators, so it
runs unchanged on :class:`fractions.Fraction` (exact mode) or ``float``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[Fraction, float]

FLOAT_TOL = 1e-12


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def to_exact(x) -> Fraction:
    """Convert ints, decimal/ratio strings and floats to a Fraction.

    Floats go through ``repr`` so that 0.1 becomes 1/10 rather than the binary
    expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def to_float(x) -> float:
    if isinstance(x, str):
        return float(Fraction(x.strip()))
    return float(x)


def parse_scalar(text, exact: bool = True) -> Scalar:
    return to_exact(text) if exact else to_float(text)


def fmt(x) -> Union[str, float]:
    """JSON-friendly form: rationals as "p/q" strings, floats unchanged."""
    if isinstance(x, Rational):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(x)


def exact_sqrt(x: Fraction):
    """Rational square root of a non-negative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt(x):
    """Square root that stays exact when it can."""
    if is_exact(x):
        r = exact_sqrt(x)
        if r is not None:
            return r
    return math.sqrt(x)


def is_zero(x, tol: float = FLOAT_TOL) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= tol


def equal(a, b, rel: float = FLOAT_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def magnitude(x):
    """|x|, kept exact for rationals."""
    return abs(Fraction(x)) if is_exact(x) else abs(float(x))
