"""Exact rational numbers used throughout the package.

``Q`` is :class:`gmpy2.mpq` when gmpy2 is importable and
:class:`fractions.Fraction` otherwise. Both compare equal to ints and
Fractions, so callers rarely need to care which one is active.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as Q

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover
    Q = Fraction
    BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)


def parse_rational(text) -> "Q":
    """Parse ``"57.5"``, ``"115/2"``, ints or Fractions into ``Q``."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Q(text)
    if isinstance(text, float):
        raise ValueError(f"floats are not accepted as exact amounts: {text!r}")
    if isinstance(text, Fraction):
        return Q(text.numerator, text.denominator)
    if hasattr(text, "numerator") and hasattr(text, "denominator"):
        return Q(int(text.numerator), int(text.denominator))
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    try:
        f = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
    return Q(f.numerator, f.denominator)


def as_q(x) -> "Q":
    if isinstance(x, Q):
        return x
    return parse_rational(x)


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def format_rational(x) -> str:
    """Canonical reduced ``"p/q"`` (integers as ``"n"``)."""
    x = as_q(x)
    num, den = int(x.numerator), int(x.denominator)
    if den == 1:
        return str(num)
    return f"{num}/{den}"


def lcm_of_denominators(values: Iterable) -> int:
    g = 1
    for v in values:
        g = math.lcm(g, int(as_q(v).denominator))
    return g


def is_integral(x) -> bool:
    return int(as_q(x).denominator) == 1
