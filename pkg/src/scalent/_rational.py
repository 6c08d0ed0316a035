"""Exact rational helpers and outward-rounded interval arithmetic.

Everything that compares an irrational quantity (a base-2 logarithm, a
square root) against an exact rational goes through the interval helpers
here, so a reported inequality is certified rather than float-approximate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Union

import mpmath
import numpy as np

iv = mpmath.iv
iv.prec = 128

RationalLike = Union[int, str, Fraction]


def as_fraction(x: RationalLike) -> Fraction:
    """Convert ints, Fractions and ``"num/den"`` strings to :class:`Fraction`.

    Floats are rejected on purpose: they would silently smuggle binary
    rounding into exact computations.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_str(x: Fraction) -> str:
    """Serialize as ``"num/den"`` (denominator always written)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def int_array(values) -> np.ndarray:
    """Integer ndarray, int64 when safe, Python-int object array otherwise."""
    arr = np.asarray(values, dtype=object)
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64)
    big = max(abs(int(v)) for v in arr.flat)
    if big < 2**62:
        return arr.astype(np.int64)
    return arr


def is_power_of_two_fraction(x: Fraction) -> bool:
    return x.numerator == 1 and x.denominator & (x.denominator - 1) == 0


def log2_int_exact(k: int) -> Optional[int]:
    """log2(k) when k is a power of two, else None."""
    if k >= 1 and k & (k - 1) == 0:
        return k.bit_length() - 1
    return None


# -- intervals ---------------------------------------------------------------

def ival(x) -> "mpmath.iv.mpf":
    """Tight enclosure of an exact rational (or int / interval passthrough)."""
    if isinstance(x, type(iv.mpf(0))):
        return x
    f = as_fraction(x)
    if f.denominator == 1:
        return iv.mpf(f.numerator)
    return iv.mpf(f.numerator) / iv.mpf(f.denominator)


def ilog2(x) -> "mpmath.iv.mpf":
    f = as_fraction(x)
    if f <= 0:
        raise ValueError("log2 of a non-positive number")
    exact = None
    if f.denominator == 1:
        exact = log2_int_exact(f.numerator)
    elif f.numerator == 1:
        e = log2_int_exact(f.denominator)
        exact = None if e is None else -e
    if exact is not None:
        return iv.mpf(exact)
    return iv.log(ival(f)) / iv.log(iv.mpf(2))


def isqrt_ival(x) -> "mpmath.iv.mpf":
    f = as_fraction(x)
    if f < 0:
        raise ValueError("sqrt of a negative number")
    return iv.sqrt(ival(f))


def certified_le(a, b) -> Optional[bool]:
    """``a <= b`` for interval enclosures: True/False when decided, else None."""
    a, b = ival(a), ival(b)
    if a.b <= b.a:
        return True
    if a.a > b.b:
        return False
    return None


def certified_lt(a, b) -> Optional[bool]:
    a, b = ival(a), ival(b)
    if a.b < b.a:
        return True
    if a.a >= b.b:
        return False
    return None


def _ends(x):
    a, b = ival(x)._mpi_
    return mpmath.mpf(a), mpmath.mpf(b)


def mid(x) -> float:
    a, b = _ends(x)
    return float((a + b) / 2)


def lo(x) -> float:
    """A float not above the lower end (outward rounded)."""
    a = float(_ends(x)[0])
    return math.nextafter(a, -math.inf) if math.isfinite(a) else a


def hi(x) -> float:
    """A float not below the upper end (outward rounded)."""
    b = float(_ends(x)[1])
    return math.nextafter(b, math.inf) if math.isfinite(b) else b
