"""Exact combinatorial building blocks: binomials, factorial ratios,
Pochhammer products and terminating hypergeometric sums.

Everything here is a pure function returning an exact value (``int`` or
``fractions.Fraction``); nothing ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence, Union

__all__ = [
    "MAX_SERIES_TERMS",
    "NonTerminatingSeries",
    "Rational",
    "ZeroLowerParameter",
    "binomial",
    "falling_ratio",
    "hyp_terminating",
    "pochhammer",
]

Rational = Union[int, Fraction]

#: Hard cap on the number of terms a "terminating" series may take.
MAX_SERIES_TERMS = 10**6


class ZeroLowerParameter(ValueError):
    """A lower Pochhammer factor vanishes before the series terminates."""


class NonTerminatingSeries(ValueError):
    """No upper parameter terminates the series within the supported length."""


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k); 0 whenever k lies outside 0..n."""
    if n < 0:
        raise ValueError("binomial: n must be non-negative")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def falling_ratio(a: int, b: int) -> Fraction:
    """Exact a!/b!, computed as a product over the gap between a and b.

    Never forms the full factorials, so intermediates stay of size
    ~max(a, b)**|a - b| even when a, b run into the thousands.
    """
    if a < 0 or b < 0:
        raise ValueError("falling_ratio: arguments must be non-negative")
    if a >= b:
        prod = 1
        for i in range(b + 1, a + 1):
            prod *= i
        return Fraction(prod)
    return Fraction(1) / falling_ratio(b, a)


def pochhammer(x: Rational, n: int) -> Rational:
    """Rising product x(x+1)...(x+n-1); the empty product (n = 0) is 1."""
    if n < 0:
        raise ValueError("pochhammer: n must be non-negative")
    out: Rational = 1
    for i in range(n):
        out = out * (x + i)
    return out


def _nonpos_int(x: Rational) -> int | None:
    """Return n >= 0 such that x == -n, or None if x is not one."""
    fx = Fraction(x)
    if fx <= 0 and fx.denominator == 1:
        return -int(fx)
    return None


def hyp_terminating(
    upper: Sequence[Rational], lower: Sequence[Rational], z: Rational
) -> Fraction:
    """Exact value of a terminating generalized hypergeometric series.

    Termination comes from the upper parameter closest to zero among the
    non-positive integers: with that parameter equal to -n the series is
    the finite sum over j = 0..n of

        prod_i (upper_i)_j / prod_i (lower_i)_j * z**j / j!

    Raises ZeroLowerParameter if some lower parameter -m vanishes at a term
    the sum still needs (m < n), and NonTerminatingSeries if no upper
    parameter terminates the sum within MAX_SERIES_TERMS.
    """
    ns = [m for m in map(_nonpos_int, upper) if m is not None]
    if not ns:
        raise NonTerminatingSeries(
            "hyp_terminating: no non-positive-integer upper parameter"
        )
    n = min(ns)
    if n > MAX_SERIES_TERMS:
        raise NonTerminatingSeries(
            f"hyp_terminating: series needs {n + 1} terms (cap {MAX_SERIES_TERMS})"
        )
    for lo in lower:
        m = _nonpos_int(lo)
        if m is not None and m < n:
            raise ZeroLowerParameter(
                f"hyp_terminating: lower parameter {lo} vanishes at term {m + 1} "
                f"but the series terminates only at term {n}"
            )
    total = Fraction(1)
    term = Fraction(1)
    for j in range(n):
        num: Rational = 1
        for up in upper:
            num = num * (up + j)
        den: Rational = j + 1
        for lo in lower:
            den = den * (lo + j)
        term = term * num * z / den
        total += term
    return total
