"""Closed-form remaining-ball distributions for the two-color urn games.

Every game starts from r red and w white balls in a box.  The put-back
mechanic (rules "iii", "iv" and "p3") works per removal as: draw a ball
uniformly; a white draw is discarded, a red draw goes back into the box and
a second uniform draw is discarded whatever its color.  One removal step
therefore takes a red out with probability r^2/(r+w)^2 and a white out with
probability w(2r+w)/(r+w)^2.

Supported variants:

* P2  -- plain uniform removals (no put-back), stop when the reds are gone;
         k counts the surviving whites,
           p2(r, w, k) = r (r+w-k-1)! w! / ((r+w)! (w-k)!).
* P3  -- put-back removals down to a single ball; the scalar of interest is
         the chance the survivor is white, w / ((w+r)(1+r)).
* III -- put-back removals, stop when the reds are gone (k whites left),
           p_rule3(r, w, k) = k! r! (r+w+1) / (r+k+1)!
                              * r w! (r+w-k-1)! / ((r+w)! (w-k)!).
* IV  -- put-back removals, stop when the whites are gone (k reds left),
           p_rule4(r, w, k) = (2k+1) r! (r+w+k)! / ((r+k+1)! (r+w)!)
                              * w r! (r+w-k-1)! / ((r+w)! (r-k)!).
* P4  -- a different discard-until-the-color-changes protocol, handled by
         the simulator only (its answer is a constant 1/2).

Degenerate inputs are resolved by explicit integer case analysis rather
than by limits: with no reds, III leaves all whites (and P2 behaves the
same way); with no whites, IV leaves all reds; the opposite boundaries pin
k to 0; values outside the support are exactly 0.

All probabilities are exact ``Fraction`` values.  The generating functions
are exact evaluations at rational points via terminating hypergeometric
sums, and the maxima / asymptotic helpers stay in exact arithmetic too.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial, isqrt

from .combinatorics import Rational, falling_ratio, hyp_terminating

__all__ = [
    "PmfOverK",
    "Regime",
    "Rule",
    "UnsupportedRule",
    "UrnSpec",
    "argmax_rule3",
    "argmax_rule4",
    "asym_rule3",
    "asym_rule4",
    "gen_fn_p2",
    "gen_fn_rule3",
    "gen_fn_rule4",
    "p2",
    "p3_last_white",
    "p_rule3",
    "p_rule4",
    "pmf",
]


class Rule(Enum):
    """Game variant; the value doubles as the CLI spelling."""

    P2 = "p2"
    P3 = "p3"
    III = "iii"
    IV = "iv"
    P4 = "p4"


class Regime(Enum):
    """Which initial count is taken large in an asymptotic formula."""

    LARGE_R = "large-r"
    LARGE_W = "large-w"


class UnsupportedRule(ValueError):
    """The requested operation is not defined for this game variant."""


@dataclass(frozen=True)
class UrnSpec:
    """Initial ball counts plus the game variant.

    For rule P4 the fields hold the two colors of that game (r black
    balls, w white balls).
    """

    r: int
    w: int
    rule: Rule

    def __post_init__(self) -> None:
        if self.r < 0 or self.w < 0:
            raise ValueError("UrnSpec: ball counts must be non-negative")
        if self.rule is Rule.P3 and self.r == 0 and self.w == 0:
            raise ValueError("UrnSpec: rule p3 needs at least one ball")


@dataclass(frozen=True)
class PmfOverK:
    """Exact distribution of the remaining-ball count k.

    The support is k = 0..w for rules P2 and III and k = 0..r for rule IV;
    probs[k] is the exact probability of ending with k balls left over.
    """

    spec: UrnSpec
    probs: tuple[Fraction, ...]

    def argmax_set(self) -> set[int]:
        top = max(self.probs)
        return {k for k, p in enumerate(self.probs) if p == top}

    def as_floats(self) -> list[float]:
        return [float(p) for p in self.probs]


def _check_counts(r: int, w: int, k: int = 0) -> None:
    if r < 0 or w < 0 or k < 0:
        raise ValueError("ball counts and k must be non-negative")


def _delta(i: int, j: int) -> Fraction:
    return Fraction(1 if i == j else 0)


def p2(r: int, w: int, k: int) -> Fraction:
    """No-put-back game: probability that k whites remain when reds run out."""
    _check_counts(r, w, k)
    if r == 0:
        return _delta(w, k)
    if k > w:
        return Fraction(0)
    return r * falling_ratio(r + w - k - 1, r + w) * falling_ratio(w, w - k)


def p3_last_white(r: int, w: int) -> Fraction:
    """Put-back game down to one ball: probability the survivor is white."""
    _check_counts(r, w)
    if r == 0 and w == 0:
        return Fraction(0)
    return Fraction(w, (w + r) * (1 + r))


def p_rule3(r: int, w: int, k: int) -> Fraction:
    """Put-back game stopping when reds run out: k whites remain."""
    _check_counts(r, w, k)
    if r == 0:
        return _delta(w, k)
    if w == 0:
        return _delta(0, k)
    if k > w:
        return Fraction(0)
    return (
        factorial(k)
        * (r + w + 1)
        * r
        * falling_ratio(r, r + k + 1)
        * falling_ratio(w, w - k)
        * falling_ratio(r + w - k - 1, r + w)
    )


def p_rule4(r: int, w: int, k: int) -> Fraction:
    """Put-back game stopping when whites run out: k reds remain."""
    _check_counts(r, w, k)
    if w == 0:
        return _delta(r, k)
    if r == 0:
        return _delta(0, k)
    if k > r:
        return Fraction(0)
    return (
        (2 * k + 1)
        * w
        * falling_ratio(r + w + k, r + w)
        * falling_ratio(r, r + k + 1)
        * falling_ratio(r, r - k)
        * falling_ratio(r + w - k - 1, r + w)
    )


_PMF_FN = {Rule.P2: p2, Rule.III: p_rule3, Rule.IV: p_rule4}


def pmf(spec: UrnSpec) -> PmfOverK:
    """Full exact distribution over k for a distribution-valued rule."""
    if spec.rule not in _PMF_FN:
        raise UnsupportedRule(
            f"rule {spec.rule.value} has a scalar answer, not a distribution over k"
        )
    fn = _PMF_FN[spec.rule]
    top = spec.r if spec.rule is Rule.IV else spec.w
    return PmfOverK(spec, tuple(fn(spec.r, spec.w, k) for k in range(top + 1)))


def gen_fn_p2(r: int, w: int, z: Rational) -> Fraction:
    """sum_k p2(r, w, k) z^k in closed form (one 2F1 term)."""
    _check_counts(r, w)
    if r < 1:
        raise ValueError("gen_fn_p2: requires r >= 1")
    return Fraction(r, r + w) * hyp_terminating([1, -w], [1 - r - w], z)


def gen_fn_rule3(r: int, w: int, z: Rational) -> Fraction:
    """sum_k p_rule3(r, w, k) z^k in closed form (one 3F2 term)."""
    _check_counts(r, w)
    if r < 1 or w < 1:
        raise ValueError("gen_fn_rule3: requires r >= 1 and w >= 1")
    pref = Fraction((1 + r + w) * r, (1 + r) * (r + w))
    return pref * hyp_terminating([1, 1, -w], [2 + r, 1 - r - w], z)


def gen_fn_rule4(r: int, w: int, z: Rational) -> Fraction:
    """sum_k p_rule4(r, w, k) z^k in closed form (two 3F2 terms)."""
    _check_counts(r, w)
    if r < 1 or w < 1:
        raise ValueError("gen_fn_rule4: requires r >= 1 and w >= 1")
    first = hyp_terminating([1, -r, 1 + r + w], [2 + r, 1 - r - w], z)
    second = hyp_terminating([2, 1 - r, 2 + r + w], [3 + r, 2 - r - w], z)
    second_pref = Fraction(2 * r * (1 + r + w), (2 + r) * (r + w - 1))
    return Fraction(w, (1 + r) * (r + w)) * (first + second_pref * z * second)


def argmax_rule3(r: int, w: int) -> set[int]:
    """Set of k maximizing p_rule3(r, w, .): all of w survives when r = 0,
    otherwise the distribution is strictly decreasing so k = 0 wins."""
    _check_counts(r, w)
    return {w} if r == 0 else {0}


def argmax_rule4(r: int, w: int) -> set[int]:
    """Set of k maximizing p_rule4(r, w, .).

    Away from the boundaries the mode sits at the critical value
    k0 = sqrt((1+r)(r+w) / (2w-1)): two tied maxima {k0-1, k0} when k0 is a
    positive integer, else the single point floor(k0).  The integer test is
    exact rational arithmetic, never floating point.
    """
    _check_counts(r, w)
    if w == 0:
        return {r}
    if r == 0:
        return {0}
    if w == 1:
        return {r}
    k0_sq = Fraction((1 + r) * (r + w), 2 * w - 1)
    if k0_sq.denominator == 1:
        root = isqrt(k0_sq.numerator)
        if root * root == k0_sq.numerator:
            return {root - 1, root}
    # floor(sqrt(p/q)) == isqrt(p*q) // q
    return {isqrt(k0_sq.numerator * k0_sq.denominator) // k0_sq.denominator}


def asym_rule3(r: int, w: int, k: int, regime: Regime) -> Fraction:
    """Leading asymptotic term of p_rule3; the caller picks sane sizes.

    LARGE_R: k! (delta_{k,0} + w(w-1)...(w-k+1)) / r^(2k), the product being
    0 when empty.  LARGE_W: k! r r! / (r+k+1)!, independent of w.
    """
    _check_counts(r, w, k)
    if regime is Regime.LARGE_R:
        if k == 0:
            return Fraction(1)
        prod = 1
        for i in range(k):
            prod *= w - i
        return Fraction(factorial(k) * prod, r ** (2 * k))
    return factorial(k) * r * falling_ratio(r, r + k + 1)


def asym_rule4(r: int, w: int, k: int, regime: Regime) -> Fraction:
    """Leading asymptotic term of p_rule4.

    LARGE_R: (2k+1) w / r^2 for every k.  LARGE_W: (2k+1) (r!)^2 /
    ((r-k)! (r+k+1)!), independent of w (0 outside the support k <= r).
    """
    _check_counts(r, w, k)
    if regime is Regime.LARGE_R:
        return Fraction((2 * k + 1) * w, r * r)
    if k > r:
        return Fraction(0)
    return (2 * k + 1) * falling_ratio(r, r - k) * falling_ratio(r, r + k + 1)
