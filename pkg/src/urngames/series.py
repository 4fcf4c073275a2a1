"""Truncated bivariate power-series algebra and machine verification.

A :class:`BivariateSeries` stores exact coefficients c[a, b] of the
monomials z^(-a) u^(-b); exponents are tracked on the window
-2 <= a, b <= order, so a couple of positive powers of z and u are kept
around as canaries for boundary mistakes.

``apply_D`` applies, term by term, the second-order operator

    D = (1/z + 1/u)
        - (1/u) (u + z(2 + u)) d/dz
        - (1 + u) d/du
        - z(z - 1) d2/dz2  -  2 z(u - 1) d2/dzdu  -  u(u - 1) d2/du2.

Applied to the probability-coefficient series of the put-back games, D
collapses the game recursion cell by cell: what survives is a pure
boundary source, 1/u^k-shaped for rule III and 1/z^k-shaped for rule IV.
``verify_pde`` checks exactly that, reporting every residual coefficient
so that a systematic pattern (e.g. a sign slip in the mixed term) is
visible rather than a bare boolean.

Every operator step shifts exponents by at most one in each variable, so
coefficients of the output are guaranteed exact on 0 <= a, b <= order - 2;
that trusted window is asserted, not assumed.

The module also carries the finite summation identities used to certify
normalization: an alternating binomial sum, its companion from the k = 1
expansion, and the unit-argument 3F2 reduction
    3F2(a, b, -n; d, a+b-d-n+1; 1) = (d-a)_n (d-b)_n / ((d)_n (d-a-b)_n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Tuple, Union

from .closed_form import Rule, UnsupportedRule, p2, p_rule3, p_rule4
from .combinatorics import Rational, binomial, hyp_terminating, pochhammer

__all__ = [
    "BivariateSeries",
    "MIN_EXPONENT",
    "PdeResidualReport",
    "WindowTooSmall",
    "apply_D",
    "f_series_from_pmf",
    "normalization_from_unit_identity",
    "series_from_pmf",
    "verify_identity_3F2_unit",
    "verify_identity_C1",
    "verify_identity_bio2",
    "verify_pde",
]

#: Positive powers of z and u are tracked down to this exponent.
MIN_EXPONENT = -2

ExponentPair = Tuple[int, int]
CoeffMap = Mapping[ExponentPair, Union[int, Fraction]]


class WindowTooSmall(ValueError):
    """The truncation order is too small to trust the requested check."""


class BivariateSeries:
    """Sparse exact coefficients of sum c[a,b] z^(-a) u^(-b), |window| = order.

    Zero coefficients are never stored; entries outside the tracked window
    are dropped on construction.  Instances are treated as immutable: all
    arithmetic returns new series of the same order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, items: CoeffMap | Iterable = ()) -> None:
        if order < 1:
            raise ValueError("BivariateSeries: order must be >= 1")
        self.order = order
        coeffs: dict[ExponentPair, Fraction] = {}
        pairs = items.items() if isinstance(items, Mapping) else items
        for (a, b), c in pairs:
            if MIN_EXPONENT <= a <= order and MIN_EXPONENT <= b <= order:
                c = Fraction(c)
                if c:
                    coeffs[(a, b)] = c
        self.coeffs = coeffs

    def get(self, a: int, b: int) -> Fraction:
        return self.coeffs.get((a, b), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"BivariateSeries(order={self.order}, terms={len(self.coeffs)})"

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        if self.order != other.order:
            raise ValueError("series orders differ")
        merged = dict(self.coeffs)
        for key, c in other.coeffs.items():
            merged[key] = merged.get(key, Fraction(0)) + c
        return BivariateSeries(self.order, merged)

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self + other.scale(-1)

    def scale(self, factor: Rational) -> "BivariateSeries":
        factor = Fraction(factor)
        return BivariateSeries(
            self.order, {key: c * factor for key, c in self.coeffs.items()}
        )

    def mul_z(self, power: int) -> "BivariateSeries":
        """Multiply by z**power (the stored exponent a drops by power)."""
        return BivariateSeries(
            self.order, {(a - power, b): c for (a, b), c in self.coeffs.items()}
        )

    def mul_u(self, power: int) -> "BivariateSeries":
        """Multiply by u**power."""
        return BivariateSeries(
            self.order, {(a, b - power): c for (a, b), c in self.coeffs.items()}
        )

    def diff_z(self) -> "BivariateSeries":
        """d/dz: z^(-a) -> -a z^(-a-1)."""
        return BivariateSeries(
            self.order, {(a + 1, b): -a * c for (a, b), c in self.coeffs.items()}
        )

    def diff_u(self) -> "BivariateSeries":
        """d/du: u^(-b) -> -b u^(-b-1)."""
        return BivariateSeries(
            self.order, {(a, b + 1): -b * c for (a, b), c in self.coeffs.items()}
        )


_SERIES_FN = {Rule.P2: p2, Rule.III: p_rule3, Rule.IV: p_rule4}


def series_from_pmf(rule: Rule, k: int, order: int) -> BivariateSeries:
    """Probability-coefficient series: c[a, b] = p^(k)(a, b), 0 <= a, b <= order."""
    if rule not in _SERIES_FN:
        raise UnsupportedRule(f"series_from_pmf: no coefficient grid for {rule.value}")
    prob = _SERIES_FN[rule]
    return BivariateSeries(
        order,
        {
            (a, b): prob(a, b, k)
            for a in range(order + 1)
            for b in range(order + 1)
        },
    )


def f_series_from_pmf(rule: Rule, k: int, order: int) -> BivariateSeries:
    """Rescaled coefficients p^(k)(a, b) * C(a+b, a)^2.

    Dividing out the all-reds-first path probability (a! b!/(a+b)!)^2 turns
    the grid into the small integers/rationals of the raw expansions, which
    is the form worth eyeballing and pinning in tests.
    """
    base = series_from_pmf(rule, k, order)
    return BivariateSeries(
        order,
        {(a, b): c * binomial(a + b, a) ** 2 for (a, b), c in base.coeffs.items()},
    )


def apply_D(series: BivariateSeries) -> BivariateSeries:
    """Apply the second-order operator D term by term.

    Exact on the trusted window 0 <= a, b <= order - 2; the outer band may
    miss contributions from coefficients beyond the truncation.
    """
    dz = series.diff_z()
    du = series.diff_u()
    dzz = dz.diff_z()
    dzu = dz.diff_u()
    duu = du.diff_u()
    out = series.mul_z(-1) + series.mul_u(-1)
    # (1/u)(u + z(2+u)) d/dz  ==  (1 + 2 z/u + z) d/dz
    out = out - (dz + dz.mul_z(1).mul_u(-1).scale(2) + dz.mul_z(1))
    out = out - (du + du.mul_u(1))
    out = out - (dzz.mul_z(2) - dzz.mul_z(1))
    out = out - (dzu.mul_z(1).mul_u(1) - dzu.mul_z(1)).scale(2)
    out = out - (duu.mul_u(2) - duu.mul_u(1))
    return out


def _source_series(rule: Rule, k: int, order: int) -> BivariateSeries:
    """Boundary source: (k+1)^2 x^(-(k+1)) - k^2 x^(-k), x = u (III) or z (IV)."""
    if rule is Rule.III:
        return BivariateSeries(order, {(0, k + 1): (k + 1) ** 2, (0, k): -(k**2)})
    return BivariateSeries(order, {(k + 1, 0): (k + 1) ** 2, (k, 0): -(k**2)})


@dataclass(frozen=True)
class PdeResidualReport:
    """Outcome of one operator check: empty mismatches means verified."""

    rule: Rule
    k: int
    order: int
    trusted_window: tuple[int, int]
    mismatches: list[tuple[int, int, Fraction, Fraction]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        head = (
            f"rule {self.rule.value}, k={self.k}, order={self.order}, "
            f"trusted a,b in [{self.trusted_window[0]}, {self.trusted_window[1]}]"
        )
        if self.passed:
            return head + ": clean"
        lines = [head + f": {len(self.mismatches)} residual coefficient(s)"]
        for a, b, got, expected in self.mismatches:
            lines.append(f"  z^-({a}) u^-({b}): got {got}, expected {expected}")
        return "\n".join(lines)


def verify_pde(rule: Rule, k: int, order: int) -> PdeResidualReport:
    """Check that D applied to the probability series equals the rule's source.

    Residuals are collected on the trusted window, plus any non-vanishing
    coefficient at positive powers of z or u (those must cancel exactly if
    the boundary rows of the distribution are right).
    """
    if rule not in (Rule.III, Rule.IV):
        raise UnsupportedRule(f"verify_pde: no operator check for rule {rule.value}")
    if k < 0:
        raise ValueError("verify_pde: k must be non-negative")
    if order < k + 3:
        raise WindowTooSmall(
            f"verify_pde: order {order} < k + 3 = {k + 3}; the source terms "
            "would fall outside the trusted window"
        )
    applied = apply_D(series_from_pmf(rule, k, order))
    source = _source_series(rule, k, order)
    residual = applied - source
    hi = order - 2
    mismatches = []
    for (a, b) in sorted(residual.coeffs):
        if a < 0 or b < 0 or (a <= hi and b <= hi):
            mismatches.append((a, b, applied.get(a, b), source.get(a, b)))
    return PdeResidualReport(rule, k, order, (0, hi), mismatches)


def verify_identity_C1(r: int, w: int) -> bool:
    """Alternating binomial sum against its closed product form.

    sum_{n=0}^{r} (-1)^(r+n) (r+w+n)! / ((1+n) w! (r-n)! (n!)^2)
      ==  C(r+w, r)^2 * w / ((r+1)(r+w)),   r, w >= 1.
    """
    if r < 1 or w < 1:
        raise ValueError("verify_identity_C1: requires r, w >= 1")
    lhs = Fraction(0)
    for n in range(r + 1):
        sign = -1 if (r + n) % 2 else 1
        lhs += Fraction(
            sign * factorial(r + w + n),
            (1 + n) * factorial(w) * factorial(r - n) * factorial(n) ** 2,
        )
    rhs = Fraction(binomial(r + w, r) ** 2 * w, (r + 1) * (r + w))
    return lhs == rhs


def verify_identity_bio2(r: int, w: int) -> bool:
    """Companion alternating sum:

    sum_{n=1}^{r} (-1)^n C(r+2, n+2) C(r+w+n, n-1)
      ==  (-1)^r (r+w-2)! / ((r-1)! (w-1)!),   r, w >= 1.
    """
    if r < 1 or w < 1:
        raise ValueError("verify_identity_bio2: requires r, w >= 1")
    lhs = sum(
        (-1 if n % 2 else 1) * binomial(r + 2, n + 2) * binomial(r + w + n, n - 1)
        for n in range(1, r + 1)
    )
    rhs = (-1 if r % 2 else 1) * binomial(r + w - 2, r - 1)
    return lhs == rhs


def verify_identity_3F2_unit(a: Rational, b: Rational, n: int, d: Rational) -> bool:
    """Unit-argument reduction of a terminating 3F2 to Pochhammer ratios."""
    if n < 0:
        raise ValueError("verify_identity_3F2_unit: n must be non-negative")
    lhs = hyp_terminating([a, b, -n], [d, a + b - d - n + 1], 1)
    rhs = Fraction(pochhammer(d - a, n)) * Fraction(pochhammer(d - b, n)) / (
        Fraction(pochhammer(d, n)) * Fraction(pochhammer(d - a - b, n))
    )
    return lhs == rhs


def normalization_from_unit_identity(r: int, w: int) -> Fraction:
    """Total rule-III mass over k, via the unit-argument 3F2 route.

    The per-k sum collapses to a single terminating 3F2 at unit argument
    with parameters (1, 1, -w; 2+r, 1-r-w); multiplying by the exact
    prefactor must give 1.  Returns the assembled value so callers can see
    any defect, not just a boolean.
    """
    if r < 1 or w < 1:
        raise ValueError("normalization_from_unit_identity: requires r, w >= 1")
    prefactor = Fraction(
        r * factorial(w) * factorial(r) * (r + w + 1), factorial(r + w)
    ) * Fraction(factorial(r + w - 1), factorial(w) * factorial(r + 1))
    return prefactor * hyp_terminating([1, 1, -w], [2 + r, 1 - r - w], 1)
