"""Independent exact evaluators used to certify the closed forms.

Two routes that never touch the closed-form module's formulas:

* ``dp_eval`` sweeps the total-probability recursion directly.  For the
  put-back games the step weights are r^2/(r+w)^2 toward (r-1, w) and
  (w^2 + 2rw)/(r+w)^2 toward (r, w-1); the plain game uses r/(r+w) and
  w/(r+w).  Boundary rows/columns carry the indicator values of each rule.

* ``g_recursion`` evaluates the integer-valued combinatorial count
  g(r, s) defined by summing the white-step weights 2*r_i + (k + s + 1 - i)
  over all weakly decreasing red-count profiles r >= r_1 >= ... >= r_s >= 1.
  It satisfies g(r, s) - g(r-1, s) = (2r + k + s) g(r, s-1), anchored by
  g(1, s) = (k+s+2)!/(k+2)! and g(r, 1) = r(r+k+2); ``p_rule3_via_g``
  reassembles the rule-III probability as
  (r!)^2 k! w! / ((r+w)!)^2 * g(r, w-k).

g(r, 0) is the empty product, hence 1: that is what makes the assembly at
k = w reduce to (r! w! / (r+w)!)^2, the probability of the all-reds-first
path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .closed_form import Rule, UnsupportedRule
from .combinatorics import falling_ratio

__all__ = ["DpTable", "dp_eval", "g_recursion", "p_rule3_via_g"]


@dataclass(frozen=True)
class DpTable:
    """Dense exact table values[r][w] of one remaining-count probability."""

    rule: Rule
    k: int
    values: tuple[tuple[Fraction, ...], ...]

    def value(self, r: int, w: int) -> Fraction:
        return self.values[r][w]

    def recursion_residuals(self) -> list[tuple[int, int]]:
        """Interior cells where the filled table violates its recursion."""
        bad = []
        for r in range(1, len(self.values)):
            for w in range(1, len(self.values[0])):
                left, down = self.values[r - 1][w], self.values[r][w - 1]
                if self.rule is Rule.P2:
                    expect = Fraction(r, r + w) * left + Fraction(w, r + w) * down
                else:
                    tot_sq = (r + w) ** 2
                    expect = (
                        Fraction(r * r, tot_sq) * left
                        + Fraction(w * w + 2 * r * w, tot_sq) * down
                    )
                if self.values[r][w] != expect:
                    bad.append((r, w))
        return bad


def dp_eval(rule: Rule, k: int, rmax: int, wmax: int) -> DpTable:
    """Fill the (rmax+1) x (wmax+1) table of p^(k) by the rule's recursion."""
    if rule not in (Rule.P2, Rule.III, Rule.IV):
        raise UnsupportedRule(f"dp_eval: no recursion table for rule {rule.value}")
    if k < 0 or rmax < 0 or wmax < 0:
        raise ValueError("dp_eval: k, rmax, wmax must be non-negative")
    one, zero = Fraction(1), Fraction(0)
    rows: list[list[Fraction]] = [[zero] * (wmax + 1) for _ in range(rmax + 1)]
    if rule is Rule.IV:
        for w in range(wmax + 1):  # no reds: k = 0 for sure
            rows[0][w] = one if k == 0 else zero
        for r in range(rmax + 1):  # no whites: all reds survive
            rows[r][0] = one if k == r else zero
    else:
        for w in range(wmax + 1):  # no reds: all whites survive
            rows[0][w] = one if k == w else zero
        for r in range(rmax + 1):  # no whites: k = 0 for sure
            rows[r][0] = one if k == 0 else zero
    plain = rule is Rule.P2
    for r in range(1, rmax + 1):
        row, above = rows[r], rows[r - 1]
        for w in range(1, wmax + 1):
            if plain:
                row[w] = Fraction(r, r + w) * above[w] + Fraction(w, r + w) * row[w - 1]
            else:
                tot_sq = (r + w) ** 2
                row[w] = (
                    Fraction(r * r, tot_sq) * above[w]
                    + Fraction(w * w + 2 * r * w, tot_sq) * row[w - 1]
                )
    return DpTable(rule, k, tuple(tuple(row) for row in rows))


def g_recursion(k: int, r: int, s: int) -> int:
    """Integer count g(r, s) via its recursion and boundary anchors."""
    if r < 1:
        raise ValueError("g_recursion: requires r >= 1")
    if k < 0 or s < 0:
        raise ValueError("g_recursion: k and s must be non-negative")
    if s == 0:
        return 1
    # table[rr][ss]: rows r = 1..r, columns s = 0..s
    table = [[0] * (s + 1) for _ in range(r + 1)]
    for rr in range(1, r + 1):
        table[rr][0] = 1
        if s >= 1:
            table[rr][1] = rr * (rr + k + 2)
    for ss in range(1, s + 1):
        anchor = 1
        for i in range(ss):  # (k+s+2)!/(k+2)! built incrementally
            anchor *= k + 3 + i
        table[1][ss] = anchor
    for rr in range(2, r + 1):
        for ss in range(2, s + 1):
            table[rr][ss] = table[rr - 1][ss] + (2 * rr + k + ss) * table[rr][ss - 1]
    return table[r][s]


def p_rule3_via_g(r: int, w: int, k: int) -> Fraction:
    """Reassemble the rule-III probability from the combinatorial count."""
    if r < 1:
        raise ValueError("p_rule3_via_g: requires r >= 1")
    if k < 0 or k > w:
        raise ValueError("p_rule3_via_g: requires 0 <= k <= w")
    prefactor = (
        Fraction(factorial(k) * factorial(w)) * falling_ratio(r, r + w) ** 2
    )
    return prefactor * g_recursion(k, r, w - k)
