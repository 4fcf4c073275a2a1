"""Monte Carlo engines for the urn games, reported against exact references.

The urn is represented by its two counts only; a uniform draw is one
bounded random integer in [0, r+w), with 0..w-1 read as white.  Scalar
functions (``step_removal``, ``run_game``, ``run_last_white``,
``run_problem4``) implement the protocols one removal at a time and are
the reference semantics; ``simulate`` runs the same mechanics vectorized
over all trials at once, which is what makes million-trial reports cheap.

Reproducibility contract: stream j of a run seeded with s draws from
PCG64 seeded by SeedSequence(entropy=s, spawn_key=(j,)); trials are split
evenly across streams (earlier streams take the remainder) and counts are
merged in stream order.  Identical (spec, trials, seed, streams) therefore
give bit-identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .closed_form import Rule, UnsupportedRule, UrnSpec, p3_last_white, pmf

__all__ = [
    "EmptyUrn",
    "LastBall",
    "Removal",
    "SimReport",
    "STREAM_RULE",
    "count_red_removals",
    "run_game",
    "run_last_white",
    "run_problem4",
    "simulate",
    "step_removal",
    "stream_rng",
]

STREAM_RULE = "pcg64:seedseq(entropy=seed, spawn_key=(stream,))"


class EmptyUrn(ValueError):
    """A removal was requested from an urn with no balls."""


class Removal(Enum):
    RED = "red"
    WHITE = "white"


class LastBall(Enum):
    BLACK = "black"
    WHITE = "white"


def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """The generator for one stream of a seeded run (see STREAM_RULE)."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(seq))


def step_removal(r: int, w: int, rng: np.random.Generator) -> Removal:
    """One put-back removal step.

    Draw uniformly; a white draw is removed.  A red draw goes back into the
    box and a second uniform draw (same counts) is removed whatever its
    color.  Marginals: red removed with probability r^2/(r+w)^2, white with
    w(2r+w)/(r+w)^2.
    """
    if r + w == 0:
        raise EmptyUrn("step_removal: no balls left to draw")
    if int(rng.integers(0, r + w)) < w:
        return Removal.WHITE
    if int(rng.integers(0, r + w)) < w:
        return Removal.WHITE
    return Removal.RED


def count_red_removals(r: int, w: int, steps: int, rng: np.random.Generator) -> int:
    """Vectorized tally of red outcomes over independent put-back steps."""
    if r + w == 0:
        raise EmptyUrn("count_red_removals: no balls left to draw")
    first = rng.integers(0, r + w, size=steps)
    red_first = np.flatnonzero(first >= w)
    second = rng.integers(0, r + w, size=red_first.size)
    return int(np.count_nonzero(second >= w))


def run_game(spec: UrnSpec, rng: np.random.Generator) -> int:
    """Play one game to completion; return the leftover count k."""
    r, w = spec.r, spec.w
    if spec.rule is Rule.P2:
        while r > 0:
            if int(rng.integers(0, r + w)) < w:
                w -= 1
            else:
                r -= 1
        return w
    if spec.rule is Rule.III:
        while r > 0:
            if step_removal(r, w, rng) is Removal.WHITE:
                w -= 1
            else:
                r -= 1
        return w
    if spec.rule is Rule.IV:
        while w > 0:
            if step_removal(r, w, rng) is Removal.WHITE:
                w -= 1
            else:
                r -= 1
        return r
    raise UnsupportedRule(f"run_game: rule {spec.rule.value} is not a k-game")


def run_last_white(r: int, w: int, rng: np.random.Generator) -> bool:
    """Put-back removals down to a single ball; True when it is white."""
    if r + w == 0:
        raise EmptyUrn("run_last_white: need at least one ball")
    while r + w > 1:
        if step_removal(r, w, rng) is Removal.WHITE:
            w -= 1
        else:
            r -= 1
    return w == 1


def run_problem4(m: int, n: int, rng: np.random.Generator) -> LastBall:
    """Discard-until-the-color-changes protocol on m black and n white balls.

    (i) discard a uniform draw; (ii) draw again: a different color goes
    back into the bag and the process restarts at (i), the same color is
    discarded and (ii) repeats.  Stops when one ball remains.
    """
    if m < 1 or n < 1:
        raise ValueError("run_problem4: requires m >= 1 and n >= 1")
    while m + n > 1:
        drew_black = int(rng.integers(0, m + n)) < m
        if drew_black:
            m -= 1
        else:
            n -= 1
        last_black = drew_black
        while m + n > 1:
            drew_black = int(rng.integers(0, m + n)) < m
            if drew_black != last_black:
                break  # replaced; restart at (i)
            if drew_black:
                m -= 1
            else:
                n -= 1
    return LastBall.BLACK if m == 1 else LastBall.WHITE


def _batch_removed_white(
    r: np.ndarray, w: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized put-back step over per-trial counts; True = white removed."""
    tot = r + w
    removed_white = rng.integers(0, tot) < w
    red_first = np.flatnonzero(~removed_white)
    if red_first.size:
        second = rng.integers(0, tot[red_first])
        removed_white[red_first] = second < w[red_first]
    return removed_white


def _play_batch(spec: UrnSpec, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Outcomes of `trials` games: leftover k, or 0/1 success for P3/P4."""
    r = np.full(trials, spec.r, dtype=np.int64)
    w = np.full(trials, spec.w, dtype=np.int64)
    rule = spec.rule
    if rule is Rule.P4:
        return _play_problem4_batch(spec.r, spec.w, trials, rng)
    if rule is Rule.P3:
        active = (r + w) > 1
    elif rule is Rule.IV:
        active = w > 0
    else:
        active = r > 0
    while active.any():
        idx = np.flatnonzero(active)
        ra, wa = r[idx], w[idx]
        if rule is Rule.P2:
            removed_white = rng.integers(0, ra + wa) < wa
        else:
            removed_white = _batch_removed_white(ra, wa, rng)
        wa = wa - removed_white
        ra = ra - ~removed_white
        r[idx], w[idx] = ra, wa
        if rule is Rule.P3:
            active[idx] = (ra + wa) > 1
        elif rule is Rule.IV:
            active[idx] = wa > 0
        else:
            active[idx] = ra > 0
    if rule is Rule.P3:
        return (w == 1).astype(np.int64)
    return r if rule is Rule.IV else w


def _play_problem4_batch(
    m0: int, n0: int, trials: int, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized discard protocol; 1 = last ball black."""
    if m0 < 1 or n0 < 1:
        raise ValueError("run_problem4: requires m >= 1 and n >= 1")
    m = np.full(trials, m0, dtype=np.int64)
    n = np.full(trials, n0, dtype=np.int64)
    in_run = np.zeros(trials, dtype=bool)  # False: at step (i)
    last_black = np.zeros(trials, dtype=bool)
    active = (m + n) > 1
    while active.any():
        idx = np.flatnonzero(active)
        ma, na = m[idx], n[idx]
        drew_black = rng.integers(0, ma + na) < ma
        starting = ~in_run[idx]
        same = drew_black == last_black[idx]
        discard = starting | same
        m[idx] = ma - (drew_black & discard)
        n[idx] = na - (~drew_black & discard)
        last_black[idx] = np.where(starting, drew_black, last_black[idx])
        in_run[idx] = np.where(starting, True, same)
        active[idx] = (m[idx] + n[idx]) > 1
    return (m == 1).astype(np.int64)


@dataclass(frozen=True)
class SimReport:
    """Empirical frequencies of one seeded run beside the exact reference.

    For the distribution rules (P2, III, IV) `counts[k]` tallies games that
    ended with k leftovers and sums to `trials`.  For P3/P4 `counts` holds
    the single success tally (last ball white, resp. black).
    """

    spec: UrnSpec
    trials: int
    seed: int
    streams: int
    stream_rule: str
    counts: tuple[int, ...]
    empirical: tuple[float, ...]
    exact: tuple[float, ...]
    max_abs_dev: float


def _exact_reference(spec: UrnSpec) -> tuple[float, ...]:
    if spec.rule is Rule.P3:
        return (float(p3_last_white(spec.r, spec.w)),)
    if spec.rule is Rule.P4:
        return (0.5,)
    return tuple(pmf(spec).as_floats())


def simulate(spec: UrnSpec, trials: int, seed: int, streams: int = 1) -> SimReport:
    """Run `trials` seeded games and report deviations from the exact law."""
    if trials < 1:
        raise ValueError("simulate: trials must be >= 1")
    if streams < 1:
        raise ValueError("simulate: streams must be >= 1")
    exact = _exact_reference(spec)
    if spec.rule in (Rule.P3, Rule.P4):
        bins = 1
    elif spec.rule is Rule.IV:
        bins = spec.r + 1
    else:
        bins = spec.w + 1
    counts = np.zeros(bins, dtype=np.int64)
    base, extra = divmod(trials, streams)
    for j in range(streams):
        chunk = base + (1 if j < extra else 0)
        if chunk == 0:
            continue
        outcomes = _play_batch(spec, chunk, stream_rng(seed, j))
        if spec.rule in (Rule.P3, Rule.P4):
            counts[0] += int(outcomes.sum())
        else:
            counts += np.bincount(outcomes, minlength=bins)
    empirical = tuple(float(c) / trials for c in counts)
    max_abs_dev = max(abs(e - x) for e, x in zip(empirical, exact))
    return SimReport(
        spec=spec,
        trials=trials,
        seed=seed,
        streams=streams,
        stream_rule=STREAM_RULE,
        counts=tuple(int(c) for c in counts),
        empirical=empirical,
        exact=exact,
        max_abs_dev=max_abs_dev,
    )
