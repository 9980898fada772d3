"""Interval bounds on n-fold compositions of nonnegative magnitudes.

Composing magnitudes ``l_1 .. l_n`` (step lengths, rapidities, transfer-matrix
angles) with arbitrary relative orientation yields a resultant ``r`` with

    max(2 * max(l) - sum(l), 0) <= r <= sum(l)

and every value in between is attainable.  The lower bound has two forms, a
left-to-right recursion and a permutation-symmetric closed form; both are
implemented here and evaluated with exact partial sums (``math.fsum``) so the
two agree bit-for-bit rather than merely to within accumulated roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from compound_bounds.errors import ConsistencyError, DomainError


def _check_magnitude(x: float, name: str = "magnitude") -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"{name} must be finite and nonnegative, got {x!r}")
    return x


@dataclass(frozen=True)
class MagnitudeList:
    """Ordered, nonempty list of finite nonnegative magnitudes."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(_check_magnitude(v) for v in self.values)
        if not vals:
            raise DomainError("a magnitude list needs at least one entry")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, mags: "MagnitudeList | Iterable[float]") -> "MagnitudeList":
        if isinstance(mags, MagnitudeList):
            return mags
        return cls(tuple(mags))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def peak(self) -> float:
        return max(self.values)


@dataclass(frozen=True)
class BoundInterval:
    """Closed interval ``[lo, hi]`` with ``0 <= lo <= hi``."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = _check_magnitude(self.lo, "lo")
        hi = _check_magnitude(self.hi, "hi")
        if lo > hi:
            raise DomainError(f"empty interval: lo={lo!r} > hi={hi!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def map(self, f) -> "BoundInterval":
        """Image under a monotone increasing map."""
        return BoundInterval(f(self.lo), f(self.hi))

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}

    def __iter__(self):
        yield self.lo
        yield self.hi


def pairwise_interval(a: float, b: float) -> BoundInterval:
    """Range of ``|x + y|`` over all orientations with ``|x| = a``, ``|y| = b``."""
    a = _check_magnitude(a)
    b = _check_magnitude(b)
    return BoundInterval(abs(a - b), a + b)


def upper_total(mags) -> float:
    """Correctly rounded sum of the magnitudes."""
    return math.fsum(MagnitudeList.of(mags).values)


def _exact_sign(terms: Sequence[float]) -> float:
    # fsum is correctly rounded, so the sign of its result is the exact sign
    return math.fsum(terms)


def lower_iterative(mags) -> float:
    """Lower bound via ``m_{j+1} = max(l_{j+1} - M_j, m_j - l_{j+1}, 0)``.

    Each ``m_j`` is carried as an unevaluated list of input terms, so every
    comparison in the recursion is decided on exact values and the result
    is the correctly rounded exact bound.
    """
    vals = MagnitudeList.of(mags).values
    prefix: list[float] = [vals[0]]
    m_terms: list[float] = [vals[0]]
    for step in vals[1:]:
        grow = [step] + [-x for x in prefix]
        shrink = m_terms + [-step]
        diff = grow + [-x for x in shrink]
        best = grow if _exact_sign(diff) >= 0.0 else shrink
        m_terms = best if _exact_sign(best) > 0.0 else [0.0]
        prefix.append(step)
    return max(math.fsum(m_terms), 0.0)


def lower_closed(mags) -> float:
    """Lower bound ``max(2 * peak - total, 0)``, correctly rounded."""
    vals = MagnitudeList.of(mags).values
    peak = max(vals)
    return max(math.fsum([2.0 * peak] + [-x for x in vals]), 0.0)


def bound_interval(mags) -> BoundInterval:
    mags = MagnitudeList.of(mags)
    return BoundInterval(lower_closed(mags), upper_total(mags))


def extend_interval(interval: BoundInterval, step: float) -> BoundInterval:
    """One step of the recursion: the interval after appending ``step``."""
    step = _check_magnitude(step)
    lo = max(step - interval.hi, interval.lo - step, 0.0)
    return BoundInterval(lo, interval.hi + step)


def polygon_satisfied(mags) -> bool:
    """True iff every magnitude is at most the sum of the others."""
    vals = MagnitudeList.of(mags).values
    if len(vals) < 2:
        raise DomainError("polygon inequalities need at least two magnitudes")
    for i, v in enumerate(vals):
        others = [x for j, x in enumerate(vals) if j != i]
        if _exact_sign(others + [-v]) < 0.0:
            return False
    return True


def prefix_intervals(mags) -> list[BoundInterval]:
    """``bound_interval`` of every prefix, shortest first."""
    vals = MagnitudeList.of(mags).values
    return [bound_interval(vals[: j + 1]) for j in range(len(vals))]


def plan_chain_targets(mags, target: float, slack: float = 0.0) -> list[float]:
    """Partial resultants ``t_1 .. t_n`` whose chain ends exactly at ``target``.

    Works backwards from ``t_n = target``: each ``t_j`` must be reachable in one
    step from ``t_{j+1}`` (within ``[|t_{j+1} - l_{j+1}|, t_{j+1} + l_{j+1}]``) and
    attainable by the prefix (within its bound interval).  Among feasible values
    the one closest to ``t_{j+1}`` is taken.

    ``slack`` lets callers that reach the target through a lossy map (tanh,
    sech^2) clamp values a few ulps outside the interval instead of failing.
    """
    mags = MagnitudeList.of(mags)
    target = float(target)
    full = bound_interval(mags)
    if not full.contains(target, slack):
        raise DomainError(
            f"target {target!r} outside attainable interval [{full.lo!r}, {full.hi!r}]"
        )
    target = min(max(target, full.lo), full.hi)

    vals = mags.values
    n = len(vals)
    prefixes = prefix_intervals(vals)
    tol = 1e-12 * max(1.0, full.hi)
    targets = [0.0] * n
    targets[-1] = target
    for j in range(n - 2, -1, -1):
        nxt, step = targets[j + 1], vals[j + 1]
        lo = max(abs(nxt - step), prefixes[j].lo)
        hi = min(nxt + step, prefixes[j].hi)
        if lo > hi + tol:
            raise ConsistencyError(
                f"no feasible partial resultant at position {j}: [{lo!r}, {hi!r}]"
            )
        targets[j] = (lo + hi) / 2.0 if lo > hi else min(max(nxt, lo), hi)
    targets[0] = vals[0]
    return targets


def chain_targets_valid(mags, targets: Sequence[float], tol: float = 1e-12) -> bool:
    """Check the postcondition of :func:`plan_chain_targets`."""
    vals = MagnitudeList.of(mags).values
    if len(targets) != len(vals) or targets[0] != vals[0]:
        return False
    scale = tol * max(1.0, math.fsum(vals))
    prefixes = prefix_intervals(vals)
    for j, t in enumerate(targets):
        if not prefixes[j].contains(t, scale):
            return False
        if j + 1 < len(vals):
            step_range = pairwise_interval(t, vals[j + 1])
            if not step_range.contains(targets[j + 1], scale):
                return False
    return True
