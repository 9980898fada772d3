"""Particle production from chained parametric-excitation events.

An event producing ``N`` quanta has Bogoliubov coefficient ``|beta|^2 = N``,
i.e. ``N = sinh^2(theta)``.  Events compose exactly like barriers in the
scattering picture, so bounds on the total follow from the theta interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from compound_bounds.bounds_core import BoundInterval, MagnitudeList, bound_interval
from compound_bounds.errors import DomainError


@dataclass(frozen=True)
class ExcitationEvent:
    particles: float

    def __post_init__(self) -> None:
        n = float(self.particles)
        if not math.isfinite(n) or n < 0.0:
            raise DomainError(f"particle number must be finite and nonnegative, got {n!r}")
        object.__setattr__(self, "particles", n)

    @property
    def theta(self) -> float:
        return n_theta(self.particles)


def n_theta(n: float) -> float:
    n = float(n)
    if not math.isfinite(n) or n < 0.0:
        raise DomainError(f"particle number must be finite and nonnegative, got {n!r}")
    return math.asinh(math.sqrt(n))


def theta_n(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta) or theta < 0.0:
        raise DomainError(f"theta must be finite and nonnegative, got {theta!r}")
    return math.sinh(theta) ** 2


def _counts(events) -> list[float]:
    out = [e.particles if isinstance(e, ExcitationEvent) else ExcitationEvent(e).particles
           for e in events]
    if not out:
        raise DomainError("need at least one excitation event")
    return out


def theta_list(events) -> MagnitudeList:
    return MagnitudeList(tuple(n_theta(n) for n in _counts(events)))


def two_event_bounds(e1, e2) -> BoundInterval:
    n1, n2 = _counts([e1, e2])
    a = math.sqrt(n1 * (n2 + 1.0))
    b = math.sqrt(n2 * (n1 + 1.0))
    # a^2 - b^2 == n1 - n2, so a - b is formed without cancellation
    diff = (n1 - n2) / (a + b) if a + b > 0.0 else 0.0
    hi = (a + b) ** 2
    return BoundInterval(min(diff ** 2, hi), hi)


def closed_form_upper_34(events: Sequence) -> float:
    """Upper bound on total production for three or four events."""
    ns = _counts(events)
    if len(ns) == 3:
        n1, n2, n3 = ns
        s = (math.sqrt(n1 * (1 + n2) * (1 + n3)) + math.sqrt(n2 * (1 + n3) * (1 + n1))
             + math.sqrt(n3 * (1 + n1) * (1 + n2)) + math.sqrt(n1 * n2 * n3))
        return s ** 2
    if len(ns) == 4:
        s = 0.0
        for k in range(4):
            n1, n2, n3, n4 = ns[k:] + ns[:k]
            s += math.sqrt(n1 * (1 + n2) * (1 + n3) * (1 + n4)) + math.sqrt(n1 * n2 * n3 * (1 + n4))
        return s ** 2
    raise DomainError(f"closed forms exist for 3 or 4 events, got {len(ns)}")


def n_event_bounds(events) -> BoundInterval:
    return bound_interval(theta_list(events)).map(theta_n)
