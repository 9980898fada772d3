"""Compound walks in Euclidean space with fixed step lengths and free directions."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from compound_bounds import _rng
from compound_bounds.bounds_core import (
    BoundInterval,
    MagnitudeList,
    bound_interval,
    plan_chain_targets,
)
from compound_bounds.errors import ConsistencyError, DomainError

UNIT_TOL = 1e-12
COS_CLAMP_TOL = 1e-9
EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class Step:
    length: float
    direction: tuple[float, ...]

    def __post_init__(self) -> None:
        length = float(self.length)
        if not math.isfinite(length) or length < 0.0:
            raise DomainError(f"step length must be finite and nonnegative, got {length!r}")
        direction = tuple(float(c) for c in self.direction)
        if not direction:
            raise DomainError("step direction needs at least one component")
        if abs(math.hypot(*direction) - 1.0) > UNIT_TOL:
            raise DomainError(f"step direction is not a unit vector: {direction}")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "direction", direction)

    @property
    def dim(self) -> int:
        return len(self.direction)


@dataclass(frozen=True)
class Walk:
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        steps = tuple(self.steps)
        if not steps:
            raise DomainError("a walk needs at least one step")
        dims = {s.dim for s in steps}
        if len(dims) != 1:
            raise DomainError(f"steps have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_arrays(cls, lengths: Sequence[float], directions) -> "Walk":
        directions = [tuple(d) for d in directions]
        if len(directions) != len(lengths):
            raise DomainError("lengths and directions differ in count")
        return cls(tuple(Step(l, d) for l, d in zip(lengths, directions)))

    @property
    def dim(self) -> int:
        return self.steps[0].dim

    @property
    def lengths(self) -> list[float]:
        return [s.length for s in self.steps]

    @property
    def directions(self) -> np.ndarray:
        return np.array([s.direction for s in self.steps])

    def to_dict(self) -> dict:
        return {
            "lengths": self.lengths,
            "directions": [list(s.direction) for s in self.steps],
            "dim": self.dim,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Walk":
        walk = cls.from_arrays(data["lengths"], data["directions"])
        if "dim" in data and int(data["dim"]) != walk.dim:
            raise DomainError(f"declared dim {data['dim']} does not match directions")
        return walk


def _resultant_vector(lengths: np.ndarray, directions: np.ndarray) -> np.ndarray:
    return lengths @ directions


def resultant(walk: Walk) -> tuple[np.ndarray, float]:
    """Net displacement vector and its Euclidean norm."""
    vec = _resultant_vector(np.asarray(walk.lengths), walk.directions)
    return vec, float(np.linalg.norm(vec))


def displacement_bounds(lengths) -> BoundInterval:
    return bound_interval(lengths)


def _joint_angle(a: float, step: float, t: float, scale: float) -> float:
    """Turn angle taking a displacement of length ``a`` to ``t`` with one step.

    Law of cosines in half-angle form: both ``cos^2`` and ``sin^2`` of the half
    angle are products of differences, so the angle stays accurate near 0 and
    pi where ``acos`` of the plain cosine loses half the digits.
    """
    denom = 4.0 * a * step
    cos2 = (t - a + step) * (t + a - step) / denom
    sin2 = (a + step - t) * (a + step + t) / denom
    # the measured a carries roundoff of order EPS * (total length), amplified
    # by 1/(a*step) when one side is tiny
    slack = COS_CLAMP_TOL + 8.0 * EPS * scale * (a + step + t) / denom
    if cos2 < -slack or sin2 < -slack:
        raise ConsistencyError(
            f"no triangle with sides {a!r}, {step!r}, {t!r} (cos^2={cos2!r}, sin^2={sin2!r})"
        )
    return 2.0 * math.atan2(math.sqrt(max(sin2, 0.0)), math.sqrt(max(cos2, 0.0)))


def plan_angles(lengths, target: float) -> Walk:
    """Planar walk with the given step lengths whose displacement is ``target``.

    Each step is rotated off the running displacement by the angle given by
    the law of cosines for the planned partial resultants.  ``cos(theta)`` is
    ``(t_{j+1}^2 - t_j^2 - l_{j+1}^2) / (2 t_j l_{j+1})``; the current
    displacement is measured rather than taken from the plan, so roundoff
    does not accumulate along the chain.
    """
    mags = MagnitudeList.of(lengths)
    targets = plan_chain_targets(mags, target)
    scale = max(1.0, sum(mags.values))

    directions = [(1.0, 0.0)]
    pos = np.array([mags[0], 0.0])
    for j in range(1, len(mags)):
        step = mags[j]
        a = float(np.linalg.norm(pos))
        if a <= 1e-15 * scale or step == 0.0:
            theta = 0.0
        else:
            theta = _joint_angle(a, step, targets[j], scale)
        base = math.atan2(pos[1], pos[0]) if a > 0.0 else 0.0
        d = (math.cos(base + theta), math.sin(base + theta))
        directions.append(d)
        pos = pos + step * np.array(d)
    return Walk.from_arrays(list(mags.values), directions)


def random_walk(lengths, dim: int, seed: int) -> Walk:
    """Walk with i.i.d. uniform directions on S^(dim-1).

    Step ``i`` draws from the stream keyed ``(seed, i)``, so each direction is
    independent of how many other steps are generated.
    """
    mags = MagnitudeList.of(lengths)
    if dim < 2:
        raise DomainError(
            f"random walks need dim >= 2 (dim 1 cannot attain the lower bound), got {dim}"
        )
    directions = [
        _rng.unit_vectors(_rng.stream(seed, i), 1, dim)[0] for i in range(len(mags))
    ]
    return Walk.from_arrays(list(mags.values), directions)
