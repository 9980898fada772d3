"""Relativistic velocity composition in rapidity space.

Speeds are in units of c.  Rapidity ``zeta = atanh|v|`` turns the bound on
``n`` composed velocities into the Euclidean step-length bound, mapped back
through ``tanh``.  Non-collinear composition is realized with explicit 4x4
boost matrices (metric ``diag(-1, 1, 1, 1)``), which double as an independent
oracle for the rapidity-space formulas.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from compound_bounds.bounds_core import (
    BoundInterval,
    MagnitudeList,
    bound_interval,
    plan_chain_targets,
)
from compound_bounds.errors import ConsistencyError, DomainError

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
MAX_RAPIDITY = 350.0
UNIT_TOL = 1e-12
LORENTZ_TOL = 1e-10
COS_CLAMP_TOL = 1e-9
EPS = sys.float_info.epsilon


def _check_speed(v: float) -> float:
    v = float(v)
    if not (abs(v) < 1.0):
        raise DomainError(f"speed must satisfy |v| < 1, got {v!r}")
    return v


def _check_rapidity(z: float) -> float:
    z = float(z)
    if not math.isfinite(z) or abs(z) > MAX_RAPIDITY:
        raise DomainError(
            f"rapidity {z!r} exceeds {MAX_RAPIDITY} (tanh saturates to 1 in binary64)"
        )
    return z


def speed_to_rapidity(v: float) -> float:
    return math.atanh(_check_speed(v))


def rapidity_to_speed(zeta: float) -> float:
    return math.tanh(_check_rapidity(zeta))


def compose_collinear(v1: float, v2: float) -> float:
    """Signed composition of two collinear velocities."""
    v1, v2 = _check_speed(v1), _check_speed(v2)
    return (v1 + v2) / (1.0 + v1 * v2)


def collinear_chain(speeds: Sequence[float]) -> float:
    """Left fold of :func:`compose_collinear` over signed speeds."""
    if len(speeds) == 0:
        raise DomainError("need at least one speed")
    total = _check_speed(speeds[0])
    for v in speeds[1:]:
        total = compose_collinear(total, v)
    return total


def collinear_explicit(speeds: Sequence[float]) -> float:
    """Closed rational form for three or four collinear signed speeds.

    Numerator is the sum of odd elementary symmetric polynomials, denominator
    the sum of even ones.
    """
    if len(speeds) not in (3, 4):
        raise DomainError(f"explicit collinear formula exists for 3 or 4 speeds, got {len(speeds)}")
    v = [_check_speed(s) for s in speeds]
    if len(v) == 3:
        v1, v2, v3 = v
        num = v1 + v2 + v3 + v1 * v2 * v3
        den = 1.0 + v1 * v2 + v2 * v3 + v3 * v1
    else:
        v1, v2, v3, v4 = v
        num = (v1 + v2 + v3 + v4
               + v1 * v2 * v3 + v2 * v3 * v4 + v3 * v4 * v1 + v4 * v1 * v2)
        den = (1.0 + v1 * v2 + v2 * v3 + v3 * v4 + v4 * v1 + v1 * v3 + v2 * v4
               + v1 * v2 * v3 * v4)
    return num / den


def speed_upper_explicit(speed_magnitudes: Sequence[float]) -> float:
    """Upper bound on ``|v|`` for three or four speeds, in rational form."""
    return collinear_explicit([abs(_check_speed(s)) for s in speed_magnitudes])


def rapidities(speed_magnitudes: Sequence[float]) -> MagnitudeList:
    vals = []
    for s in speed_magnitudes:
        s = _check_speed(s)
        if s < 0.0:
            raise DomainError(f"speed magnitudes must be nonnegative, got {s!r}")
        vals.append(math.atanh(s))
    return MagnitudeList(tuple(vals))


def rapidity_bounds(speed_magnitudes: Sequence[float]) -> BoundInterval:
    return bound_interval(rapidities(speed_magnitudes))


def speed_bounds(speed_magnitudes: Sequence[float]) -> BoundInterval:
    """Interval containing ``|v_{12..n}|`` for any relative orientations."""
    zeta = rapidity_bounds(speed_magnitudes)
    return zeta.map(rapidity_to_speed)


@dataclass(frozen=True)
class RapidityVector:
    magnitude: float
    direction: tuple[float, float, float]

    def __post_init__(self) -> None:
        mag = _check_rapidity(self.magnitude)
        if mag < 0.0:
            raise DomainError(f"rapidity magnitude must be nonnegative, got {mag!r}")
        d = tuple(float(c) for c in self.direction)
        if len(d) != 3 or abs(math.hypot(*d) - 1.0) > UNIT_TOL:
            raise DomainError(f"direction must be a unit 3-vector, got {d}")
        object.__setattr__(self, "magnitude", mag)
        object.__setattr__(self, "direction", d)

    @classmethod
    def from_velocity(cls, velocity: Sequence[float]) -> "RapidityVector":
        v = np.asarray(velocity, dtype=float)
        speed = float(np.linalg.norm(v))
        if speed == 0.0:
            return cls(0.0, (1.0, 0.0, 0.0))
        return cls(speed_to_rapidity(speed), tuple(v / speed))


@dataclass(frozen=True, eq=False)
class LorentzBoost:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise DomainError(f"Lorentz matrix must be 4x4, got shape {m.shape}")
        if m[0, 0] < 1.0 - LORENTZ_TOL:
            raise DomainError(f"Lorentz matrix is not orthochronous: L00 = {m[0, 0]!r}")
        if lorentz_defect(m) > LORENTZ_TOL:
            raise ConsistencyError(f"matrix violates L^T eta L = eta (defect {lorentz_defect(m):.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "LorentzBoost") -> "LorentzBoost":
        return LorentzBoost(self.matrix @ other.matrix)

    def to_list(self) -> list[float]:
        return [float(x) for x in self.matrix.ravel()]


def lorentz_defect(m: np.ndarray) -> float:
    """``max |L^T eta L - eta|`` relative to ``L00**2``.

    Entries grow like ``cosh(zeta)``, so for long chains only the relative
    defect is resolvable in binary64.
    """
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m.T @ ETA @ m - ETA))) / max(1.0, m[0, 0] ** 2)


def boost_array(magnitude: float, direction) -> np.ndarray:
    """Raw 4x4 boost matrix, without the Lorentz check done by :class:`LorentzBoost`."""
    n = np.asarray(direction, dtype=float)
    m = np.empty((4, 4))
    m[0, 0] = math.cosh(magnitude)
    m[0, 1:] = m[1:, 0] = math.sinh(magnitude) * n
    m[1:, 1:] = np.eye(3) + 2.0 * math.sinh(magnitude / 2.0) ** 2 * np.outer(n, n)
    return m


def boost_matrix(r: RapidityVector) -> LorentzBoost:
    """Pure boost with rapidity ``r.magnitude`` along ``r.direction``."""
    return LorentzBoost(boost_array(r.magnitude, r.direction))


def _product(vectors: Sequence[RapidityVector]) -> np.ndarray:
    m = np.eye(4)
    for r in vectors:
        m = m @ boost_array(r.magnitude, r.direction)
    return m


def compose_boosts(vectors: Sequence[RapidityVector]) -> LorentzBoost:
    return LorentzBoost(_product(vectors))


def extract_speed(boost: LorentzBoost | np.ndarray) -> float:
    """Speed of the frame obtained by applying the boost to the rest 4-velocity."""
    m = boost.matrix if isinstance(boost, LorentzBoost) else np.asarray(boost)
    return float(np.linalg.norm(m[1:, 0])) / float(m[0, 0])


def extract_rapidity(boost: LorentzBoost | np.ndarray) -> float:
    m = boost.matrix if isinstance(boost, LorentzBoost) else np.asarray(boost)
    return math.asinh(float(np.linalg.norm(m[1:, 0])))


def compose_boosts_extract_speed(vectors: Sequence[RapidityVector]) -> float:
    if len(vectors) == 0:
        raise DomainError("need at least one rapidity vector")
    return extract_speed(_product(vectors))


def compose_at_angle(zeta1: float, zeta2: float, angle: float) -> float:
    """Rapidity of two boosts whose directions differ by ``angle``.

    Uses ``cosh z = cosh z1 cosh z2 + cos(angle) sinh z1 sinh z2`` in the
    half-angle form, which stays accurate near ``z = 0``.
    """
    z1, z2 = _check_rapidity(zeta1), _check_rapidity(zeta2)
    if z1 < 0.0 or z2 < 0.0:
        raise DomainError("rapidity magnitudes must be nonnegative")
    half = math.sinh((z1 - z2) / 2.0) ** 2 + math.cos(angle / 2.0) ** 2 * math.sinh(z1) * math.sinh(z2)
    return 2.0 * math.asinh(math.sqrt(half))


def _joint_angle(current: float, step: float, target: float, scale: float = 1.0) -> float:
    """Angle at which ``step`` must meet a prefix of rapidity ``current``.

    Inverts ``cosh t = cosh a cosh b + cos(angle) sinh a sinh b`` through the
    half angle, with both ``cos^2`` and ``sin^2`` written as products of sinh
    differences so the result is accurate at 0 and pi.
    """
    denom = math.sinh(current) * math.sinh(step)
    if denom <= 1e-300:
        return 0.0
    cos2 = math.sinh((target - current + step) / 2.0) * math.sinh((target + current - step) / 2.0) / denom
    sin2 = math.sinh((current + step - target) / 2.0) * math.sinh((current + step + target) / 2.0) / denom
    # rapidities carry absolute roundoff of order EPS * scale, amplified by
    # 1/denom when a side is tiny
    half = (current + step + target) / 2.0
    slack = COS_CLAMP_TOL + 8.0 * EPS * scale * math.sinh(half) * math.cosh(half) / denom
    if cos2 < -slack or sin2 < -slack:
        raise ConsistencyError(
            f"rapidities {current!r}, {step!r} cannot compose to {target!r}"
        )
    return 2.0 * math.atan2(math.sqrt(max(sin2, 0.0)), math.sqrt(max(cos2, 0.0)))


def _perpendicular(m: np.ndarray) -> np.ndarray:
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(m)))] = 1.0
    p = np.cross(m, axis)
    return p / np.linalg.norm(p)


def _realize(zetas: Sequence[float], angle_at) -> tuple[list[float], list[RapidityVector]]:
    """Build a boost chain, choosing each joint angle from the actual prefix."""
    vectors = [RapidityVector(zetas[0], (1.0, 0.0, 0.0))]
    prefix = boost_array(zetas[0], vectors[0].direction)
    angles = []
    for j in range(1, len(zetas)):
        row = prefix[0, 1:]
        row_norm = float(np.linalg.norm(row))
        current = math.asinh(row_norm)
        theta = angle_at(j, current)
        m = row / row_norm if row_norm > 0.0 else np.array([1.0, 0.0, 0.0])
        d = math.cos(theta) * m + math.sin(theta) * _perpendicular(m)
        d = d / np.linalg.norm(d)
        r = RapidityVector(zetas[j], tuple(d))
        vectors.append(r)
        angles.append(theta)
        prefix = prefix @ boost_array(r.magnitude, r.direction)
    return angles, vectors


def realize_relative_angles(speed_magnitudes: Sequence[float], angles: Sequence[float]) -> list[RapidityVector]:
    """Rapidity vectors where boost ``j`` makes ``angles[j-1]`` with the prefix's row direction."""
    zetas = rapidities(speed_magnitudes).values
    if len(angles) != len(zetas) - 1:
        raise DomainError(f"need {len(zetas) - 1} angles, got {len(angles)}")
    _, vectors = _realize(zetas, lambda j, current: float(angles[j - 1]))
    return vectors


def plan_relative_angles(speed_magnitudes: Sequence[float], target_speed: float) -> list[float]:
    """Joint angles that make the chained boosts reach ``target_speed``."""
    return plan_boost_chain(speed_magnitudes, target_speed)[0]


def plan_boost_chain(speed_magnitudes: Sequence[float], target_speed: float):
    """Angles and the realizing rapidity vectors for ``target_speed``."""
    zetas = rapidities(speed_magnitudes)
    interval = speed_bounds(speed_magnitudes)
    target_speed = float(target_speed)
    # endpoints go through tanh/atanh, so allow a few ulps of slack
    if not interval.contains(target_speed, 1e-12):
        raise DomainError(
            f"target speed {target_speed!r} outside attainable interval "
            f"[{interval.lo!r}, {interval.hi!r}]"
        )
    total = sum(zetas.values)
    targets = plan_chain_targets(zetas, math.atanh(target_speed), slack=1e-9 * max(1.0, total))
    return _realize(zetas.values, lambda j, current: _joint_angle(current, zetas[j], targets[j], max(1.0, total)))
