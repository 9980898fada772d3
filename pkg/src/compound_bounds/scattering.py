"""Transfer matrices for chains of non-overlapping barriers.

A barrier's transfer matrix is ``[[alpha, conj(beta)], [beta, conj(alpha)]]``
with ``alpha = cosh(theta) e^{i phi}`` and ``beta = sinh(theta) e^{i psi}``, so
``T = sech^2(theta)`` and ``R = tanh^2(theta)``.  Under composition the
``theta`` values combine like step lengths of a walk, which gives bounds on
the transmission and reflection of the whole chain.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from compound_bounds.bounds_core import (
    BoundInterval,
    MagnitudeList,
    bound_interval,
    plan_chain_targets,
)
from compound_bounds.errors import ConsistencyError, DomainError

SU11_TOL = 1e-10
LARGE_THETA = 20.0
COS_CLAMP_TOL = 1e-9
EPS = sys.float_info.epsilon


def sech2(theta: float) -> float:
    if theta > LARGE_THETA:
        q = math.exp(-2.0 * theta)
        return 4.0 * q / (1.0 + q) ** 2
    return 1.0 / math.cosh(theta) ** 2


def tanh2(theta: float) -> float:
    if theta > LARGE_THETA:
        q = math.exp(-2.0 * theta)
        return ((1.0 - q) / (1.0 + q)) ** 2
    return math.tanh(theta) ** 2


def theta_from_transmission(t: float) -> float:
    """``arccosh(1/sqrt(T))``, evaluated without cancellation at either end."""
    t = float(t)
    if not (0.0 < t <= 1.0):
        raise DomainError(
            f"transmission must lie in (0, 1], got {t!r}; an opaque barrier (T = 0) "
            "has infinite theta and makes every composed bound trivial"
        )
    r = 1.0 - t
    if r < 0.5:
        return math.atanh(math.sqrt(r))
    return math.log1p(math.sqrt(r)) - 0.5 * math.log(t)


@dataclass(frozen=True)
class BarrierSpec:
    transmission: float
    reflection: float

    def __post_init__(self) -> None:
        t, r = float(self.transmission), float(self.reflection)
        if not (0.0 < t <= 1.0) or not (0.0 <= r < 1.0):
            raise DomainError(f"need 0 < T <= 1 and 0 <= R < 1, got T={t!r}, R={r!r}")
        if abs(t + r - 1.0) > 1e-15:
            raise DomainError(f"T + R must equal 1, got {t + r!r}")
        object.__setattr__(self, "transmission", t)
        object.__setattr__(self, "reflection", r)

    @classmethod
    def from_T(cls, t: float) -> "BarrierSpec":
        theta_from_transmission(t)
        return cls(float(t), 1.0 - float(t))

    @classmethod
    def from_R(cls, r: float) -> "BarrierSpec":
        r = float(r)
        if not (0.0 <= r < 1.0):
            raise DomainError(f"reflection must lie in [0, 1), got {r!r}")
        return cls(1.0 - r, r)

    @classmethod
    def from_theta(cls, theta: float) -> "BarrierSpec":
        theta = float(theta)
        if not math.isfinite(theta) or theta < 0.0:
            raise DomainError(f"theta must be finite and nonnegative, got {theta!r}")
        return cls(sech2(theta), tanh2(theta))

    @property
    def theta(self) -> float:
        r, t = self.reflection, self.transmission
        if r < 0.5:
            return math.atanh(math.sqrt(r))
        return math.log1p(math.sqrt(r)) - 0.5 * math.log(t)


def as_barriers(specs) -> list[BarrierSpec]:
    out = []
    for s in specs:
        out.append(s if isinstance(s, BarrierSpec) else BarrierSpec.from_T(s))
    if not out:
        raise DomainError("need at least one barrier")
    return out


@dataclass(frozen=True)
class TransferMatrix:
    """SU(1,1) element ``[[alpha, conj(beta)], [beta, conj(alpha)]]``."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        a, b = complex(self.alpha), complex(self.beta)
        if su11_defect(a, b) > SU11_TOL:
            raise DomainError(
                f"|alpha|^2 - |beta|^2 = {abs(a) ** 2 - abs(b) ** 2!r}, expected 1"
            )
        if abs(a) < 1.0 - SU11_TOL:
            raise DomainError(f"|alpha| must be >= 1, got {abs(a)!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def theta(self) -> float:
        # asinh is well conditioned in |beta| everywhere, unlike arccosh|alpha| near 0
        return math.asinh(abs(self.beta))

    @property
    def phi(self) -> float:
        return cmath.phase(self.alpha)

    @property
    def psi(self) -> float:
        return cmath.phase(self.beta) if self.beta != 0 else 0.0

    @property
    def params(self) -> tuple[float, float, float]:
        return self.theta, self.phi, self.psi

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.alpha, self.beta.conjugate()], [self.beta, self.alpha.conjugate()]]
        )

    def inverse(self) -> "TransferMatrix":
        return TransferMatrix(self.alpha.conjugate(), -self.beta)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return compose_transfer([self, other])

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(1.0 + 0j, 0j)


def su11_defect(alpha: complex, beta: complex) -> float:
    """``| |alpha|^2 - |beta|^2 - 1 |`` relative to ``|alpha|^2``.

    Products of many barriers have ``|alpha|`` up to ``cosh`` of the summed
    thetas; binary64 only resolves the invariant relative to that scale.
    """
    a2 = abs(alpha) ** 2
    return abs(a2 - abs(beta) ** 2 - 1.0) / max(1.0, a2)


def from_theta_phases(theta: float, phi: float, psi: float) -> TransferMatrix:
    theta = float(theta)
    if not math.isfinite(theta) or theta < 0.0:
        raise DomainError(f"theta must be finite and nonnegative, got {theta!r}")
    return TransferMatrix(
        math.cosh(theta) * cmath.exp(1j * phi), math.sinh(theta) * cmath.exp(1j * psi)
    )


def _mul(a1: complex, b1: complex, a2: complex, b2: complex) -> tuple[complex, complex]:
    return a1 * a2 + b1.conjugate() * b2, b1 * a2 + a1.conjugate() * b2


def compose_transfer(matrices: Sequence[TransferMatrix]) -> TransferMatrix:
    """Ordered matrix product of transfer matrices."""
    if len(matrices) == 0:
        raise DomainError("need at least one transfer matrix")
    a, b = matrices[0].alpha, matrices[0].beta
    for m in matrices[1:]:
        a, b = _mul(a, b, m.alpha, m.beta)
    defect = su11_defect(a, b)
    if defect > SU11_TOL:
        raise ConsistencyError(f"SU(1,1) invariant drifted by {defect:.3g} during composition")
    return TransferMatrix(a, b)


def transmission_reflection(m: TransferMatrix) -> tuple[float, float]:
    theta = m.theta
    return sech2(theta), tanh2(theta)


def theta_bounds(specs) -> BoundInterval:
    return bound_interval(MagnitudeList(tuple(b.theta for b in as_barriers(specs))))


def two_barrier_bounds(b1, b2) -> tuple[BoundInterval, BoundInterval]:
    """Closed-form T and R intervals for two barriers."""
    b1, b2 = as_barriers([b1, b2])
    t1, t2 = b1.transmission, b2.transmission
    sr1, sr2 = math.sqrt(1.0 - t1), math.sqrt(1.0 - t2)
    t_lo = t1 * t2 / (1.0 + sr1 * sr2) ** 2
    # 1 - sr1*sr2 == (t1 + t2 - t1*t2) / (1 + sr1*sr2), free of cancellation
    gap = (t1 + t2 - t1 * t2) / (1.0 + sr1 * sr2)
    t_hi = min(t1 * t2 / gap ** 2, 1.0)
    q1, q2 = math.sqrt(b1.reflection), math.sqrt(b2.reflection)
    r_lo = ((q1 - q2) / (1.0 - q1 * q2)) ** 2
    r_hi = ((q1 + q2) / (1.0 + q1 * q2)) ** 2
    return BoundInterval(t_lo, t_hi), BoundInterval(r_lo, r_hi)


def closed_form_bounds_34(specs) -> tuple[float, float]:
    """Lower bound on T and upper bound on R for three or four barriers."""
    bs = as_barriers(specs)
    if len(bs) not in (3, 4):
        raise DomainError(f"closed forms exist for 3 or 4 barriers, got {len(bs)}")
    ts = [b.transmission for b in bs]
    rs = [b.reflection for b in bs]
    if len(bs) == 3:
        t1, t2, t3 = ts
        r1, r2, r3 = rs
        den_t = (1.0 + math.sqrt((1 - t2) * (1 - t3)) + math.sqrt((1 - t3) * (1 - t1))
                 + math.sqrt((1 - t1) * (1 - t2)))
        t_lower = t1 * t2 * t3 / den_t ** 2
        num_r = math.sqrt(r1 * r2 * r3) + math.sqrt(r1) + math.sqrt(r2) + math.sqrt(r3)
        den_r = 1.0 + math.sqrt(r2 * r3) + math.sqrt(r3 * r1) + math.sqrt(r1 * r2)
        return t_lower, (num_r / den_r) ** 2

    t1, t2, t3, t4 = ts
    r1, r2, r3, r4 = rs
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    den_t = (1.0 + sum(math.sqrt((1 - ts[i]) * (1 - ts[j])) for i, j in pairs)
             + math.sqrt((1 - t1) * (1 - t2) * (1 - t3) * (1 - t4)))
    t_lower = t1 * t2 * t3 * t4 / den_t ** 2
    num_r = (math.sqrt(r1) + math.sqrt(r2) + math.sqrt(r3) + math.sqrt(r4)
             + math.sqrt(r2 * r3 * r4) + math.sqrt(r3 * r4 * r1)
             + math.sqrt(r4 * r1 * r2) + math.sqrt(r1 * r2 * r3))
    den_r = (1.0 + sum(math.sqrt(rs[i] * rs[j]) for i, j in pairs)
             + math.sqrt(r1 * r2 * r3 * r4))
    return t_lower, (num_r / den_r) ** 2


def n_barrier_bounds(specs) -> tuple[BoundInterval, BoundInterval]:
    """T and R intervals for any number of barriers, from the theta interval."""
    thetas = bound_interval(MagnitudeList(tuple(b.theta for b in as_barriers(specs))))
    t_interval = BoundInterval(sech2(thetas.hi), sech2(thetas.lo))
    r_interval = BoundInterval(tanh2(thetas.lo), tanh2(thetas.hi))
    return t_interval, r_interval


def junction_delta(current: float, step: float, target: float, scale: float = 1.0) -> float:
    """Relative phase joining a prefix of ``current`` theta to ``step``.

    Solves ``|cosh a cosh b + e^{i delta} sinh a sinh b| = cosh(target)``.
    In half-angle form ``cos^2(delta/2) = sinh(t - a + b) sinh(t + a - b) /
    (sinh 2a sinh 2b)`` and ``sin^2(delta/2) = sinh(a + b - t) sinh(a + b + t) /
    (sinh 2a sinh 2b)``, which keeps delta accurate near 0 and pi.
    """
    denom = math.sinh(2.0 * current) * math.sinh(2.0 * step)
    if denom <= 1e-300:
        return 0.0
    cos2 = math.sinh(target - current + step) * math.sinh(target + current - step) / denom
    sin2 = math.sinh(current + step - target) * math.sinh(current + step + target) / denom
    s = current + step + target
    slack = COS_CLAMP_TOL + 8.0 * EPS * scale * math.sinh(s) * math.cosh(s) / denom
    if cos2 < -slack or sin2 < -slack:
        raise ConsistencyError(f"thetas {current!r}, {step!r} cannot compose to {target!r}")
    return 2.0 * math.atan2(math.sqrt(max(sin2, 0.0)), math.sqrt(max(cos2, 0.0)))


def plan_phases(specs, target_theta: float) -> list[tuple[float, float]]:
    """Phases ``(phi_i, psi_i)`` so the composed chain has total theta ``target_theta``.

    The first barrier gets zero phases; every later one has ``phi = 0`` and
    ``psi`` set so that its relative phase to the running product equals
    :func:`junction_delta` for the planned partial thetas.
    """
    thetas = MagnitudeList(tuple(b.theta for b in as_barriers(specs)))
    targets = plan_chain_targets(thetas, target_theta, slack=1e-12 * max(1.0, sum(thetas)))
    phases = [(0.0, 0.0)]
    prefix = from_theta_phases(thetas[0], 0.0, 0.0)
    for j in range(1, len(thetas)):
        delta = junction_delta(prefix.theta, thetas[j], targets[j], max(1.0, sum(thetas)))
        psi = delta + prefix.psi + prefix.phi
        phases.append((0.0, psi))
        prefix = compose_transfer([prefix, from_theta_phases(thetas[j], 0.0, psi)])
    return phases


def chain_from_phases(specs, phases: Sequence[tuple[float, float]]) -> list[TransferMatrix]:
    bs = as_barriers(specs)
    if len(phases) != len(bs):
        raise DomainError(f"need {len(bs)} phase pairs, got {len(phases)}")
    return [from_theta_phases(b.theta, phi, psi) for b, (phi, psi) in zip(bs, phases)]

