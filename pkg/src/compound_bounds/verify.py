"""Empirical evidence that the bounds hold and are tight.

Three checks, each returning a :class:`VerificationReport`:

* ``mc_containment``: random orientations/phases never leave the interval.
* ``saturation_check``: the constructive planners hit every grid target.
* ``cross_formula_check``: the explicit closed forms agree with the
  interval images computed through ``tanh``/``sech^2``/``sinh^2``.

Sample ``i`` always draws from the stream keyed ``(seed, i)``, and results are
aggregated with min/max/count only, so reports are bit-identical for any
number of workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from compound_bounds import _rng
from compound_bounds import excitation as exc
from compound_bounds import relativity as rel
from compound_bounds import scattering as sc
from compound_bounds.bounds_core import (
    BoundInterval,
    bound_interval,
    lower_closed,
    lower_iterative,
    upper_total,
)
from compound_bounds.errors import DomainError
from compound_bounds.euclid_walk import plan_angles, resultant

DOMAINS = ("walk", "velocity", "barrier", "excitation")
_ALIASES = {"barriers": "barrier", "walks": "walk", "velocities": "velocity"}

DEFAULT_TOL = 1e-9
CROSS_TOL = 1e-12


def canonical_domain(domain: str) -> str:
    d = _ALIASES.get(domain, domain)
    if d not in DOMAINS:
        raise DomainError(f"unknown domain {domain!r}; expected one of {', '.join(DOMAINS)}")
    return d


def scaled_tol(tol: float, scale: float) -> float:
    """Relative tolerance with a floor: ``tol * max(1, scale)``."""
    return tol * max(1.0, abs(scale))


@dataclass
class VerificationReport:
    check: str
    domain: str
    samples: int
    seed: Optional[int]
    tolerance: float
    violations: int
    observed_min: float
    observed_max: float
    bound_interval: BoundInterval
    max_saturation_gap: float = 0.0
    max_deviation: float = 0.0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "domain": self.domain,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "violations": self.violations,
            "observed_min": self.observed_min,
            "observed_max": self.observed_max,
            "bound_interval": self.bound_interval.to_dict(),
            "max_saturation_gap": self.max_saturation_gap,
            "max_deviation": self.max_deviation,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


# -- per-domain samplers: (params, rng) -> observed value ----------------------


def _sample_walk(lengths: np.ndarray, rng: np.random.Generator, dim: int) -> float:
    dirs = _rng.unit_vectors(rng, len(lengths), dim)
    return float(np.linalg.norm(lengths @ dirs))


def _sample_velocity(zetas: np.ndarray, rng: np.random.Generator, dim: int) -> float:
    axes = _rng.unit_vectors(rng, len(zetas), 3)
    m = np.eye(4)
    for z, n in zip(zetas, axes):
        m = m @ rel.boost_array(float(z), n)
    return rel.extract_speed(m)


def _random_chain(thetas: Sequence[float], rng: np.random.Generator) -> sc.TransferMatrix:
    phases = rng.uniform(0.0, 2.0 * math.pi, size=(len(thetas), 2))
    return sc.compose_transfer(
        [sc.from_theta_phases(t, p[0], p[1]) for t, p in zip(thetas, phases)]
    )


def _setup(domain: str, params: Sequence[float]):
    """Bound interval, sampler input, sampler, and second-quantity checker."""
    if domain == "walk":
        return bound_interval(params), np.asarray(params, dtype=float), _sample_walk, None
    if domain == "velocity":
        zetas = np.asarray(rel.rapidities(params).values)
        return rel.speed_bounds(params), zetas, _sample_velocity, None
    if domain == "barrier":
        thetas = [b.theta for b in sc.as_barriers(params)]
        t_int, r_int = sc.n_barrier_bounds(params)

        def sample(th, rng, dim):
            m = _random_chain(th, rng)
            t, r = sc.transmission_reflection(m)
            return t, r

        return t_int, thetas, sample, r_int
    thetas = list(exc.theta_list(params).values)

    def sample_n(th, rng, dim):
        return abs(_random_chain(th, rng).beta) ** 2

    return exc.n_event_bounds(params), thetas, sample_n, None


def _containment_chunk(args) -> tuple[int, float, float]:
    sampler, inp, interval, other, tol, seed, dim, start, stop = args
    viol, lo, hi = 0, math.inf, -math.inf
    for i in range(start, stop):
        value = sampler(inp, _rng.stream(seed, i), dim)
        if other is not None:
            value, second = value
            if not other.contains(second, tol):
                viol += 1
                continue
        if not interval.contains(value, tol):
            viol += 1
        lo, hi = min(lo, value), max(hi, value)
    return viol, lo, hi


def _run_chunks(fn: Callable, total: int, workers: int, make_args: Callable) -> list:
    workers = max(1, int(workers))
    bounds = np.linspace(0, total, workers + 1).astype(int)
    jobs = [make_args(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if workers == 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def mc_containment(
    domain: str,
    params: Sequence[float],
    samples: int = 10_000,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    dim: int = 3,
    workers: int = 1,
) -> VerificationReport:
    """Count random configurations whose composed value leaves the bound interval."""
    domain = canonical_domain(domain)
    if samples < 1:
        raise DomainError("samples must be >= 1")
    if domain == "walk" and dim < 2:
        raise DomainError("walk sampling needs dim >= 2")
    interval, inp, sampler, other = _setup(domain, params)
    eff_tol = scaled_tol(tol, interval.hi)
    parts = _run_chunks(
        _containment_chunk, samples, workers,
        lambda a, b: (sampler, inp, interval, other, eff_tol, seed, dim, a, b),
    )
    viol = sum(p[0] for p in parts)
    lo = min(p[1] for p in parts)
    hi = max(p[2] for p in parts)
    return VerificationReport(
        check="containment", domain=domain, samples=samples, seed=seed, tolerance=eff_tol,
        violations=viol, observed_min=lo, observed_max=hi, bound_interval=interval,
    )


# -- saturation ----------------------------------------------------------------


def _achieve(domain: str, params: Sequence[float], target: float) -> float:
    if domain == "walk":
        return resultant(plan_angles(params, target))[1]
    if domain == "velocity":
        _, vectors = rel.plan_boost_chain(params, target)
        return rel.compose_boosts_extract_speed(vectors)
    specs = (sc.as_barriers(params) if domain == "barrier"
             else [sc.BarrierSpec.from_theta(t) for t in exc.theta_list(params).values])
    phases = sc.plan_phases(specs, target)
    return sc.compose_transfer(sc.chain_from_phases(specs, phases)).theta


def saturation_interval(domain: str, params: Sequence[float]) -> BoundInterval:
    """Interval the planners target: displacement, speed, or theta."""
    domain = canonical_domain(domain)
    if domain == "walk":
        return bound_interval(params)
    if domain == "velocity":
        return rel.speed_bounds(params)
    if domain == "barrier":
        return sc.theta_bounds(params)
    return bound_interval(exc.theta_list(params))


def saturation_check(
    domain: str,
    params: Sequence[float],
    grid_points: int = 11,
    tol: float = DEFAULT_TOL,
) -> VerificationReport:
    """Run the planner on a uniform grid of targets and record the worst miss.

    Barrier and excitation targets are thetas; walk targets are displacements
    and velocity targets are speeds.
    """
    domain = canonical_domain(domain)
    if grid_points < 2:
        raise DomainError("grid_points must be >= 2")
    interval = saturation_interval(domain, params)
    eff_tol = scaled_tol(tol, interval.hi)
    gap, viol = 0.0, 0
    lo, hi = math.inf, -math.inf
    for target in np.linspace(interval.lo, interval.hi, grid_points):
        target = float(target)
        achieved = _achieve(domain, params, target)
        g = abs(achieved - target)
        gap = max(gap, g)
        viol += g > eff_tol
        lo, hi = min(lo, achieved), max(hi, achieved)
    return VerificationReport(
        check="saturation", domain=domain, samples=grid_points, seed=None, tolerance=eff_tol,
        violations=viol, observed_min=lo, observed_max=hi, bound_interval=interval,
        max_saturation_gap=gap,
    )


# -- closed form vs interval image ---------------------------------------------


def _deviation(a: float, b: float, scale: float) -> float:
    return abs(a - b) / max(1.0, abs(scale))


def _cross_walk(rng: np.random.Generator) -> tuple[float, bool]:
    n = int(rng.integers(1, 17))
    vals = rng.uniform(0.0, 100.0, size=n).tolist()
    it, cl = lower_iterative(vals), lower_closed(vals)
    total = upper_total(vals)
    dev = _deviation(it, cl, total)
    return dev, abs(it - cl) <= math.ulp(total)


def _cross_velocity(rng: np.random.Generator) -> tuple[float, bool]:
    n = int(rng.integers(3, 5))
    signed = rng.uniform(-1.0, 1.0, size=n).tolist()
    fold = rel.collinear_chain(signed)
    devs = [
        _deviation(rel.collinear_explicit(signed), fold, 1.0),
        _deviation(math.tanh(math.fsum(math.atanh(v) for v in signed)), fold, 1.0),
    ]
    mags = [abs(v) for v in signed]
    devs.append(_deviation(rel.speed_upper_explicit(mags), rel.speed_bounds(mags).hi, 1.0))
    dev = max(devs)
    return dev, dev <= CROSS_TOL


def _cross_barrier(rng: np.random.Generator) -> tuple[float, bool]:
    n = int(rng.integers(2, 5))
    ts = (1.0 - rng.random(n)).tolist()  # (0, 1]
    t_int, r_int = sc.n_barrier_bounds(ts)
    if n == 2:
        t2, r2 = sc.two_barrier_bounds(*ts)
        devs = [_deviation(t2.lo, t_int.lo, 1.0), _deviation(t2.hi, t_int.hi, 1.0),
                _deviation(r2.lo, r_int.lo, 1.0), _deviation(r2.hi, r_int.hi, 1.0)]
    else:
        t_low, r_up = sc.closed_form_bounds_34(ts)
        devs = [_deviation(t_low, t_int.lo, 1.0), _deviation(r_up, r_int.hi, 1.0)]
    dev = max(devs)
    return dev, dev <= CROSS_TOL


def _cross_excitation(rng: np.random.Generator) -> tuple[float, bool]:
    n = int(rng.integers(2, 5))
    ns = rng.uniform(0.0, 1e4, size=n).tolist()
    image = exc.n_event_bounds(ns)
    if n == 2:
        two = exc.two_event_bounds(*ns)
        devs = [_deviation(two.lo, image.lo, image.hi), _deviation(two.hi, image.hi, image.hi)]
    else:
        devs = [_deviation(exc.closed_form_upper_34(ns), image.hi, image.hi)]
    dev = max(devs)
    return dev, dev <= CROSS_TOL


_CROSS = {
    "walk": _cross_walk,
    "velocity": _cross_velocity,
    "barrier": _cross_barrier,
    "excitation": _cross_excitation,
}


def cross_formula_check(domain: str, trials: int = 10_000, seed: int = 0) -> VerificationReport:
    """Largest disagreement between paired formulas over random inputs.

    Deviations are absolute for quantities of order one and relative to the
    interval's upper end beyond that.  Walks compare the iterative and closed
    lower bounds and must agree to one ulp of the total.
    """
    domain = canonical_domain(domain)
    if trials < 1:
        raise DomainError("trials must be >= 1")
    fn = _CROSS[domain]
    worst, viol = 0.0, 0
    for i in range(trials):
        dev, ok = fn(_rng.stream(seed, i))
        worst = max(worst, dev)
        viol += not ok
    return VerificationReport(
        check="cross_formula", domain=domain, samples=trials, seed=seed, tolerance=CROSS_TOL,
        violations=viol, observed_min=0.0, observed_max=worst,
        bound_interval=BoundInterval(0.0, CROSS_TOL), max_deviation=worst,
    )
