import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compound_bounds import ConsistencyError, DomainError
from compound_bounds import scattering as sc
from compound_bounds.scattering import BarrierSpec, TransferMatrix

trans = st.floats(1e-6, 1.0)
angles = st.floats(-math.pi, math.pi)


def brute_product(ms):
    """Plain 2x2 complex matrix product, independent of the closed-form rule."""
    out = np.eye(2, dtype=complex)
    for m in ms:
        out = out @ m.matrix
    return out


def test_from_theta_phases_example():
    m = sc.from_theta_phases(math.asinh(1.0), 0.3, -1.2)
    assert abs(m.alpha) == pytest.approx(math.sqrt(2.0), abs=1e-15)
    assert abs(m.beta) == pytest.approx(1.0, abs=1e-15)
    assert m.params == pytest.approx((math.asinh(1.0), 0.3, -1.2), abs=1e-14)


@given(st.floats(0.0, 15.0), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_params_roundtrip(theta, phi, psi):
    m = sc.from_theta_phases(theta, phi, psi)
    assert m.theta == pytest.approx(theta, abs=1e-12, rel=1e-12)
    assert cmath.rect(1, m.phi) == pytest.approx(cmath.rect(1, phi), abs=1e-12)
    if theta > 1e-8:
        assert cmath.rect(1, m.psi) == pytest.approx(cmath.rect(1, psi), abs=1e-8)


def test_transfer_matrix_rejects_non_su11():
    with pytest.raises(DomainError):
        TransferMatrix(1.0, 0.5)


def test_identity_and_inverse():
    m = sc.from_theta_phases(0.7, 0.4, 2.1)
    ident = TransferMatrix.identity()
    for p in (m @ ident, ident @ m):
        assert p.alpha == pytest.approx(m.alpha, abs=1e-15)
        assert p.beta == pytest.approx(m.beta, abs=1e-15)
    e = m @ m.inverse()
    assert e.alpha == pytest.approx(1.0, abs=1e-14)
    assert e.beta == pytest.approx(0.0, abs=1e-14)


def test_closed_form_product_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(500):
        ms = [sc.from_theta_phases(*p) for p in zip(rng.uniform(0, 2, 4), rng.uniform(-3, 3, 4),
                                                    rng.uniform(-3, 3, 4))]
        composed = sc.compose_transfer(ms)
        np.testing.assert_allclose(composed.matrix, brute_product(ms), rtol=1e-12, atol=1e-12)


def test_aligned_half_barriers_give_one_ninth():
    theta = BarrierSpec.from_T(0.5).theta
    m = sc.compose_transfer([sc.from_theta_phases(theta, 0, 0)] * 2)
    t, r = sc.transmission_reflection(m)
    assert t == pytest.approx(1 / 9, abs=1e-15)
    assert r == pytest.approx(8 / 9, abs=1e-15)


@pytest.mark.parametrize("theta", [0.0, 0.5, 3.0, 25.0, 200.0])
def test_transmission_reflection_sum_to_one(theta):
    t, r = sc.sech2(theta), sc.tanh2(theta)
    assert t == pytest.approx(1 / math.cosh(theta) ** 2, rel=1e-14)
    assert t + r == pytest.approx(1.0, abs=1e-15)


@given(trans)
def test_theta_from_transmission_roundtrip(t):
    theta = BarrierSpec.from_T(t).theta
    assert sc.sech2(theta) == pytest.approx(t, rel=1e-12)
    assert math.cosh(theta) == pytest.approx(1 / math.sqrt(t), rel=1e-12)


@pytest.mark.parametrize("t", [0.0, -0.1, 1.5, math.nan])
def test_transmission_domain(t):
    with pytest.raises(DomainError):
        BarrierSpec.from_T(t)


def test_opaque_barrier_message():
    with pytest.raises(DomainError, match="opaque"):
        sc.theta_from_transmission(0.0)


def test_barrier_spec_constructors_agree():
    a, b, c = BarrierSpec.from_T(0.36), BarrierSpec.from_R(0.64), BarrierSpec.from_theta(BarrierSpec.from_T(0.36).theta)
    assert a == b
    assert c.transmission == pytest.approx(0.36, abs=1e-15)


def test_two_barrier_examples():
    t_int, r_int = sc.two_barrier_bounds(0.5, 0.5)
    assert tuple(t_int) == pytest.approx((1 / 9, 1.0), abs=1e-15)
    assert tuple(r_int) == pytest.approx((0.0, 8 / 9), abs=1e-15)
    t_int, r_int = sc.two_barrier_bounds(1.0, 0.3)
    assert tuple(t_int) == pytest.approx((0.3, 0.3), abs=1e-15)
    assert tuple(r_int) == pytest.approx((0.7, 0.7), abs=1e-15)


@given(trans, trans)
def test_two_barrier_closed_form_matches_theta_image(t1, t2):
    t_int, r_int = sc.two_barrier_bounds(t1, t2)
    t_n, r_n = sc.n_barrier_bounds([t1, t2])
    assert tuple(t_int) == pytest.approx(tuple(t_n), abs=1e-12)
    assert tuple(r_int) == pytest.approx(tuple(r_n), abs=1e-12)


def test_three_barrier_examples():
    t_low, r_up = sc.closed_form_bounds_34([0.8, 0.8, 0.8])
    assert t_low == pytest.approx(0.2, abs=1e-15)
    assert r_up == pytest.approx(0.8, abs=1e-15)
    t_low, _ = sc.closed_form_bounds_34([1.0, 1.0, 1.0, 0.37])
    assert t_low == pytest.approx(0.37, abs=1e-15)
    with pytest.raises(DomainError):
        sc.closed_form_bounds_34([0.5, 0.5])


@given(st.lists(trans, min_size=3, max_size=4))
def test_closed_forms_are_the_aligned_extremes(ts):
    t_low, r_up = sc.closed_form_bounds_34(ts)
    t_n, r_n = sc.n_barrier_bounds(ts)
    assert t_low == pytest.approx(t_n.lo, abs=1e-12)
    assert r_up == pytest.approx(r_n.hi, abs=1e-12)


@settings(max_examples=300)
@given(st.floats(0.0, 4.0), st.floats(0.0, 4.0), angles, angles, angles, angles)
def test_junction_law_matches_brute_force(a, b, phi_p, psi_p, phi_2, psi_2):
    prefix = sc.from_theta_phases(a, phi_p, psi_p)
    step = sc.from_theta_phases(b, phi_2, psi_2)
    alpha = brute_product([prefix, step])[0, 0]
    delta = psi_2 - psi_p - phi_p - phi_2
    law = abs(math.cosh(a) * math.cosh(b) + cmath.exp(1j * delta) * math.sinh(a) * math.sinh(b))
    assert abs(alpha) == pytest.approx(law, rel=1e-12)


def test_junction_delta_inverts_law():
    rng = np.random.default_rng(9)
    for _ in range(1000):
        a, b = rng.uniform(0.01, 3, 2)
        target = rng.uniform(abs(a - b), a + b)
        delta = sc.junction_delta(a, b, target)
        got = abs(math.cosh(a) * math.cosh(b) + cmath.exp(1j * delta) * math.sinh(a) * math.sinh(b))
        assert math.acosh(got) == pytest.approx(target, abs=1e-9)


def test_junction_delta_rejects_impossible_target():
    with pytest.raises(ConsistencyError):
        sc.junction_delta(1.0, 0.2, 2.0)


def test_plan_phases_examples():
    specs = [0.5, 0.5]
    theta = BarrierSpec.from_T(0.5).theta
    for target, t_expected in [(0.0, 1.0), (2 * theta, 1 / 9)]:
        phases = sc.plan_phases(specs, target)
        m = sc.compose_transfer(sc.chain_from_phases(specs, phases))
        assert sc.transmission_reflection(m)[0] == pytest.approx(t_expected, abs=1e-9)
    with pytest.raises(DomainError):
        sc.plan_phases(specs, 3 * theta)


@settings(max_examples=200)
@given(st.lists(st.floats(1e-3, 1.0), min_size=1, max_size=8), st.floats(0.0, 1.0))
def test_plan_phases_reaches_target(ts, frac):
    interval = sc.theta_bounds(ts)
    target = interval.lo + frac * interval.width
    m = sc.compose_transfer(sc.chain_from_phases(ts, sc.plan_phases(ts, target)))
    assert m.theta == pytest.approx(target, abs=1e-9)


def test_long_chain_keeps_su11_invariant():
    rng = np.random.default_rng(2)
    ms = [sc.from_theta_phases(th, p, q) for th, p, q in
          zip(rng.uniform(0, 0.5, 64), rng.uniform(0, 2 * math.pi, 64), rng.uniform(0, 2 * math.pi, 64))]
    m = sc.compose_transfer(ms)
    assert sc.su11_defect(m.alpha, m.beta) < 1e-10


def test_random_phase_chains_inside_bounds():
    rng = np.random.default_rng(4)
    for _ in range(2000):
        n = int(rng.integers(1, 7))
        ts = (1.0 - rng.random(n)).tolist()
        specs = [BarrierSpec.from_T(t) for t in ts]
        ms = [sc.from_theta_phases(s.theta, *rng.uniform(0, 2 * math.pi, 2)) for s in specs]
        t, r = sc.transmission_reflection(sc.compose_transfer(ms))
        t_int, r_int = sc.n_barrier_bounds(specs)
        assert t_int.contains(t, 1e-9) and r_int.contains(r, 1e-9)
