import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from stablelsi.datagen import gen_stable_lti
from stablelsi.errors import DimensionError, DivergenceError
from stablelsi.integrator import (InputSignal, MidpointRule, TimeGrid, rk4_step,
                                  rk4_step_controlled, simulate)
from stablelsi.stableparam import LinearModel, init_params, assemble, lyapunov_value

ROT = np.array([[0.0, 1.0], [-1.0, 0.0]])


def taylor4(z):
    return 1 + z + z**2 / 2 + z**3 / 6 + z**4 / 24


def test_zero_dynamics():
    x = np.array([1.0, -2.0])
    np.testing.assert_array_equal(rk4_step(np.zeros((2, 2)), x, 0.3), x)


def test_scalar_decay_matches_taylor():
    # 1 - 0.1 + 0.005 - 0.000166666... + 0.0000041666... = 0.9048375
    assert rk4_step([[-1.0]], [1.0], 0.1)[0] == pytest.approx(0.9048375, abs=1e-15)
    assert rk4_step([[-1.0]], [1.0], 0.1)[0] == pytest.approx(taylor4(-0.1), abs=1e-15)


def test_local_error_order_on_rotation():
    x0 = np.array([1.0, 0.0])

    def err(dt):
        exact = np.array([math.cos(dt), -math.sin(dt)])
        return np.linalg.norm(rk4_step(ROT, x0, dt) - exact)

    ratio = err(0.2) / err(0.1)
    # one-step error is O(dt^5): halving dt shrinks it ~2^5
    assert 28 < ratio < 36


def test_controlled_reduces_to_autonomous():
    a = np.random.default_rng(0).normal(size=(3, 3))
    x = np.array([0.3, -1.0, 2.0])
    u = np.array([1.0, 2.0])
    got = rk4_step_controlled(a, np.zeros((3, 2)), x, u, u, u, 0.05)
    np.testing.assert_allclose(got, rk4_step(a, x, 0.05), rtol=0, atol=1e-15)


def test_controlled_pure_integrator():
    x = np.array([1.0, 2.0])
    u = np.array([0.5, -3.0])
    got = rk4_step_controlled(np.zeros((2, 2)), np.eye(2), x, u, u, u, 0.1)
    np.testing.assert_allclose(got, x + 0.1 * u, rtol=0, atol=1e-15)


def test_controlled_scalar_affine():
    # x' = -x + 1 from 0: exact 1 - e^-dt, RK4 keeps the degree-4 Taylor part
    got = rk4_step_controlled([[-1.0]], [[1.0]], [0.0], [1.0], [1.0], [1.0], 0.1)[0]
    assert got == pytest.approx(1 - taylor4(-0.1), abs=1e-15)
    assert got == pytest.approx(0.0951625, abs=1e-15)


def test_step_dimension_errors():
    with pytest.raises(DimensionError):
        rk4_step(np.eye(2), np.ones(3), 0.1)
    with pytest.raises(DimensionError):
        rk4_step_controlled(np.eye(2), np.ones((3, 1)), np.ones(2), [1.0], [1.0], [1.0], 0.1)


def test_simulate_zero_steps():
    traj = simulate(LinearModel(ROT), [1.0, 2.0], TimeGrid(0.0, 0.1, 0))
    assert traj.shape == (2, 1)
    np.testing.assert_array_equal(traj[:, 0], [1.0, 2.0])


def test_simulate_rotation_full_turn():
    traj = simulate(LinearModel(ROT), [1.0, 0.0], TimeGrid(0.0, 0.01, 628))
    np.testing.assert_allclose(traj[:, -1], [math.cos(6.28), -math.sin(6.28)], atol=1e-6)


def test_simulate_long_horizon_stays_in_level_set():
    model = gen_stable_lti(4, seed=3)
    p = model.params
    x0 = np.random.default_rng(1).normal(size=4)
    traj = simulate(model, x0, TimeGrid(0.0, 0.01, 10_000))
    q = p.qbar @ p.qbar.T
    qmin = np.linalg.eigvalsh(q).min()
    # ||x||^2 <= x'Qx / lambda_min(Q) and x'Qx never grows
    bound = math.sqrt(2 * lyapunov_value(p, x0) / qmin)
    assert np.max(np.linalg.norm(traj, axis=0)) <= bound * (1 + 1e-8)


def test_simulate_reports_divergence():
    model = LinearModel([[1000.0]])
    with pytest.raises(DivergenceError) as info:
        simulate(model, [1.0], TimeGrid(0.0, 1.0, 500))
    assert info.value.step > 0
    assert np.all(np.isfinite(info.value.partial))


def test_simulate_requires_inputs_for_b():
    model = LinearModel(-np.eye(2), np.ones((2, 1)))
    with pytest.raises(ValueError):
        simulate(model, [1.0, 1.0], TimeGrid(0.0, 0.1, 3))


def test_input_midpoint_rules():
    samples = np.array([[0.0, 2.0, 4.0]])
    lin = InputSignal(samples)
    zoh = InputSignal(samples, MidpointRule.ZOH)
    np.testing.assert_array_equal(lin.midpoints(), [[1.0, 3.0]])
    np.testing.assert_array_equal(zoh.midpoints(), [[0.0, 2.0]])


def test_simulate_controlled_matches_steps():
    model = LinearModel(-np.eye(2), np.array([[1.0], [0.5]]))
    u = InputSignal(np.sin(np.linspace(0, 1, 6))[None, :])
    traj = simulate(model, [1.0, 0.0], TimeGrid(0.0, 0.2, 5), u)
    x = np.array([1.0, 0.0])
    u0, um, u1 = u.stage_inputs()
    for i in range(5):
        x = rk4_step_controlled(model.a, model.b, x, u0[:, i], um[:, i], u1[:, i], 0.2)
    np.testing.assert_array_equal(traj[:, -1], x)


def test_global_order_four():
    x0 = np.array([1.0, 0.0])
    dts = [0.1, 0.05, 0.025, 0.0125]
    errs = []
    for dt in dts:
        steps = round(2 * math.pi / dt)
        end = simulate(LinearModel(ROT), x0, TimeGrid(0.0, dt, steps))[:, -1]
        exact = scipy.linalg.expm(ROT * steps * dt) @ x0
        errs.append(np.linalg.norm(end - exact))
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert abs(slope - 4) <= 0.2


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**31), dt=st.floats(1e-3, 0.5))
def test_rk4_linear_in_state(n, seed, dt):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    x, y = rng.normal(size=n), rng.normal(size=n)
    al, be = rng.normal(size=2)
    lhs = rk4_step(a, al * x + be * y, dt)
    rhs = al * rk4_step(a, x, dt) + be * rk4_step(a, y, dt)
    scale = 1 + np.linalg.norm(lhs) + abs(al) * np.linalg.norm(x) + abs(be) * np.linalg.norm(y)
    assert np.linalg.norm(lhs - rhs) <= 1e-13 * scale * (1 + dt * np.linalg.norm(a)) ** 4


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 2**31))
def test_discrete_lyapunov_nonincreasing(n, seed):
    p = init_params(n, seed=seed, std=0.7)
    a = assemble(p).a
    if np.linalg.norm(a, 2) > 10:
        p = p.replace(qbar=p.qbar * math.sqrt(10 / np.linalg.norm(a, 2)))
        a = assemble(p).a
    x = np.random.default_rng(seed).normal(size=n)
    traj = simulate(assemble(p), x, TimeGrid(0.0, 0.01, 300))
    v = [lyapunov_value(p, traj[:, i]) for i in range(traj.shape[1])]
    assert np.all(np.diff(v) <= 1e-8 * (1 + v[0]))
