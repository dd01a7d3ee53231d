import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stablelsi.compression import (cumulative_energy, energy_table, fit_pod, lift, project,
                                   project_snapshots, select_rank)
from stablelsi.datagen import TransportFlowSpec, gen_transport_flow
from stablelsi.errors import ConfigError, DimensionError
from stablelsi.linalg import eigenvalues


def spectral_norm_via_eigs(e):
    """||E||_2 as sqrt(lambda_max(E^T E)) from the nonsymmetric eigensolver."""
    g = e.T @ e if e.shape[0] >= e.shape[1] else e @ e.T
    return float(np.sqrt(max(0.0, eigenvalues(g).eigenvalues.real.max())))


def low_rank_data(n=40, N=25, rank=6, seed=0, noise=1e-3):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, rank)) @ rng.normal(size=(rank, N))
    return x + noise * rng.normal(size=(n, N))


def test_rank_one_data_any_threshold():
    x = np.outer(np.arange(1.0, 6.0), np.linspace(-1, 1, 7))
    for eta in (0.1, 0.5, 0.999, 1.0):
        assert fit_pod(x, energy=eta).r == 1


def test_basis_invariants():
    b = fit_pod(low_rank_data(), rank=5)
    assert np.linalg.norm(b.ur.T @ b.ur - np.eye(5)) <= 1e-10 * 5
    s2 = b.sigma_all ** 2
    assert b.energy_captured == pytest.approx(s2[:5].sum() / s2.sum(), rel=1e-14)
    assert b.tail_bound == pytest.approx(b.sigma_all[5:].sum())
    assert b.sigma_next == b.sigma_all[5]


def test_energy_criterion_selects_smallest_rank():
    x = low_rank_data()
    for eta in (0.5, 0.9, 0.99, 0.9999):
        b = fit_pod(x, energy=eta)
        cum = cumulative_energy(b.sigma_all)
        assert cum[b.r - 1] >= eta
        assert b.r == 1 or cum[b.r - 2] < eta


@pytest.mark.parametrize("eta", [0.0, -0.1, 1.5])
def test_energy_out_of_range(eta):
    with pytest.raises(ConfigError):
        fit_pod(low_rank_data(), energy=eta)


def test_rank_out_of_range():
    with pytest.raises(ConfigError):
        fit_pod(low_rank_data(n=5, N=4), rank=5)


def test_project_exact_representation():
    b = fit_pod(low_rank_data(), rank=4)
    c = np.random.default_rng(1).normal(size=(4, 9))
    np.testing.assert_allclose(project(b, b.ur @ c), c, atol=1e-12)
    np.testing.assert_array_equal(project(b, np.zeros((40, 3))), 0.0)
    np.testing.assert_array_equal(lift(b, np.zeros((4, 3))), 0.0)


def test_round_trip_reduced_space():
    b = fit_pod(low_rank_data(seed=2), rank=4)
    c = np.random.default_rng(3).normal(size=(4, 11))
    assert np.max(np.abs(project(b, lift(b, c)) - c)) < 1e-12
    full = b.ur @ c
    np.testing.assert_allclose(lift(b, project(b, full)), full, atol=1e-12)


def test_dimension_errors():
    b = fit_pod(low_rank_data(), rank=3)
    with pytest.raises(DimensionError):
        project(b, np.ones((39, 2)))
    with pytest.raises(DimensionError):
        lift(b, np.ones((4, 2)))


def test_projection_idempotent():
    x = low_rank_data(seed=4)
    b = fit_pod(x, rank=3)
    once = lift(b, project(b, x))
    twice = lift(b, project(b, once))
    np.testing.assert_allclose(once, twice, atol=1e-12)


def test_transport_flow_is_three_modes():
    data = gen_transport_flow(TransportFlowSpec(grid_points_per_axis=30, times=60))
    b = fit_pod(data, rank=3)
    assert b.energy_captured >= 1 - 1e-10
    assert fit_pod(data, energy=1 - 1e-12).r <= 3


def test_basis_deterministic_up_to_sign():
    x = low_rank_data(seed=5)
    b1 = fit_pod(x, rank=4)
    b2 = fit_pod(x.copy(), rank=4)
    p1, p2 = b1.ur @ b1.ur.T, b2.ur @ b2.ur.T
    assert np.linalg.norm(p1 - p2) < 1e-10


def test_centering_flag():
    x = low_rank_data(seed=6) + 5.0
    b = fit_pod(x, rank=3, center=True)
    np.testing.assert_allclose(b.center, x.mean(axis=1))
    np.testing.assert_allclose(lift(b, project(b, b.center[:, None])), b.center[:, None],
                               atol=1e-10)


def test_energy_table_rows():
    b = fit_pod(low_rank_data(), rank=2)
    rows = energy_table(b)
    assert rows[1][3] == pytest.approx(b.tail_bound)
    assert rows[-1][2] == pytest.approx(1.0) and rows[-1][3] == 0.0


def test_select_rank_zero_data():
    assert select_rank(np.zeros(4), 0.9) == 1


def test_project_snapshots_shapes(small_lti_data):
    _, data = small_lti_data
    b = fit_pod(data, rank=2)
    red = project_snapshots(b, data)
    assert red.n == 2 and len(red) == len(data)
    assert red[0].derivatives.shape == (2, data[0].states.shape[1])


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 30), N=st.integers(2, 30), r=st.integers(1, 30),
       seed=st.integers(0, 2**31))
def test_truncation_bound(n, N, r, seed):
    x = np.random.default_rng(seed).normal(size=(n, N))
    r = min(r, n, N)
    b = fit_pod(x, rank=r)
    err = spectral_norm_via_eigs(x - lift(b, project(b, x)))
    assert err <= b.tail_bound + 1e-8
    # the sharp value is the first discarded singular value
    assert err == pytest.approx(b.sigma_next, abs=1e-7 * (1 + b.sigma_all[0]))
