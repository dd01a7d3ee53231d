"""Seeded data generators: random stable LTI systems, the analytic
transport flow and a finite-difference viscous Burgers solver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConfigError, DivergenceError
from .integrator import InputSignal, MidpointRule, TimeGrid, rk4_step_controlled
from .snapshots import SnapshotSet, Trajectory
from .stableparam import LinearModel, StableParams, assemble


# ---------------------------------------------------------------- LTI systems

def gen_stable_lti(n: int, seed: int = 0, spectral_margin: float = 0.1,
                   m: int = 0) -> LinearModel:
    """Random ``A = (J - R) Q`` with ``R >= spectral_margin * I`` and ``Q > 0``.

    The factors are stored on the returned model so its stability can be
    re-derived. With ``m > 0`` a Gaussian ``B`` is attached.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if spectral_margin <= 0:
        raise ValueError("spectral_margin must be positive")
    rng = np.random.default_rng(seed)
    scale = 1.0 / math.sqrt(n)
    j = rng.normal(0.0, scale, (n, n))
    j = j - j.T
    g = rng.normal(0.0, scale, (n, n))
    r = g @ g.T + spectral_margin * np.eye(n)
    h = rng.normal(0.0, scale, (n, n))
    q = h @ h.T + 0.5 * np.eye(n)
    b = rng.normal(0.0, 1.0, (n, m)) if m else None
    params = StableParams(0.5 * j, np.linalg.cholesky(r), np.linalg.cholesky(q), b)
    return assemble(params)


def sample_trajectories(model: LinearModel, x0s, grid: TimeGrid, inputs=None,
                        substeps: int = 20,
                        midpoint_rule=MidpointRule.LINEAR) -> SnapshotSet:
    """Reference trajectories of ``dx/dt = A x + B u``.

    Autonomous systems are propagated with the matrix exponential. With
    ``inputs`` (one callable ``t -> u(t)`` per initial condition) the ODE is
    integrated by RK4 on a grid ``substeps`` times finer than ``grid`` using
    the exact input, and the input is sampled on the grid nodes. Exact
    derivative snapshots are attached.
    """
    x0s = np.atleast_2d(np.asarray(x0s, dtype=float))
    if x0s.shape[1] != model.n and x0s.shape[0] == model.n:
        x0s = x0s.T
    out = []
    times = grid.times()
    if inputs is None:
        prop = scipy.linalg.expm(model.a * grid.dt)
        for x0 in x0s:
            x = np.empty((model.n, grid.nodes))
            x[:, 0] = x0
            for i in range(grid.steps):
                x[:, i + 1] = prop @ x[:, i]
            out.append(Trajectory(grid, x, None, model.a @ x))
        return SnapshotSet(out)

    if model.b is None:
        raise ConfigError("inputs given but the model has no B")
    if len(inputs) != len(x0s):
        raise ValueError("one input function per initial condition is required")
    h = grid.dt / substeps
    for x0, ufn in zip(x0s, inputs):
        usamp = np.column_stack([np.atleast_1d(ufn(t)) for t in times])
        x = np.empty((model.n, grid.nodes))
        x[:, 0] = x0
        xc = np.asarray(x0, dtype=float)
        for i in range(grid.steps):
            for k in range(substeps):
                t = times[i] + k * h
                xc = rk4_step_controlled(model.a, model.b, xc, np.atleast_1d(ufn(t)),
                                         np.atleast_1d(ufn(t + 0.5 * h)),
                                         np.atleast_1d(ufn(t + h)), h)
            x[:, i + 1] = xc
        xdot = model.a @ x + model.b @ usamp
        out.append(Trajectory(grid, x, InputSignal(usamp, midpoint_rule), xdot))
    return SnapshotSet(out)


# -------------------------------------------------------------- transport flow

@dataclass(frozen=True)
class TransportFlowSpec:
    grid_points_per_axis: int = 200
    times: int = 100
    t_end: float = 5.0
    extent: float = 1.5  # domain is [-extent, extent]^2

    def __post_init__(self):
        if self.grid_points_per_axis < 2 or self.times < 2:
            raise ConfigError("transport flow needs at least 2 grid points and 2 times")


def transport_velocity(x, y, t):
    u = np.sin(5.0 * (t - x)) * np.sin(5.0 * (t - y))
    v = np.cos(5.0 * (t - x)) * np.cos(5.0 * (t - y))
    return u, v


def gen_transport_flow(spec: TransportFlowSpec = TransportFlowSpec()) -> SnapshotSet:
    """One trajectory; each column is ``[u; v]`` flattened in C order over
    ``(x_index, y_index)``, state dimension ``2 g^2``."""
    g = spec.grid_points_per_axis
    axis = np.linspace(-spec.extent, spec.extent, g)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    xx, yy = xx.ravel(), yy.ravel()
    grid = TimeGrid(0.0, spec.t_end / (spec.times - 1), spec.times - 1)
    snaps = np.empty((2 * g * g, spec.times))
    for k, t in enumerate(grid.times()):
        u, v = transport_velocity(xx, yy, t)
        snaps[: g * g, k] = u
        snaps[g * g:, k] = v
    return SnapshotSet([Trajectory(grid, snaps)], ["transport-flow"])


# --------------------------------------------------------------------- Burgers

BURGERS_TEST_FREQUENCIES = (1.75, 2.75, 3.75)


def _default_frequencies():
    return tuple(1.0 + 0.25 * k for k in range(17))


@dataclass(frozen=True)
class BurgersSpec:
    grid_points: int = 1000
    viscosity: float = 0.01
    horizon: float = 1.0
    samples: int = 500
    frequencies: tuple = field(default_factory=_default_frequencies)
    max_substeps: int = 200_000  # per snapshot interval

    def __post_init__(self):
        if self.viscosity <= 0:
            raise ConfigError("viscosity must be positive")
        if self.samples < 2:
            raise ConfigError("samples must be at least 2")
        if self.grid_points < 3:
            raise ConfigError("grid_points must be at least 3")
        if self.horizon <= 0:
            raise ConfigError("horizon must be positive")


def burgers_initial(zeta, f):
    return 1.0 + np.sin((2.0 * f * zeta + 1.0) * np.pi)


def burgers_rhs(v, h, mu):
    """Semi-discrete ``-(v^2/2)_z + mu v_zz`` with mirrored ghost nodes
    (homogeneous Neumann at both ends)."""
    ext = np.empty(v.size + 2)
    ext[1:-1] = v
    ext[0] = v[1]
    ext[-1] = v[-2]
    left, right = ext[:-2], ext[2:]
    conv = (right * right - left * left) / (4.0 * h)
    diff = mu * (right - 2.0 * v + left) / (h * h)
    return diff - conv


def _stable_substep(v, h, mu):
    vmax = float(np.max(np.abs(v)))
    dt_diff = 0.3 * h * h / mu
    dt_conv = 0.8 * h / vmax if vmax > 0 else np.inf
    return min(dt_diff, dt_conv)


def solve_burgers(v0, spec: BurgersSpec) -> np.ndarray:
    """Integrate from ``v0``; returns ``grid_points x samples`` snapshots."""
    m = spec.grid_points
    h = 1.0 / (m - 1)
    mu = spec.viscosity
    dt_snap = spec.horizon / (spec.samples - 1)
    out = np.empty((m, spec.samples))
    v = np.array(v0, dtype=float)
    out[:, 0] = v
    for k in range(1, spec.samples):
        nsub = max(1, math.ceil(dt_snap / _stable_substep(v, h, mu)))
        if nsub > spec.max_substeps:
            raise ConfigError(
                f"Burgers step needs {nsub} substeps per sample, cap is {spec.max_substeps}")
        tau = dt_snap / nsub
        for _ in range(nsub):
            k1 = burgers_rhs(v, h, mu)
            k2 = burgers_rhs(v + 0.5 * tau * k1, h, mu)
            k3 = burgers_rhs(v + 0.5 * tau * k2, h, mu)
            k4 = burgers_rhs(v + tau * k3, h, mu)
            v = v + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(v)):
            raise DivergenceError(f"Burgers solver diverged at sample {k}", step=k,
                                  partial=out[:, :k].copy())
        out[:, k] = v
    return out


def gen_burgers(spec: BurgersSpec = BurgersSpec()) -> SnapshotSet:
    """One trajectory per frequency, labelled ``f=<value>``."""
    zeta = np.linspace(0.0, 1.0, spec.grid_points)
    grid = TimeGrid(0.0, spec.horizon / (spec.samples - 1), spec.samples - 1)
    trajs, labels = [], []
    for f in spec.frequencies:
        trajs.append(Trajectory(grid, solve_burgers(burgers_initial(zeta, f), spec)))
        labels.append(f"f={float(f)!r}")
    return SnapshotSet(trajs, labels)


def label_frequency(label: str) -> float:
    return float(label.split("=", 1)[1])


def burgers_split(data: SnapshotSet, test_frequencies=BURGERS_TEST_FREQUENCIES):
    """Split into ``(train, test)`` by the frequency labels."""
    if data.labels is None:
        raise ValueError("Burgers data must carry f=<value> labels")
    freqs = [label_frequency(s) for s in data.labels]
    test = [i for i, f in enumerate(freqs) if any(abs(f - tf) < 1e-12 for tf in test_frequencies)]
    train = [i for i in range(len(freqs)) if i not in test]
    return data.subset(train), data.subset(test)


# ----------------------------------------------------------------------- noise

def add_noise(data: SnapshotSet, sigma_rel: float, seed: int = 0) -> SnapshotSet:
    """Additive Gaussian noise on the states, std = sigma_rel * RMS(states)."""
    if sigma_rel < 0:
        raise ValueError("sigma_rel must be nonnegative")
    if sigma_rel == 0:
        return SnapshotSet(list(data), data.labels)
    rng = np.random.default_rng(seed)
    x = data.stacked_states()
    std = sigma_rel * float(np.sqrt(np.mean(x * x)))
    out = []
    for t in data:
        noisy = t.states + rng.normal(0.0, std, t.states.shape)
        out.append(Trajectory(t.grid, noisy, t.inputs, t.derivatives))
    return SnapshotSet(out, data.labels)
