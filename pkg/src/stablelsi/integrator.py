"""Classical fourth-order Runge-Kutta maps for linear systems.

``rk4_step`` and ``rk4_step_controlled`` accept either a single state vector
or an ``n x K`` block of states (one per column); the step is linear in the
state so both forms agree column by column.

Other one-step schemes can be plugged into ``simulate`` through its
``step`` argument as long as they share ``rk4_step_controlled``'s signature.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, DivergenceError
from .linalg import as_matrix
from .stableparam import LinearModel


class MidpointRule(str, Enum):
    LINEAR = "linear-interpolation"
    ZOH = "zero-order-hold"


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    dt: float
    steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")

    @property
    def nodes(self) -> int:
        return self.steps + 1

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.nodes)


@dataclass(frozen=True, eq=False)
class InputSignal:
    """Input samples on the grid nodes, ``m x (N + 1)``."""

    samples: np.ndarray
    midpoint_rule: MidpointRule = MidpointRule.LINEAR

    def __post_init__(self):
        object.__setattr__(self, "samples", as_matrix(self.samples, "input samples"))
        object.__setattr__(self, "midpoint_rule", MidpointRule(self.midpoint_rule))

    @property
    def m(self) -> int:
        return self.samples.shape[0]

    def midpoints(self) -> np.ndarray:
        """Inputs at ``t_i + dt/2`` for every interval, ``m x N``."""
        u = self.samples
        if self.midpoint_rule is MidpointRule.ZOH:
            return u[:, :-1].copy()
        return 0.5 * (u[:, :-1] + u[:, 1:])

    def stage_inputs(self):
        """``(u_now, u_mid, u_next)`` blocks, each ``m x N``."""
        u = self.samples
        return u[:, :-1], self.midpoints(), u[:, 1:]


def _check_step_shapes(a, x):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"A must be square, got {a.shape}")
    if x.shape[0] != a.shape[0]:
        raise DimensionError(f"state has dimension {x.shape[0]}, A is {a.shape[0]}x{a.shape[0]}")


def rk4_step(a, x, dt: float):
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    _check_step_shapes(a, x)
    if not dt > 0:
        raise ValueError("dt must be positive")
    h1 = a @ x
    h2 = a @ (x + 0.5 * dt * h1)
    h3 = a @ (x + 0.5 * dt * h2)
    h4 = a @ (x + dt * h3)
    return x + dt / 6.0 * (h1 + 2.0 * h2 + 2.0 * h3 + h4)


def rk4_step_controlled(a, b, x, u_now, u_mid, u_next, dt: float):
    """RK4 for ``dx/dt = A x + B u`` with inputs at the three stage times."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    _check_step_shapes(a, x)
    if b.ndim != 2 or b.shape[0] != a.shape[0]:
        raise DimensionError(f"B has shape {b.shape}, expected ({a.shape[0]}, m)")
    if not dt > 0:
        raise ValueError("dt must be positive")
    bu0 = b @ np.asarray(u_now, dtype=float)
    bum = b @ np.asarray(u_mid, dtype=float)
    bu1 = b @ np.asarray(u_next, dtype=float)
    h1 = a @ x + bu0
    h2 = a @ (x + 0.5 * dt * h1) + bum
    h3 = a @ (x + 0.5 * dt * h2) + bum
    h4 = a @ (x + dt * h3) + bu1
    return x + dt / 6.0 * (h1 + 2.0 * h2 + 2.0 * h3 + h4)


def simulate(model: LinearModel, x0, grid: TimeGrid, u: InputSignal | None = None,
             step=rk4_step_controlled) -> np.ndarray:
    """Roll the model forward over ``grid``; returns ``n x (N + 1)``.

    Raises ``DivergenceError`` carrying the finite prefix of the trajectory
    if a non-finite state appears.
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    n = model.n
    if x0.shape[0] != n:
        raise DimensionError(f"x0 has length {x0.shape[0]}, model has n={n}")
    if model.b is not None:
        if u is None:
            raise ValueError("model has an input matrix B; an input signal is required")
        if u.m != model.m:
            raise DimensionError(f"input has m={u.m}, model expects m={model.m}")
        if u.samples.shape[1] != grid.nodes:
            raise DimensionError(
                f"input has {u.samples.shape[1]} samples, grid has {grid.nodes} nodes")
        b = model.b
        u_now, u_mid, u_next = u.stage_inputs()
    else:
        # autonomous: a zero-width input keeps one code path for every scheme
        b = np.zeros((n, 0))
        u_now = u_mid = u_next = np.zeros((0, grid.steps))

    traj = np.empty((n, grid.nodes))
    traj[:, 0] = x0
    x = x0
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(grid.steps):
            x = step(model.a, b, x, u_now[:, i], u_mid[:, i], u_next[:, i], grid.dt)
            if not np.all(np.isfinite(x)):
                raise DivergenceError(
                    f"simulation produced non-finite state at step {i + 1}", step=i + 1,
                    partial=traj[:, : i + 1].copy())
            traj[:, i + 1] = x
    return traj
