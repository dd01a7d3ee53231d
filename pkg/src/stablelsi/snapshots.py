"""Snapshot containers: trajectories sampled on uniform time grids."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .integrator import InputSignal, TimeGrid
from .linalg import as_matrix


@dataclass(frozen=True, eq=False)
class Trajectory:
    grid: TimeGrid
    states: np.ndarray  # n x (N + 1)
    inputs: InputSignal | None = None
    derivatives: np.ndarray | None = None  # n x (N + 1)

    def __post_init__(self):
        x = as_matrix(self.states, "states")
        object.__setattr__(self, "states", x)
        if x.shape[1] != self.grid.nodes:
            raise DimensionError(
                f"states have {x.shape[1]} columns, grid has {self.grid.nodes} nodes")
        if self.inputs is not None and self.inputs.samples.shape[1] != self.grid.nodes:
            raise DimensionError(
                f"inputs have {self.inputs.samples.shape[1]} columns, "
                f"grid has {self.grid.nodes} nodes")
        if self.derivatives is not None:
            d = as_matrix(self.derivatives, "derivatives")
            if d.shape != x.shape:
                raise DimensionError(f"derivatives have shape {d.shape}, states {x.shape}")
            object.__setattr__(self, "derivatives", d)

    @property
    def n(self) -> int:
        return self.states.shape[0]

    @property
    def m(self) -> int:
        return 0 if self.inputs is None else self.inputs.m

    def with_states(self, states, derivatives=None) -> "Trajectory":
        return Trajectory(self.grid, states, self.inputs, derivatives)


@dataclass(frozen=True, eq=False)
class SnapshotSet:
    trajectories: tuple[Trajectory, ...] = field(default_factory=tuple)
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        trajs = tuple(self.trajectories)
        object.__setattr__(self, "trajectories", trajs)
        if trajs:
            n = trajs[0].n
            for k, t in enumerate(trajs):
                if t.n != n:
                    raise DimensionError(f"trajectory {k} has n={t.n}, expected {n}")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(trajs):
                raise DimensionError("one label per trajectory required")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.trajectories)

    def __iter__(self):
        return iter(self.trajectories)

    def __getitem__(self, k):
        return self.trajectories[k]

    @property
    def n(self) -> int:
        if not self.trajectories:
            raise ValueError("empty snapshot set has no state dimension")
        return self.trajectories[0].n

    @property
    def has_inputs(self) -> bool:
        return any(t.inputs is not None for t in self.trajectories)

    @property
    def has_derivatives(self) -> bool:
        return bool(self.trajectories) and all(
            t.derivatives is not None for t in self.trajectories)

    def stacked_states(self) -> np.ndarray:
        """All snapshots side by side, ``n x sum(N_k + 1)``."""
        return np.hstack([t.states for t in self.trajectories])

    def stacked_derivatives(self) -> np.ndarray:
        return np.hstack([t.derivatives for t in self.trajectories])

    def stacked_inputs(self) -> np.ndarray:
        return np.hstack([t.inputs.samples for t in self.trajectories])

    def subset(self, indices) -> "SnapshotSet":
        idx = list(indices)
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        return SnapshotSet([self.trajectories[i] for i in idx], labels)

    def map_states(self, fn) -> "SnapshotSet":
        """Apply ``fn`` to every state (and derivative) block."""
        out = []
        for t in self.trajectories:
            d = None if t.derivatives is None else fn(t.derivatives)
            out.append(t.with_states(fn(t.states), d))
        return SnapshotSet(out, self.labels)
