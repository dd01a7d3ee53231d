"""Proper orthogonal decomposition of snapshot data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError
from .linalg import as_matrix, svd
from .snapshots import SnapshotSet


@dataclass(frozen=True, eq=False)
class PodBasis:
    ur: np.ndarray          # n x r, orthonormal columns
    sigma_all: np.ndarray   # every singular value of the snapshot matrix
    center: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.ur.shape[0]

    @property
    def r(self) -> int:
        return self.ur.shape[1]

    @property
    def energy_captured(self) -> float:
        return float(cumulative_energy(self.sigma_all)[self.r - 1])

    @property
    def tail_bound(self) -> float:
        """Sum of the discarded singular values."""
        return float(np.sum(self.sigma_all[self.r:]))

    @property
    def sigma_next(self) -> float:
        """First discarded singular value (the sharp spectral-norm error)."""
        return float(self.sigma_all[self.r]) if self.r < len(self.sigma_all) else 0.0


def cumulative_energy(sigma) -> np.ndarray:
    s2 = np.asarray(sigma, dtype=float) ** 2
    total = s2.sum()
    if total == 0.0:
        return np.ones_like(s2)
    return np.cumsum(s2) / total


def select_rank(sigma, energy: float) -> int:
    """Smallest r whose squared-singular-value energy reaches ``energy``."""
    if not 0.0 < energy <= 1.0:
        raise ConfigError(f"energy threshold must lie in (0, 1], got {energy}")
    cum = cumulative_energy(sigma)
    # guard against cum[-1] landing a hair below 1.0
    hits = np.nonzero(cum >= energy - 1e-15)[0]
    return int(hits[0]) + 1 if hits.size else len(cum)


def fit_pod(data, rank: int | None = None, energy: float | None = None,
            center: bool = False) -> PodBasis:
    """Fit a POD basis from a ``SnapshotSet`` or an ``n x N`` matrix.

    Exactly one of ``rank`` and ``energy`` must be given. ``center`` subtracts
    the snapshot mean before the SVD (off by default).
    """
    if (rank is None) == (energy is None):
        raise ConfigError("give exactly one of rank or energy")
    if isinstance(data, SnapshotSet):
        if len(data) == 0:
            raise ValueError("snapshot set is empty")
        x = data.stacked_states()
    else:
        x = as_matrix(data, "snapshots")
    mean = None
    if center:
        mean = x.mean(axis=1)
        x = x - mean[:, None]
    f = svd(x)
    if rank is not None:
        if not 1 <= rank <= len(f.sigma):
            raise ConfigError(f"rank {rank} outside [1, {len(f.sigma)}]")
        r = rank
    else:
        r = select_rank(f.sigma, energy)
    return PodBasis(f.u[:, :r].copy(), f.sigma.copy(), mean)


def project(basis: PodBasis, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[0] != basis.n:
        raise DimensionError(f"data has {x.shape[0]} rows, basis has n={basis.n}")
    if basis.center is not None:
        x = x - (basis.center[:, None] if x.ndim == 2 else basis.center)
    return basis.ur.T @ x


def lift(basis: PodBasis, xr) -> np.ndarray:
    xr = np.asarray(xr, dtype=float)
    if xr.shape[0] != basis.r:
        raise DimensionError(f"reduced data has {xr.shape[0]} rows, basis has r={basis.r}")
    out = basis.ur @ xr
    if basis.center is not None:
        out = out + (basis.center[:, None] if out.ndim == 2 else basis.center)
    return out


def project_snapshots(basis: PodBasis, data: SnapshotSet) -> SnapshotSet:
    """Reduce every trajectory; derivatives are projected without centering."""
    out = []
    for t in data:
        d = None if t.derivatives is None else basis.ur.T @ t.derivatives
        out.append(t.with_states(project(basis, t.states), d))
    return SnapshotSet(out, data.labels)


def lift_snapshots(basis: PodBasis, data: SnapshotSet) -> SnapshotSet:
    out = []
    for t in data:
        d = None if t.derivatives is None else basis.ur @ t.derivatives
        out.append(t.with_states(lift(basis, t.states), d))
    return SnapshotSet(out, data.labels)


def energy_table(basis: PodBasis):
    """Rows ``(i, sigma_i, cumulative energy, tail bound after i modes)``."""
    s = basis.sigma_all
    cum = cumulative_energy(s)
    tails = np.concatenate([np.cumsum(s[::-1])[::-1][1:], [0.0]])
    return [(i + 1, float(s[i]), float(cum[i]), float(tails[i])) for i in range(len(s))]
