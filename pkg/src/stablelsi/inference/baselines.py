"""Derivative-based least-squares fit (operator inference with a linear term)."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, DimensionError
from ..linalg import as_matrix, pseudo_inverse
from ..snapshots import SnapshotSet
from ..stableparam import LinearModel, Provenance


def fit_derivative_ls(x, xdot, u=None, rcond: float | None = None) -> LinearModel:
    """Minimal-norm solution of ``min ||Xdot - A X||_F`` as ``A = Xdot X^+``.

    With inputs ``U`` the regression is on the stacked data ``[X; U]`` and
    ``[A, B]`` is split off the result.
    """
    x = as_matrix(x, "X")
    xdot = as_matrix(xdot, "Xdot")
    if x.shape != xdot.shape:
        raise DimensionError(f"X is {x.shape} but Xdot is {xdot.shape}")
    n = x.shape[0]
    if u is None:
        return LinearModel(xdot @ pseudo_inverse(x, rcond), None, Provenance.UNCONSTRAINED)
    u = as_matrix(u, "U")
    if u.shape[1] != x.shape[1]:
        raise DimensionError("U must have one column per snapshot")
    ab = xdot @ pseudo_inverse(np.vstack([x, u]), rcond)
    return LinearModel(ab[:, :n], ab[:, n:], Provenance.UNCONSTRAINED)


def fit_derivative_ls_snapshots(data: SnapshotSet, rcond: float | None = None) -> LinearModel:
    if not data.has_derivatives:
        raise ConfigError("derivative-based fitting needs derivative snapshots")
    u = data.stacked_inputs() if data.has_inputs else None
    return fit_derivative_ls(data.stacked_states(), data.stacked_derivatives(), u, rcond)
