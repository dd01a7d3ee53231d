"""Stable matrix parameterization A = (J - R) Q.

The trainable factors are unconstrained square matrices ``jbar``, ``rbar``
and ``qbar``; the structured parts are

    J = jbar - jbar.T        (skew-symmetric)
    R = rbar @ rbar.T        (symmetric positive semidefinite)
    Q = qbar @ qbar.T        (symmetric positive semidefinite)

so every assembled ``A`` has its spectrum in the closed left half-plane and
``V(x) = x.T Q x / 2`` is a Lyapunov function for ``dx/dt = A x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import DimensionError
from .linalg import as_matrix, as_vector, eigenvalues, Spectrum

#: Tolerance for the numerical closed-left-half-plane check.
STABILITY_TOL = 1e-8

DEFAULT_INIT_STD = 0.1


class Provenance(str, Enum):
    STABLE = "stable-parameterized"
    UNCONSTRAINED = "unconstrained"


@dataclass(frozen=True, eq=False)
class StableParams:
    jbar: np.ndarray
    rbar: np.ndarray
    qbar: np.ndarray
    bbar: np.ndarray | None = None

    def __post_init__(self):
        jbar = as_matrix(self.jbar, "jbar")
        n = jbar.shape[0]
        for name in ("jbar", "rbar", "qbar"):
            m = as_matrix(getattr(self, name), name)
            if m.shape != (n, n):
                raise DimensionError(f"{name} has shape {m.shape}, expected ({n}, {n})")
            object.__setattr__(self, name, m)
        if self.bbar is not None:
            b = as_matrix(self.bbar, "bbar")
            if b.shape[0] != n:
                raise DimensionError(f"bbar has {b.shape[0]} rows, expected {n}")
            object.__setattr__(self, "bbar", b)

    @property
    def n(self) -> int:
        return self.jbar.shape[0]

    @property
    def m(self) -> int:
        return 0 if self.bbar is None else self.bbar.shape[1]

    def arrays(self) -> dict[str, np.ndarray]:
        out = {"jbar": self.jbar, "rbar": self.rbar, "qbar": self.qbar}
        if self.bbar is not None:
            out["bbar"] = self.bbar
        return out

    def replace(self, **kw) -> "StableParams":
        return replace(self, **kw)


@dataclass(frozen=True, eq=False)
class LinearModel:
    a: np.ndarray
    b: np.ndarray | None = None
    provenance: Provenance = Provenance.UNCONSTRAINED
    params: StableParams | None = field(default=None, repr=False)

    def __post_init__(self):
        a = as_matrix(self.a, "a")
        if a.shape[0] != a.shape[1]:
            raise DimensionError(f"A must be square, got {a.shape}")
        object.__setattr__(self, "a", a)
        if self.b is not None:
            b = as_matrix(self.b, "b")
            if b.shape[0] != a.shape[0]:
                raise DimensionError(f"B has {b.shape[0]} rows, expected {a.shape[0]}")
            object.__setattr__(self, "b", b)
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return 0 if self.b is None else self.b.shape[1]

    def spectrum(self) -> Spectrum:
        return eigenvalues(self.a)

    def is_stable(self, tol: float = STABILITY_TOL) -> bool:
        return self.spectrum().max_real <= tol


def structured_parts(jbar, rbar, qbar):
    """Return ``(J, R, Q)`` from raw factors without validation."""
    return jbar - jbar.T, rbar @ rbar.T, qbar @ qbar.T


def assemble_matrix(jbar, rbar, qbar) -> np.ndarray:
    j, r, q = structured_parts(jbar, rbar, qbar)
    return (j - r) @ q


def assemble(p: StableParams) -> LinearModel:
    a = assemble_matrix(p.jbar, p.rbar, p.qbar)
    return LinearModel(a, p.bbar, Provenance.STABLE, params=p)


def decompose_parts(p: StableParams):
    """Skew ``J``, PSD ``R`` and PSD ``Q`` with ``(J - R) Q == assemble(p).a``."""
    return structured_parts(p.jbar, p.rbar, p.qbar)


def lyapunov_value(p: StableParams, x) -> float:
    x = as_vector(x, p.n, "x")
    qx = p.qbar.T @ x
    return 0.5 * float(qx @ qx)


def lyapunov_rate(p: StableParams, x) -> float:
    """Time derivative of ``V`` along ``dx/dt = A x``, i.e. ``x.T Q A x``."""
    x = as_vector(x, p.n, "x")
    _, _, q = decompose_parts(p)
    a = assemble(p).a
    return float(x @ (q @ (a @ x)))


def init_params(n: int, m: int | None = None, seed: int = 0,
                std: float = DEFAULT_INIT_STD) -> StableParams:
    """Draw every factor entry i.i.d. from N(0, std**2).

    Uses numpy's PCG64 generator seeded with ``seed``; draw order is jbar,
    rbar, qbar, bbar so equal seeds give bitwise-identical factors.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if std <= 0:
        raise ValueError("std must be positive")
    rng = np.random.default_rng(seed)
    jbar = rng.normal(0.0, std, (n, n))
    rbar = rng.normal(0.0, std, (n, n))
    qbar = rng.normal(0.0, std, (n, n))
    bbar = rng.normal(0.0, std, (n, m)) if m else None
    return StableParams(jbar, rbar, qbar, bbar)
