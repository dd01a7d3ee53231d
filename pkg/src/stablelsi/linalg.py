"""Dense real linear algebra used throughout the toolkit.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. The three
factorizations (SVD, nonsymmetric eigenvalues, pseudo-inverse) delegate to
LAPACK through numpy; this module owns validation, the result types and the
tolerances the rest of the package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, FactorizationError


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D float64 array, or raise."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one row and column, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


def as_vector(x, n: int | None = None, name: str = "vector") -> np.ndarray:
    v = np.asarray(x, dtype=np.float64).reshape(-1)
    if n is not None and v.shape[0] != n:
        raise DimensionError(f"{name} has length {v.shape[0]}, expected {n}")
    return v


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.sigma)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # complex, length n

    @property
    def max_real(self) -> float:
        return float(np.max(self.eigenvalues.real))

    def __len__(self):
        return len(self.eigenvalues)


def svd(m) -> SvdResult:
    """Thin SVD with ``k = min(rows, cols)`` singular triplets."""
    a = as_matrix(m)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(
            f"SVD did not converge for {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    return SvdResult(u, s, vt)


def eigenvalues(m) -> Spectrum:
    """Eigenvalues of a real square matrix.

    LAPACK ``geev`` balances, reduces to Hessenberg form and runs the
    Francis double-shift QR iteration. Complex eigenvalues come back as exact
    conjugate pairs.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"eigenvalues need a square matrix, got {a.shape}")
    try:
        lam = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(
            f"QR iteration did not converge for {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    lam = lam.astype(np.complex128)
    # sort for reproducible reports: by real part, then imaginary part
    order = np.lexsort((lam.imag, lam.real))
    return Spectrum(lam[order])


def default_rcond(shape) -> float:
    return 1e-12 * max(shape)


def pseudo_inverse(m, rcond: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse.

    Singular values below ``rcond * sigma_1`` are treated as zero. The
    default is ``1e-12 * max(rows, cols)``.
    """
    a = as_matrix(m)
    if rcond is None:
        rcond = default_rcond(a.shape)
    if rcond < 0:
        raise ValueError("rcond must be nonnegative")
    f = svd(a)
    if f.sigma.size == 0 or f.sigma[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]))
    keep = f.sigma > rcond * f.sigma[0]
    inv = np.zeros_like(f.sigma)
    inv[keep] = 1.0 / f.sigma[keep]
    return (f.vt.T * inv) @ f.u.T


def spectral_norm(m) -> float:
    return float(svd(m).sigma[0])
