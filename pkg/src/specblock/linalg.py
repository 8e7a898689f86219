"""Dense complex linear algebra kernel.

Hermitian eigendecomposition with a reproducible phase convention, spectral
projectors, an SVD pseudo-inverse, and a general eigensolver used for
companion-linearized quadratic eigenproblems.  LAPACK (through numpy)
supplies the factorizations; this module owns validation, ordering and phase
normalization so that results are deterministic for fixed input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, NumericError

__all__ = [
    "Interval",
    "SpectralDecomposition",
    "as_matrix",
    "require_hermitian",
    "hermitian_defect",
    "hermitian_eig",
    "spectral_projector",
    "pseudo_inverse",
    "general_eig",
    "spectral_distance",
    "operator_norm",
    "orthonormality_defect",
]

# Phase convention: first component of each eigenvector whose modulus exceeds
# this is rotated to the real positive axis.  Columns are unit vectors, so
# every column has a component well above the threshold.
_PHASE_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Real interval with independently open or closed endpoints."""

    lo: float
    hi: float
    open_lo: bool = False
    open_hi: bool = False

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ArgumentError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ArgumentError(
                f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    def contains(self, x: float) -> bool:
        above_lo = x > self.lo if self.open_lo else x >= self.lo
        below_hi = x < self.hi if self.open_hi else x <= self.hi
        return bool(above_lo and below_hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __str__(self):
        left = "(" if self.open_lo else "["
        right = ")" if self.open_hi else "]"
        return f"{left}{self.lo:.12g}, {self.hi:.12g}{right}"


def as_matrix(x, square: bool = False) -> np.ndarray:
    """Validate ``x`` as a finite complex 2-D array and return it as complex128."""
    mat = np.asarray(x, dtype=np.complex128)
    if mat.ndim != 2:
        raise ArgumentError(f"expected a 2-D array, got ndim = {mat.ndim}")
    if mat.size and not np.all(np.isfinite(mat)):
        raise ArgumentError("matrix entries must be finite (no NaN/Inf)")
    if square and mat.shape[0] != mat.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def hermitian_defect(mat) -> float:
    """Entrywise max of |H - H*|."""
    arr = np.asarray(mat)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr - arr.conj().T)))


def require_hermitian(mat, tol: float | None = None) -> np.ndarray:
    """Check Hermiticity within ``tol`` and return the exact Hermitian part.

    The default tolerance is 1e-12 * max|entry|, matching the stored-type
    invariant.  The returned matrix is (H + H*)/2, so downstream code can rely
    on exact symmetry.
    """
    arr = as_matrix(mat, square=True)
    scale = float(np.max(np.abs(arr))) if arr.size else 0.0
    if tol is None:
        tol = 1e-12 * scale
    defect = hermitian_defect(arr)
    if defect > tol:
        raise ArgumentError(
            f"matrix is not Hermitian: defect {defect:.3e} exceeds tol {tol:.3e}")
    return 0.5 * (arr + arr.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` ascend; ``vectors`` holds matching orthonormal
    eigenvectors as columns, phase-normalized so the first nonvanishing
    component of every column is real positive.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    def window_mask(self, window: Interval) -> np.ndarray:
        return np.fromiter(
            (window.contains(float(ev)) for ev in self.eigenvalues),
            dtype=bool, count=self.dim)


def _normalize_phases(vectors: np.ndarray) -> np.ndarray:
    out = np.array(vectors, copy=True)
    for j in range(out.shape[1]):
        col = out[:, j]
        nonzero = np.nonzero(np.abs(col) > _PHASE_ZERO_TOL)[0]
        if nonzero.size == 0:
            continue
        pivot = col[nonzero[0]]
        out[:, j] = col * (pivot.conjugate() / abs(pivot))
    return out


def hermitian_eig(mat, tol: float | None = None) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Raises ArgumentError for non-Hermitian input and NumericError if the
    underlying iteration fails to converge.
    """
    herm = require_hermitian(mat, tol=tol)
    try:
        eigvals, eigvecs = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolve failed: {exc}") from exc
    return SpectralDecomposition(
        eigenvalues=np.asarray(eigvals, dtype=float),
        vectors=_normalize_phases(eigvecs))


def spectral_projector(dec: SpectralDecomposition, window: Interval) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors with eigenvalue in ``window``."""
    cols = dec.vectors[:, dec.window_mask(window)]
    return cols @ cols.conj().T


def pseudo_inverse(mat, tol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose inverse; singular values below tol * sigma_max are dropped."""
    arr = as_matrix(mat)
    if not tol > 0.0:
        raise ArgumentError("pseudo-inverse tolerance must be positive")
    if arr.size == 0:
        return np.zeros((arr.shape[1], arr.shape[0]), dtype=np.complex128)
    u, s, vh = np.linalg.svd(arr, full_matrices=False)
    keep = s > tol * s[0] if s[0] > 0.0 else np.zeros(s.shape, dtype=bool)
    if not np.any(keep):
        return np.zeros((arr.shape[1], arr.shape[0]), dtype=np.complex128)
    return (vh[keep].conj().T / s[keep]) @ u[:, keep].conj().T


def general_eig(mat, return_vectors: bool = False):
    """Eigenvalues of a general square complex matrix, with multiplicity.

    Ordered by ascending real part, ties broken by ascending imaginary part.
    With ``return_vectors`` the matching (unit, phase-normalized) eigenvector
    columns are returned as well.
    """
    arr = as_matrix(mat, square=True)
    try:
        eigvals, eigvecs = np.linalg.eig(arr)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"general eigensolve failed: {exc}") from exc
    order = np.lexsort((eigvals.imag, eigvals.real))
    eigvals = eigvals[order]
    if not return_vectors:
        return eigvals
    return eigvals, _normalize_phases(eigvecs[:, order])


def spectral_distance(x, spectrum) -> float:
    """dist[x, spectrum] for a finite eigenvalue list; +inf for an empty list."""
    spec = np.atleast_1d(np.asarray(spectrum))
    if spec.size == 0:
        return float("inf")
    return float(np.min(np.abs(spec - x)))


def operator_norm(mat) -> float:
    """Largest singular value."""
    arr = as_matrix(mat)
    if arr.size == 0:
        return 0.0
    return float(np.linalg.norm(arr, 2))


def orthonormality_defect(cols) -> float:
    """‖Q*Q - I‖ for a set of columns; 0 means exactly orthonormal."""
    arr = as_matrix(cols)
    gram = arr.conj().T @ arr
    return float(np.linalg.norm(gram - np.eye(arr.shape[1]), 2)) if arr.size else 0.0
