"""Block operator matrices [[A, B], [B*, C]] and their Schur complements.

The diagonal blocks A and C are Hermitian; B couples the second component
space into the first.  Everything here is finite-dimensional: the domain
conditions of the unbounded theory hold automatically and are recorded, not
checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, LandmarkError, SingularShiftError
from .linalg import (
    as_matrix,
    hermitian_eig,
    require_hermitian,
    spectral_distance,
)
from .tolerance import base_tol, matrix_tol

__all__ = [
    "BlockOperatorMatrix",
    "RelativeBound",
    "SpectralLandmarks",
    "assemble",
    "schur_complement",
    "resolvent_block",
    "minimal_b_for_a",
    "relative_bound_margin",
    "best_relative_bound",
    "landmarks",
]


@dataclass(frozen=True)
class BlockOperatorMatrix:
    """Hermitian 2x2 block matrix with diagonal blocks A (n1), C (n2) and coupling B."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        a = require_hermitian(self.A)
        c = require_hermitian(self.C)
        b = as_matrix(self.B)
        if b.shape != (a.shape[0], c.shape[0]):
            raise ArgumentError(
                f"coupling block has shape {b.shape}, expected "
                f"({a.shape[0]}, {c.shape[0]})")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "C", c)

    @property
    def n1(self) -> int:
        return self.A.shape[0]

    @property
    def n2(self) -> int:
        return self.C.shape[0]

    def coupling_gram(self) -> np.ndarray:
        """B B*, the Hermitian form behind ‖B*x‖²."""
        return self.B @ self.B.conj().T


@dataclass(frozen=True)
class RelativeBound:
    """Constants (a, b) certifying B B* ⪯ a A + b I in the Hermitian order."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0.0 or self.b < 0.0:
            raise ArgumentError("relative-bound constants must be nonnegative")


@dataclass(frozen=True)
class SpectralLandmarks:
    """max sigma(C), the mid-gap point above it, kappa, and the spectrum above c."""

    c: float
    c_tilde: float
    kappa: int
    lambda_above_c: np.ndarray


def assemble(block: BlockOperatorMatrix) -> np.ndarray:
    """Full (n1+n2)-dimensional Hermitian matrix [[A, B], [B*, C]]."""
    return np.block([[block.A, block.B], [block.B.conj().T, block.C]])


def schur_complement(block: BlockOperatorMatrix, lam: float,
                     tol: float | None = None) -> np.ndarray:
    """First Schur complement A - lam I - B (C - lam I)^{-1} B* at a real shift.

    The shift must keep its distance from sigma(C); zero eigenvalues of the
    result detect spectrum of the assembled matrix away from sigma(C).
    """
    lam = float(lam)
    spec_c = hermitian_eig(block.C).eigenvalues
    if tol is None:
        tol = matrix_tol(block.C)
    if spectral_distance(lam, spec_c) <= tol:
        raise SingularShiftError(
            f"shift {lam:.12g} is within {tol:.3e} of sigma(C)")
    solved = np.linalg.solve(block.C - lam * np.eye(block.n2), block.B.conj().T)
    s = block.A - lam * np.eye(block.n1) - block.B @ solved
    return 0.5 * (s + s.conj().T)


def resolvent_block(block: BlockOperatorMatrix, alpha: float,
                    tol: float | None = None) -> np.ndarray:
    """Resolvent of the assembled matrix at ``alpha``, built Schur-block by block.

    Assembles [[S⁻¹, -S⁻¹F], [-(C-αI)⁻¹B*S⁻¹, (C-αI)⁻¹ + (C-αI)⁻¹B*S⁻¹F]]
    with S = S(alpha) and F = B(C-αI)⁻¹ rather than inverting directly.
    """
    alpha = float(alpha)
    full = assemble(block)
    if tol is None:
        tol = matrix_tol(full)
    spec_m = hermitian_eig(full).eigenvalues
    if spectral_distance(alpha, spec_m) <= tol:
        raise SingularShiftError(
            f"shift {alpha:.12g} is within {tol:.3e} of the assembled spectrum")
    s = schur_complement(block, alpha, tol=tol)
    s_eig = hermitian_eig(s).eigenvalues
    if float(np.min(np.abs(s_eig))) <= matrix_tol(s):
        raise SingularShiftError("Schur complement is singular at this shift")
    n2 = block.n2
    s_inv = np.linalg.inv(s)
    c_shift = block.C - alpha * np.eye(n2)
    f = np.linalg.solve(c_shift, block.B.conj().T).conj().T  # B (C - alpha I)^{-1}
    top_left = s_inv
    top_right = -s_inv @ f
    bottom_left = -np.linalg.solve(c_shift, block.B.conj().T @ s_inv)
    bottom_right = np.linalg.solve(
        c_shift, np.eye(n2) + block.B.conj().T @ s_inv @ f)
    return np.block([[top_left, top_right], [bottom_left, bottom_right]])


def minimal_b_for_a(block: BlockOperatorMatrix, a: float) -> RelativeBound:
    """Least b ≥ 0 with B B* ⪯ a A + b I, i.e. max(0, lambda_max(BB* - aA))."""
    if a < 0.0:
        raise ArgumentError("a must be nonnegative")
    if block.n1 == 0:
        return RelativeBound(float(a), 0.0)
    gap = block.coupling_gram() - a * block.A
    lam_max = float(hermitian_eig(gap).eigenvalues[-1])
    return RelativeBound(float(a), max(0.0, lam_max))


def relative_bound_margin(block: BlockOperatorMatrix, rb: RelativeBound):
    """lambda_min(aA + bI - BB*) together with its witness eigenvector.

    Nonnegative (up to round-off) iff (a, b) is a valid relative bound; near
    zero iff b is minimal for this a.
    """
    mat = rb.a * block.A + rb.b * np.eye(block.n1) - block.coupling_gram()
    dec = hermitian_eig(mat)
    return float(dec.eigenvalues[0]), dec.vectors[:, 0]


def best_relative_bound(block: BlockOperatorMatrix,
                        grid_points: int = 21) -> RelativeBound:
    """Scan a over [0, a_max] and keep the pair with the tightest inclusion window.

    a_max = lambda_max(BB*) / max(lambda_min(A), tol); the window width is
    evaluated at mu = min sigma(A).  Ties resolve to the smallest a.
    """
    lam_bbs = float(hermitian_eig(block.coupling_gram()).eigenvalues[-1])
    if lam_bbs <= 0.0:
        return RelativeBound(0.0, 0.0)
    spec_a = hermitian_eig(block.A).eigenvalues
    mu = float(spec_a[0])
    c = float(hermitian_eig(block.C).eigenvalues[-1])
    denom = max(mu, matrix_tol(block.A), base_tol())
    a_max = lam_bbs / denom
    best = None
    best_width = np.inf
    for a in np.linspace(0.0, a_max, grid_points):
        rb = minimal_b_for_a(block, float(a))
        disc = ((mu - c) / 2.0) ** 2 + rb.a * (rb.a + c) + rb.b
        if disc < 0.0:
            continue
        width = 2.0 * np.sqrt(disc)
        if width < best_width:
            best, best_width = rb, width
    return best if best is not None else minimal_b_for_a(block, 0.0)


def landmarks(block: BlockOperatorMatrix, tol: float | None = None) -> SpectralLandmarks:
    """Locate c = max sigma(C), the first gap above it, and count kappa there.

    c_tilde is fixed deterministically as the midpoint of c and the smallest
    assembled eigenvalue above c; kappa counts the negative eigenvalues of the
    Schur complement at c_tilde.
    """
    full = assemble(block)
    if tol is None:
        tol = matrix_tol(full)
    c = float(hermitian_eig(block.C).eigenvalues[-1])
    spec_m = hermitian_eig(full).eigenvalues
    above = spec_m[spec_m > c + tol]
    if above.size == 0:
        raise LandmarkError("no spectrum of the assembled matrix above max sigma(C)")
    c_tilde = 0.5 * (c + float(above[0]))
    s = schur_complement(block, c_tilde)
    s_eig = hermitian_eig(s).eigenvalues
    kappa = int(np.sum(s_eig < -matrix_tol(s)))
    return SpectralLandmarks(
        c=c, c_tilde=c_tilde, kappa=kappa,
        lambda_above_c=np.array(above, dtype=float))
