"""Graph invariant subspaces and angular operators.

Spectral subspaces of the assembled matrix for half-lines (alpha, inf), the
graph test on their first components, the angular operator K with domain
projector / norm / codimension, the delta sufficient condition for graph
subspaces, and the diagonal-shift construction that pushes spectrum of A
above a target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import BlockOperatorMatrix, RelativeBound, assemble
from .errors import ArgumentError, HypothesisError, NotAGraphError
from .linalg import (
    Interval,
    hermitian_eig,
    operator_norm,
    pseudo_inverse,
    spectral_distance,
    spectral_projector,
)
from .tolerance import matrix_tol, scalar_tol

__all__ = [
    "GRAPH",
    "NOT_GRAPH",
    "INDETERMINATE",
    "GraphSubspace",
    "GraphTest",
    "AngularOperator",
    "spectral_subspace",
    "graph_test",
    "angular_operator",
    "delta_condition",
    "shifted_matrix",
    "smallest_graph_beta",
]

GRAPH = "graph"
NOT_GRAPH = "not-graph"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class GraphSubspace:
    """Orthonormal basis of a spectral subspace, split into component blocks.

    The stacked columns [basis_first; basis_second] are orthonormal; the
    subspace is the range of the spectral projector for ``window``.
    """

    basis_first: np.ndarray
    basis_second: np.ndarray
    window: Interval

    @property
    def dim(self) -> int:
        return self.basis_first.shape[1]

    def stacked(self) -> np.ndarray:
        return np.vstack((self.basis_first, self.basis_second))


@dataclass(frozen=True)
class GraphTest:
    """Verdict of the graph test plus the singular values of the first block."""

    verdict: str
    sigma_min: float
    singular_values: np.ndarray


@dataclass(frozen=True)
class AngularOperator:
    """Operator K whose graph realizes a spectral subspace.

    ``domain_projector`` projects onto Dom(K) = range of the first-component
    block; ``norm`` is the largest singular value of K restricted there;
    ``codim`` is the codimension of Dom(K) in the first component space.
    """

    K: np.ndarray
    domain_projector: np.ndarray
    norm: float
    codim: int


def spectral_subspace(block: BlockOperatorMatrix, alpha: float,
                      tol: float | None = None) -> GraphSubspace:
    """Orthonormal basis of the subspace spanned by eigenvalues above alpha."""
    alpha = float(alpha)
    full = assemble(block)
    if tol is None:
        tol = matrix_tol(full)
    dec = hermitian_eig(full)
    if spectral_distance(alpha, dec.eigenvalues) <= tol:
        raise ArgumentError(
            f"alpha = {alpha:.12g} is within {tol:.3e} of an eigenvalue of "
            "the assembled matrix")
    cols = dec.vectors[:, dec.eigenvalues > alpha]
    return GraphSubspace(
        basis_first=cols[:block.n1],
        basis_second=cols[block.n1:],
        window=Interval(alpha, float("inf"), open_lo=True, open_hi=True))


def graph_test(subspace: GraphSubspace, graph_tol: float = 1e-8,
               indeterminate_tol: float = 1e-10) -> GraphTest:
    """Decide whether the subspace is the graph of an operator on its first block.

    The subspace is a graph iff the first-component block has full column
    rank; sigma_min in [indeterminate_tol, graph_tol] is reported as
    indeterminate rather than classified.
    """
    u = subspace.basis_first
    n1, m = u.shape
    if m == 0:
        return GraphTest(verdict=GRAPH, sigma_min=float("inf"),
                         singular_values=np.array([]))
    svals = np.linalg.svd(u, compute_uv=False)
    sigma_min = float(svals[-1]) if m <= n1 else 0.0
    if sigma_min > graph_tol:
        verdict = GRAPH
    elif sigma_min < indeterminate_tol:
        verdict = NOT_GRAPH
    else:
        verdict = INDETERMINATE
    return GraphTest(verdict=verdict, sigma_min=sigma_min,
                     singular_values=np.asarray(svals, dtype=float))


def angular_operator(subspace: GraphSubspace,
                     graph_tol: float = 1e-8) -> AngularOperator:
    """Angular operator K = V U⁺ of a (possibly partial-domain) graph subspace.

    U must have full column rank: a rank drop means the subspace contains a
    vector with vanishing first component and no angular operator exists.
    The domain of K is range(U), of codimension n1 - dim(subspace).
    """
    u, v = subspace.basis_first, subspace.basis_second
    n1, m = u.shape
    if m:
        svals = np.linalg.svd(u, compute_uv=False)
        rank = int(np.sum(svals > graph_tol)) if m <= n1 else 0
        if rank < m:
            raise NotAGraphError(
                "subspace contains a vector with vanishing first component "
                f"(first-block rank {rank} < subspace dimension {m})")
    u_pinv = pseudo_inverse(u, tol=graph_tol) if m else np.zeros((0, n1))
    proj = u @ u_pinv
    proj = 0.5 * (proj + proj.conj().T)
    k = v @ u_pinv
    return AngularOperator(K=k, domain_projector=proj,
                           norm=operator_norm(k @ proj), codim=n1 - m)


def delta_condition(alpha: float, c: float, spec_a,
                    rb: RelativeBound) -> float:
    """delta = a/(alpha - c) + |a alpha + b| / (dist[alpha, sigma(A)] (alpha - c)).

    A value below 1/2 guarantees the subspace above alpha is a graph with a
    bounded angular operator.  alpha must lie strictly above c and away from
    sigma(A).
    """
    alpha, c = float(alpha), float(c)
    if alpha - c <= scalar_tol(alpha, c):
        raise HypothesisError("alpha must lie strictly above c")
    d_a = spectral_distance(alpha, spec_a)
    if d_a <= scalar_tol(alpha):
        raise HypothesisError("alpha must keep its distance from sigma(A)")
    return rb.a / (alpha - c) + abs(rb.a * alpha + rb.b) / (d_a * (alpha - c))


def shifted_matrix(block: BlockOperatorMatrix, mu: float) -> BlockOperatorMatrix:
    """Replace A by A + t E((-inf, mu)), t = mu - min sigma(A).

    The shifted diagonal block dominates mu I, so the gap (c, mu) is free of
    spectrum of the shifted assembly.
    """
    mu = float(mu)
    dec = hermitian_eig(block.A)
    lam_min = float(dec.eigenvalues[0])
    if mu - lam_min <= scalar_tol(mu, lam_min):
        raise ArgumentError("mu must exceed min sigma(A)")
    t = mu - lam_min
    below = spectral_projector(
        dec, Interval(float("-inf"), mu, open_lo=True, open_hi=True))
    shifted = block.A + t * below
    return BlockOperatorMatrix(A=0.5 * (shifted + shifted.conj().T),
                               B=block.B, C=block.C)


def smallest_graph_beta(block: BlockOperatorMatrix, betas=None,
                        graph_tol: float = 1e-8):
    """Scan candidate beta values; return the smallest whose half-line subspace
    is a graph, plus all per-beta verdicts.

    The scan answers on its grid only; it makes no claim about the true
    threshold.  The default grid takes the midpoints of the spectral gaps
    above max sigma(C) and one point beyond the top of the spectrum.
    """
    dec = hermitian_eig(assemble(block))
    spec_m = dec.eigenvalues
    if betas is None:
        c = float(hermitian_eig(block.C).eigenvalues[-1])
        above = spec_m[spec_m > c + matrix_tol(block.C)]
        pts = np.concatenate(([c], above))
        mids = [0.5 * (pts[i] + pts[i + 1]) for i in range(len(pts) - 1)]
        top = float(spec_m[-1])
        span = max(top - float(spec_m[0]), 1.0)
        betas = np.array(mids + [top + 0.05 * span])
    records = []
    for beta in np.asarray(betas, dtype=float):
        try:
            verdict = graph_test(spectral_subspace(block, float(beta)),
                                 graph_tol=graph_tol).verdict
        except ArgumentError:
            verdict = "skipped"
        records.append((float(beta), verdict))
    hit = next((b for b, v in records if v == GRAPH), None)
    return hit, records
