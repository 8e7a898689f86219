"""Spectral enclosures for block operator matrices.

Distance bound, inclusion/exclusion windows around eigenvalues of A,
certified resolvent intervals, subspace-dimension counts, variational
two-sided bounds, and second-order-spectrum enclosures on trial subspaces.
Window hypotheses that fail produce structured "not applicable" results so
parameter scans can proceed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import BlockOperatorMatrix, RelativeBound, assemble
from .errors import ArgumentError, HypothesisError, NumericError
from .linalg import (
    Interval,
    as_matrix,
    general_eig,
    hermitian_eig,
    orthonormality_defect,
    spectral_distance,
)
from .tolerance import scalar_tol

__all__ = [
    "INCLUSION",
    "EXCLUSION",
    "RESOLVENT",
    "EnclosureReport",
    "Window",
    "QepEnclosure",
    "dist_bound",
    "eigenvalue_window",
    "exclusion_window",
    "resolvent_interval",
    "subspace_dim_check",
    "variational_bounds",
    "soq_enclosure",
    "inclusion_reference",
    "exclusion_reference",
    "soq_bracket",
]

INCLUSION = "inclusion"
EXCLUSION = "exclusion"
RESOLVENT = "resolvent"


@dataclass(frozen=True)
class EnclosureReport:
    """dist[lam, sigma(A)] versus its certified bound at a single point."""

    lam: float
    dist_to_A: float
    bound: float
    satisfied: bool


@dataclass(frozen=True)
class Window:
    """Inclusion/exclusion/resolvent window with hypothesis bookkeeping.

    ``lo``/``hi`` are None when the hypothesis fails; ``reason`` then says
    which check failed.  Inclusion windows are closed, the other two open.
    """

    kind: str
    lo: float | None
    hi: float | None
    mu_refs: tuple
    hypothesis_ok: bool
    reason: str = ""

    @property
    def width(self) -> float:
        if self.lo is None or self.hi is None:
            return float("nan")
        return self.hi - self.lo


@dataclass(frozen=True)
class QepEnclosure:
    """One second-order-spectrum point with its admission status and interval."""

    z: complex
    interval: Interval | None
    disc_center: float
    disc_radius: float
    admitted: bool


def dist_bound(lam: float, spec_a, spec_c, rb: RelativeBound,
               tol: float = 1e-9) -> EnclosureReport:
    """Check dist[lam, sigma(A)] <= |a lam + b| / (dist[lam, sigma(C)] - a).

    Requires dist[lam, sigma(C)] > a (with margin); otherwise the hypothesis
    is violated and HypothesisError is raised.
    """
    lam = float(lam)
    d_c = spectral_distance(lam, spec_c)
    if d_c <= rb.a + scalar_tol(rb.a, d_c):
        raise HypothesisError(
            f"dist[lam, sigma(C)] = {d_c:.6g} does not exceed a = {rb.a:.6g}")
    bound = abs(rb.a * lam + rb.b) / (d_c - rb.a)
    d_a = spectral_distance(lam, spec_a)
    return EnclosureReport(lam=lam, dist_to_A=d_a, bound=bound,
                           satisfied=bool(d_a <= bound + tol))


def eigenvalue_window(mu: float, c: float, rb: RelativeBound) -> Window:
    """Closed inclusion window [alpha-, alpha+] around mu in sigma(A).

    alpha± = (mu + c + 2a)/2 ± sqrt(((mu - c)/2)² + a(a + c) + b).
    """
    mu, c = float(mu), float(c)
    disc = ((mu - c) / 2.0) ** 2 + rb.a * (rb.a + c) + rb.b
    if disc < 0.0:
        if disc < -scalar_tol(mu, c, rb.a, rb.b):
            raise HypothesisError(
                "negative discriminant in the inclusion window; the relative "
                "bound does not certify mu >= min sigma(A)")
        disc = 0.0
    root = math.sqrt(disc)
    mid = (mu + c + 2.0 * rb.a) / 2.0
    return Window(kind=INCLUSION, lo=mid - root, hi=mid + root,
                  mu_refs=(mu,), hypothesis_ok=True)


def exclusion_window(mu: float, c: float, rb: RelativeBound) -> Window:
    """Open spectral-free window (beta-, beta+) below mu in sigma(A).

    beta± = (mu + c)/2 ± sqrt(((mu - c)/2)² - (a mu + b)), subject to the
    strict discriminant hypothesis (mu - c)² > 4 a mu + 4 b.
    """
    mu, c = float(mu), float(c)
    lhs = (mu - c) ** 2
    rhs = 4.0 * (rb.a * mu + rb.b)
    if lhs <= rhs + scalar_tol(lhs, rhs):
        return Window(kind=EXCLUSION, lo=None, hi=None, mu_refs=(mu,),
                      hypothesis_ok=False,
                      reason="(mu - c)^2 does not exceed 4 a mu + 4 b")
    root = math.sqrt(((mu - c) / 2.0) ** 2 - (rb.a * mu + rb.b))
    mid = (mu + c) / 2.0
    return Window(kind=EXCLUSION, lo=mid - root, hi=mid + root,
                  mu_refs=(mu,), hypothesis_ok=True)


def resolvent_interval(mu1: float, mu2: float, c: float,
                       rb: RelativeBound) -> Window:
    """Certified spectral-free interval (alpha1+, beta2+) between mu1 < mu2.

    Needs a + c < mu1 < mu2, beta2- < (mu1 + mu2)/2 and alpha1+ < beta2+;
    the caller is responsible for (mu1, mu2) being free of sigma(A).  Any
    failed hypothesis returns hypothesis_ok = False with the reason.
    """
    mu1, mu2, c = float(mu1), float(mu2), float(c)
    refs = (mu1, mu2)

    def fail(reason: str) -> Window:
        return Window(kind=RESOLVENT, lo=None, hi=None, mu_refs=refs,
                      hypothesis_ok=False, reason=reason)

    if not mu1 < mu2:
        return fail("mu1 must be below mu2")
    if mu1 - (rb.a + c) <= scalar_tol(mu1, rb.a, c):
        return fail("mu1 must exceed a + c")
    upper = eigenvalue_window(mu1, c, rb)
    lower = exclusion_window(mu2, c, rb)
    if not lower.hypothesis_ok:
        return fail(f"exclusion window at mu2: {lower.reason}")
    if not lower.lo < (mu1 + mu2) / 2.0:
        return fail("beta2- must lie below the midpoint of (mu1, mu2)")
    if not upper.hi < lower.hi:
        return fail("alpha1+ must lie below beta2+")
    return Window(kind=RESOLVENT, lo=upper.hi, hi=lower.hi,
                  mu_refs=refs, hypothesis_ok=True)


def subspace_dim_check(block: BlockOperatorMatrix, b2p: float,
                       a3p: float) -> tuple[int, int]:
    """Count spectrum of the assembled matrix and of A inside [b2p, a3p].

    With both bracketing pairs satisfying the resolvent-interval hypotheses
    the two counts agree.
    """
    if not b2p < a3p:
        raise ArgumentError("need b2p < a3p")
    spec_m = hermitian_eig(assemble(block)).eigenvalues
    spec_a = hermitian_eig(block.A).eigenvalues
    count_m = int(np.sum((spec_m >= b2p) & (spec_m <= a3p)))
    count_a = int(np.sum((spec_a >= b2p) & (spec_a <= a3p)))
    return count_m, count_a


def variational_bounds(spec_a, c: float, rb: RelativeBound, kappa: int,
                       n_max: int | None = None) -> list[Interval]:
    """Two-sided bounds [mu_{kappa+n}, upper_n] for the eigenvalues above c.

    upper_n = (mu_{kappa+n} + c)/2 + sqrt(((mu_{kappa+n} - c)/2)² +
    a mu_{kappa+n} + b).
    """
    spec_a = np.sort(np.asarray(spec_a, dtype=float))
    if kappa < 0:
        raise ArgumentError("kappa must be nonnegative")
    available = spec_a.size - kappa
    if n_max is None:
        n_max = available
    if n_max > available:
        raise ArgumentError(
            f"requested {n_max} bounds but only {available} eigenvalues of A "
            f"remain above index kappa = {kappa}")
    out = []
    for n in range(1, n_max + 1):
        mu = float(spec_a[kappa + n - 1])
        disc = ((mu - c) / 2.0) ** 2 + rb.a * mu + rb.b
        if disc < 0.0:
            if disc < -scalar_tol(mu, c, rb.a, rb.b):
                raise HypothesisError(
                    "negative discriminant in the variational upper bound")
            disc = 0.0
        hi = (mu + c) / 2.0 + math.sqrt(disc)
        out.append(Interval(mu, max(hi, mu)))
    return out


def inclusion_reference(spec_a, lam: float) -> float | None:
    """The element of sigma(A) the inclusion window applies to at ``lam``.

    Returns the largest mu <= lam such that (mu, mu + 2(lam - mu)) misses
    sigma(A), i.e. lam sits in the left half of the gap above mu (or above
    the top of sigma(A)); None when no such mu exists.
    """
    spec_a = np.sort(np.asarray(spec_a, dtype=float))
    lam = float(lam)
    idx = int(np.searchsorted(spec_a, lam, side="right")) - 1
    if idx < 0:
        return None
    mu = float(spec_a[idx])
    above = spec_a[spec_a > mu + scalar_tol(mu)]
    if above.size == 0:
        return mu
    nxt = float(above[0])
    if lam <= 0.5 * (mu + nxt) + scalar_tol(mu, nxt):
        return mu
    return None


def exclusion_reference(spec_a, lam: float) -> float | None:
    """The element of sigma(A) the exclusion window applies to at ``lam``.

    Returns the smallest mu >= lam such that lam in (mu - r, mu] is
    compatible with (mu - 2r, mu) missing sigma(A): lam must sit strictly in
    the right half of the gap below mu (or below the bottom of sigma(A)).
    """
    spec_a = np.sort(np.asarray(spec_a, dtype=float))
    lam = float(lam)
    idx = int(np.searchsorted(spec_a, lam, side="left"))
    if idx >= spec_a.size:
        return None
    mu = float(spec_a[idx])
    below = spec_a[spec_a < mu - scalar_tol(mu)]
    if below.size == 0:
        return mu
    prev = float(below[-1])
    if lam > 0.5 * (prev + mu) + scalar_tol(prev, mu):
        return mu
    return None


def soq_bracket(spec_a, c: float, rb: RelativeBound):
    """Disc geometry (a1p, b4m, b4p) from the first and last valid pair windows.

    Scans consecutive pairs of sigma(A); needs at least two pairs passing the
    resolvent-interval hypotheses.  b4m falls back onto b4p whenever the
    lower exclusion endpoint sits left of a1p (the usual case for separated
    spectra), keeping the disc over (a1p, b4p).  Returns None when fewer than
    two pairs validate.
    """
    spec_a = np.sort(np.asarray(spec_a, dtype=float))
    valid = []
    for i in range(spec_a.size - 1):
        win = resolvent_interval(float(spec_a[i]), float(spec_a[i + 1]), c, rb)
        if win.hypothesis_ok:
            valid.append(i)
    if len(valid) < 2:
        return None
    first, last = valid[0], valid[-1]
    a1p = eigenvalue_window(float(spec_a[first]), c, rb).hi
    ex = exclusion_window(float(spec_a[last + 1]), c, rb)
    b4m = ex.lo if ex.lo is not None and ex.lo > a1p else ex.hi
    return float(a1p), float(b4m), float(ex.hi)


def _merge_conjugates(values: np.ndarray) -> list[complex]:
    """Keep the Im >= 0 representative of each conjugate pair.

    Nominally real points are snapped onto the axis first so a stray
    -1e-17j cannot drop a real eigenvalue.
    """
    kept = []
    for z in values:
        z = complex(z)
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
            z = complex(z.real, 0.0)
        if z.imag >= 0.0:
            kept.append(z)
    return kept


def soq_enclosure(block: BlockOperatorMatrix, subspace, a1p: float,
                  b4m: float, b4p: float,
                  orth_tol: float = 1e-8) -> list[QepEnclosure]:
    """Second-order-spectrum enclosures on a trial subspace.

    Solves z²u - 2z S1 u + S2 u = 0 with S1, S2 the compressions of the
    assembled matrix and its square, via the companion form
    [[0, I], [-S2, 2 S1]].  Points inside the open disc with centre
    (a1p + b4p)/2 and radius (b4m - a1p)/2 are admitted and produce the
    interval [Re z - |Im z|²/(b4p - Re z), Re z + |Im z|²/(Re z - a1p)].
    """
    q = as_matrix(subspace)
    full = assemble(block)
    if q.shape[0] != full.shape[0]:
        raise ArgumentError(
            f"subspace lives in dimension {q.shape[0]}, expected {full.shape[0]}")
    if q.shape[1] == 0:
        raise ArgumentError("subspace must have at least one column")
    if orthonormality_defect(q) > orth_tol:
        raise ArgumentError("subspace columns must be orthonormal")
    a1p, b4m, b4p = float(a1p), float(b4m), float(b4p)
    if not (a1p < b4m <= b4p):
        raise ArgumentError("need a1p < b4m <= b4p")
    m = q.shape[1]
    mq = full @ q
    s1 = q.conj().T @ mq
    s2 = mq.conj().T @ mq  # equals q* M² q since M is Hermitian
    s1 = 0.5 * (s1 + s1.conj().T)
    s2 = 0.5 * (s2 + s2.conj().T)
    companion = np.block([
        [np.zeros((m, m), dtype=complex), np.eye(m, dtype=complex)],
        [-s2, 2.0 * s1]])
    center = 0.5 * (a1p + b4p)
    radius = 0.5 * (b4m - a1p)
    out = []
    for z in _merge_conjugates(general_eig(companion)):
        admitted = bool(abs(z - center) < radius)
        interval = None
        if admitted:
            re, im = z.real, z.imag
            if not a1p < re < b4p:
                raise NumericError(
                    "admitted second-order point has real part outside "
                    "(a1p, b4p); the disc geometry excludes this")
            interval = Interval(re - im * im / (b4p - re),
                                re + im * im / (re - a1p))
        out.append(QepEnclosure(z=z, interval=interval, disc_center=center,
                                disc_radius=radius, admitted=admitted))
    return out
