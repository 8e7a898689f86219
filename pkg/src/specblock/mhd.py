"""Magnetohydrodynamics application.

Finite-difference discretization of the plasma-oscillation block operator on
the weighted space L²_rho(0,1)³, the closed-form relative-bound constants
(a, b) and spectral top c of the multiplication block, essential-spectrum
band ranges, and the end-to-end report pipeline.

The first component carries the Sturm-Liouville part with Dirichlet ends and
is discretized with second-order conservative differences on N interior
points; the second and third components are multiplication operators sampled
on the same grid.  All blocks are conjugated by W^{1/2}, W = diag(rho_i h),
which turns the weighted inner product into the standard one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import (
    BlockOperatorMatrix,
    RelativeBound,
    landmarks,
    minimal_b_for_a,
    relative_bound_margin,
)
from .basis import bari_sum, projection_decay, riesz_check
from .enclosures import dist_bound, variational_bounds
from .errors import ArgumentError, HypothesisError, ProfileError
from .linalg import Interval, hermitian_eig
from .report import Check, FAIL, NOT_APPLICABLE, PASS
from .subspaces import angular_operator, graph_test, spectral_subspace
from .tolerance import scalar_tol

__all__ = [
    "PlasmaProfile",
    "MhdDiscretization",
    "BUILTIN_FIELDS",
    "constant_profile",
    "profile_from_functions",
    "discretize",
    "constants",
    "essential_bands",
    "trial_space",
    "run_report",
]

# Built-in coefficient shapes for tests and problem files.
BUILTIN_FIELDS = {
    "constant": lambda x: np.ones_like(x),
    "linear": lambda x: 1.0 + x,
    "sinusoidal": lambda x: 1.0 + 0.5 * np.sin(np.pi * x),
}


@dataclass(frozen=True)
class PlasmaProfile:
    """Sampled plasma coefficients on a uniform grid over [0, 1] (ends included).

    rho is the equilibrium density, va2/vs2 the squared Alfvén and sound
    speeds, kperp/kpar the wave-vector coordinates, g the gravitational
    constant.  rho must be positive and va2 + vs2 positive everywhere.
    """

    rho: np.ndarray
    va2: np.ndarray
    vs2: np.ndarray
    kperp: np.ndarray
    kpar: np.ndarray
    g: float = 0.0

    def __post_init__(self):
        fields = {}
        length = None
        for name in ("rho", "va2", "vs2", "kperp", "kpar"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise ProfileError(f"{name} must be a 1-D sample array")
            if length is None:
                length = arr.size
            elif arr.size != length:
                raise ProfileError("all profile fields must share one grid")
            if arr.size and not np.all(np.isfinite(arr)):
                raise ProfileError(f"{name} contains non-finite samples")
            fields[name] = arr
        if length is None or length < 3:
            raise ProfileError("profile grid needs at least 3 points")
        if not np.isfinite(self.g):
            raise ProfileError("g must be finite")
        if np.min(fields["rho"]) <= 0.0:
            raise ProfileError("rho must be positive everywhere")
        if np.min(fields["va2"] + fields["vs2"]) <= 0.0:
            raise ProfileError("va2 + vs2 must be positive everywhere")
        for name, arr in fields.items():
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "g", float(self.g))

    @property
    def grid_n(self) -> int:
        return self.rho.size

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_n)

    @property
    def k2(self) -> np.ndarray:
        return self.kperp ** 2 + self.kpar ** 2

    def at(self, name: str, xq: np.ndarray) -> np.ndarray:
        """Linearly interpolated field values at query points in [0, 1]."""
        return np.interp(xq, self.x, getattr(self, name))


def constant_profile(grid_n: int = 129, rho: float = 1.0, va2: float = 1.0,
                     vs2: float = 1.0, kperp: float = 1.0, kpar: float = 1.0,
                     g: float = 0.0) -> PlasmaProfile:
    """Uniform plasma slab, the workhorse test profile."""
    ones = np.ones(grid_n)
    return PlasmaProfile(rho * ones, va2 * ones, vs2 * ones,
                         kperp * ones, kpar * ones, g)


def profile_from_functions(rho, va2, vs2, kperp, kpar, g: float = 0.0,
                           grid_n: int = 129) -> PlasmaProfile:
    """Sample callables (or constants) on a uniform grid."""
    x = np.linspace(0.0, 1.0, grid_n)

    def evaluate(f):
        if callable(f):
            return np.asarray(f(x), dtype=float) * np.ones_like(x)
        return float(f) * np.ones_like(x)

    return PlasmaProfile(evaluate(rho), evaluate(va2), evaluate(vs2),
                         evaluate(kperp), evaluate(kpar), g)


@dataclass(frozen=True)
class MhdDiscretization:
    """Discretized blocks plus the grid and weight-similarity record."""

    N: int
    block: BlockOperatorMatrix
    x: np.ndarray
    h: float
    weight_first: np.ndarray
    weight_second: np.ndarray


def _coupling_matrix(rho_i, coeff_i, mult_i, g, h):
    """Matrix of (rho^{-1} D rho coeff + i g) (mult ·) after the rho-similarity.

    D = -i d/dx is realized by centered differences; the stencil is truncated
    at the ends (zero extension), an O(h) boundary effect on a block that
    carries no boundary condition of its own.
    """
    n = rho_i.size
    prod = rho_i * coeff_i * mult_i
    mat = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    mat[idx, idx + 1] = -1j * prod[1:] / (2.0 * h * np.sqrt(rho_i[:-1] * rho_i[1:]))
    mat[idx + 1, idx] = 1j * prod[:-1] / (2.0 * h * np.sqrt(rho_i[1:] * rho_i[:-1]))
    mat[np.arange(n), np.arange(n)] = 1j * g * mult_i
    return mat


def discretize(profile: PlasmaProfile, n_interior: int) -> MhdDiscretization:
    """Second-order conservative discretization on N interior points.

    A acts as -((rho w u')')/rho + k² va² u with w = va² + vs² and Dirichlet
    ends, using midpoint-averaged coefficients; C is the pointwise 2x2
    multiplication block; B couples through the centered first derivative.
    The lower-left block of the assembly is B* exactly, and all blocks are
    expressed in the rho-weighted similarity so the result is Hermitian.
    """
    if n_interior < 8:
        raise ArgumentError("need at least 8 interior points")
    n = int(n_interior)
    h = 1.0 / (n + 1)
    xi = h * np.arange(1, n + 1)
    xmid = h * (np.arange(0, n + 1) + 0.5)

    rho_i = profile.at("rho", xi)
    va2_i = profile.at("va2", xi)
    vs2_i = profile.at("vs2", xi)
    kperp_i = profile.at("kperp", xi)
    kpar_i = profile.at("kpar", xi)
    k2_i = kperp_i ** 2 + kpar_i ** 2
    w_mid = profile.at("rho", xmid) * (profile.at("va2", xmid)
                                       + profile.at("vs2", xmid))

    # Sturm-Liouville block, built directly in symmetric (weighted) form.
    a_mat = np.zeros((n, n))
    diag = (w_mid[1:] + w_mid[:-1]) / (rho_i * h * h) + k2_i * va2_i
    a_mat[np.arange(n), np.arange(n)] = diag
    idx = np.arange(n - 1)
    off = -w_mid[1:n] / (h * h * np.sqrt(rho_i[:-1] * rho_i[1:]))
    a_mat[idx, idx + 1] = off
    a_mat[idx + 1, idx] = off

    b_perp = _coupling_matrix(rho_i, va2_i + vs2_i, kperp_i, profile.g, h)
    b_par = _coupling_matrix(rho_i, vs2_i, kpar_i, profile.g, h)
    b_mat = np.hstack([b_perp, b_par])

    c11 = k2_i * va2_i + kperp_i ** 2 * vs2_i
    c12 = kperp_i * kpar_i * vs2_i
    c22 = kpar_i ** 2 * vs2_i
    c_mat = np.block([[np.diag(c11), np.diag(c12)],
                      [np.diag(c12), np.diag(c22)]])

    block = BlockOperatorMatrix(A=a_mat, B=b_mat, C=c_mat)
    weight_first = np.sqrt(rho_i * h)
    return MhdDiscretization(
        N=n, block=block, x=xi, h=h, weight_first=weight_first,
        weight_second=np.concatenate([weight_first, weight_first]))


def constants(profile: PlasmaProfile) -> tuple[float, float, float]:
    """Closed-form (a, b, c) evaluated on the profile's sample grid.

    c tops the pointwise 2x2 multiplication block; a and b realize the
    relative bound of the coupling against the Sturm-Liouville block, with
    the flux derivative taken by centered differences (one-sided ends).
    """
    w = profile.va2 + profile.vs2
    k2 = profile.k2
    disc = (k2 * w / 2.0) ** 2 - k2 * profile.kpar ** 2 * profile.va2 * profile.vs2
    min_disc = float(np.min(disc)) if disc.size else 0.0
    if min_disc < -scalar_tol(float(np.max(np.abs(disc))) if disc.size else 1.0):
        raise ProfileError("negative discriminant in the c closed form")
    c = float(np.max(k2 * w / 2.0 + np.sqrt(np.maximum(disc, 0.0))))
    a = float(np.max((w ** 2 * profile.kperp ** 2
                      + profile.vs2 ** 2 * profile.kpar ** 2) / w))
    flux = profile.rho * (w * profile.kperp + profile.vs2 * profile.kpar)
    dflux = np.gradient(flux, profile.x, edge_order=2)
    b_core = float(np.max(k2 * profile.g ** 2
                          - (profile.g / profile.rho) * dflux))
    b = max(b_core - a * float(np.min(k2 * profile.va2)), 0.0)
    return a, b, c


def essential_bands(profile: PlasmaProfile, squared: bool = True) -> list[Interval]:
    """Ranges of the two coefficient functions filling the essential spectrum.

    ``squared`` selects wave-number squares in the two functions (the
    dimensionally consistent reading); the literal linear-in-k variant sits
    behind squared=False.  Neither is asserted as the correct one.
    """
    w = profile.va2 + profile.vs2
    if squared:
        f1 = profile.va2 * profile.kpar ** 2
        f2 = profile.va2 * profile.vs2 * profile.kperp ** 2 / w
    else:
        f1 = profile.va2 * profile.kpar
        f2 = profile.va2 * profile.vs2 * profile.kperp / w
    return [Interval(float(np.min(f1)), float(np.max(f1))),
            Interval(float(np.min(f2)), float(np.max(f2)))]


def trial_space(disc: MhdDiscretization, m: int) -> np.ndarray:
    """Orthonormal low-mode Galerkin trial space for second-order enclosures.

    Sine modes feed the Dirichlet first component, cosine modes (constant
    included) the second and third components, interleaved by frequency and
    orthonormalized.  This matches the derivative coupling: the lower
    components of eigenvectors are cosine-like when the first is sine-like.
    """
    if m < 1:
        raise ArgumentError("trial space needs at least one column")
    n = disc.N
    if m > 3 * n:
        raise ArgumentError(f"trial dimension {m} exceeds the space ({3 * n})")
    cols = []
    freq = 0
    while len(cols) < m:
        if freq >= 1:
            vec = np.zeros(3 * n)
            vec[:n] = np.sin(freq * np.pi * disc.x)
            cols.append(vec)
        for offset in (n, 2 * n):
            if len(cols) < m:
                vec = np.zeros(3 * n)
                vec[offset:offset + n] = np.cos(freq * np.pi * disc.x)
                cols.append(vec)
        freq += 1
    q, _ = np.linalg.qr(np.array(cols).T)
    return q.astype(complex)


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def run_report(profile: PlasmaProfile, n_interior: int, n_max: int,
               squared_bands: bool = True) -> list[Check]:
    """Full pipeline: discretize, constants, landmarks, variational bounds,
    angular operator at (c, inf), Riesz check, projection decay, Bari sums.

    Returns one Check per stage; theorem checks at this scale use the
    relative slack 10/N since the closed-form constants belong to the
    continuum operator.
    """
    checks: list[Check] = []
    disc = discretize(profile, n_interior)
    block = disc.block
    slack = 10.0 / disc.N

    a_const, b_const, c_const = constants(profile)
    rb = RelativeBound(a_const, b_const)
    margin, _ = relative_bound_margin(block, rb)
    b_disc = minimal_b_for_a(block, a_const).b
    gram_top = float(hermitian_eig(block.coupling_gram()).eigenvalues[-1])
    scale = max(1.0, gram_top)
    checks.append(Check(
        name="mhd/relative-bound",
        anchor="||B* x||^2 <= a <A x, x> + b ||x||^2",
        inputs={"a": a_const, "b": b_const, "N": disc.N},
        outputs={"lambda_min(aA + bI - BB*)": margin,
                 "discrete_minimal_b": b_disc},
        status=_status(margin >= -slack * scale),
        tolerances={"slack": slack * scale}))

    bands = essential_bands(profile, squared=squared_bands)
    checks.append(Check(
        name="mhd/essential-bands",
        anchor="ranges of va^2 kpar(^2) and va^2 vs^2 kperp(^2)/(va^2 + vs^2)",
        inputs={"squared_variant": squared_bands},
        outputs={"band1": [bands[0].lo, bands[0].hi],
                 "band2": [bands[1].lo, bands[1].hi]},
        status=PASS,
        tolerances={}))

    marks = landmarks(block)
    checks.append(Check(
        name="mhd/landmarks",
        anchor="c = max sigma(C); (c, c~] in the resolvent set; "
               "kappa = dim L_(-inf,0)(S(c~))",
        inputs={"c_closed_form": c_const},
        outputs={"c_discrete": marks.c, "c_tilde": marks.c_tilde,
                 "kappa": marks.kappa,
                 "eigenvalues_above_c": int(marks.lambda_above_c.size)},
        status=_status(abs(marks.c - c_const) <= slack * max(1.0, abs(c_const))),
        tolerances={"slack": slack * max(1.0, abs(c_const))}))

    spec_a = hermitian_eig(block.A).eigenvalues
    spec_c = hermitian_eig(block.C).eigenvalues
    worst_slack = -float("inf")
    dist_ok = True
    applicable = 0
    for lam in marks.lambda_above_c:
        try:
            rep = dist_bound(float(lam), spec_a, spec_c, rb)
        except HypothesisError:
            continue
        applicable += 1
        gap = rep.dist_to_A - rep.bound
        worst_slack = max(worst_slack, gap)
        if gap > slack * max(1.0, rep.bound):
            dist_ok = False
    checks.append(Check(
        name="mhd/dist-bound",
        anchor="dist[lambda, sigma(A)] <= |a lambda + b| / "
               "(dist[lambda, sigma(C)] - a)",
        inputs={"a": a_const, "b": b_const, "checked": applicable},
        outputs={"worst_excess": worst_slack},
        status=_status(dist_ok) if applicable else NOT_APPLICABLE,
        tolerances={"relative_slack": slack}))

    n_above = int(marks.lambda_above_c.size)
    n_var = min(n_above, spec_a.size - marks.kappa)
    intervals = variational_bounds(spec_a, marks.c, rb, marks.kappa, n_var)
    var_ok = True
    for n in range(n_var):
        lam = float(marks.lambda_above_c[n])
        lo, hi = intervals[n].lo, intervals[n].hi
        if lam < lo - slack * max(1.0, abs(lo)) or lam > hi + slack * max(1.0, abs(hi)):
            var_ok = False
    checks.append(Check(
        name="mhd/variational-bounds",
        anchor="mu_{kappa+n} <= lambda_n <= (mu_{kappa+n} + c)/2 + "
               "sqrt(((mu_{kappa+n} - c)/2)^2 + a mu_{kappa+n} + b)",
        inputs={"n_checked": n_var},
        outputs={"first_upper": intervals[0].hi if intervals else None},
        status=_status(var_ok) if n_var else NOT_APPLICABLE,
        tolerances={"relative_slack": slack}))

    resolved = max(2, disc.N // 4)
    gaps = np.diff(spec_a)[:resolved]
    gaps_increasing = bool(np.all(np.diff(gaps) > 0.0)) if gaps.size > 1 else True
    checks.append(Check(
        name="mhd/gap-growth",
        anchor="dist[mu_n, sigma(A) \\ {mu_n}] -> inf",
        inputs={"resolved_range": int(gaps.size)},
        outputs={"first_gap": float(gaps[0]) if gaps.size else None,
                 "last_gap": float(gaps[-1]) if gaps.size else None},
        status=_status(gaps_increasing),
        tolerances={}))

    subspace = spectral_subspace(block, marks.c_tilde)
    verdict = graph_test(subspace)
    k_op = angular_operator(subspace)
    checks.append(Check(
        name="mhd/angular-operator",
        anchor="codim(Dom(K_c)) = kappa",
        inputs={"alpha": marks.c_tilde},
        outputs={"graph_verdict": verdict.verdict, "sigma_min": verdict.sigma_min,
                 "k_norm": k_op.norm, "codim": k_op.codim,
                 "kappa": marks.kappa},
        status=_status(verdict.verdict == "graph" and k_op.codim == marks.kappa),
        tolerances={}))

    riesz = riesz_check(block, subspace, k_op)
    checks.append(Check(
        name="mhd/riesz-bounds",
        anchor="(1 + ||K_c||^2)^{-1} sum |beta_n|^2 <= ||sum beta_n x_n||^2 "
               "<= sum |beta_n|^2",
        inputs={},
        outputs={"gram_min": riesz.gram_min, "gram_max": riesz.gram_max,
                 "riesz_lower": riesz.riesz_lower},
        status=_status(riesz.passed),
        tolerances={"tol": 1e-8}))

    n_decay = min(n_max, n_above, spec_a.size - marks.kappa)
    if n_decay >= 1:
        decay = projection_decay(block, marks, n_decay, rb=rb)
        norms = [r.proj_diff_norm for r in decay.records]
        # decoupled problems produce identically zero differences
        decreasing = (max(norms) <= 1e-12
                      or all(norms[i + 1] < norms[i]
                             for i in range(len(norms) - 1)))
        bound_ok = all(r.proj_diff_norm <= r.bound + 1e-9
                       for r in decay.records if r.delta < 1.0)
        checks.append(Check(
            name="mhd/projection-decay",
            anchor="||E({mu_{kappa+n}}) - F_n(Delta_n)|| -> 0",
            inputs={"n_max": n_decay},
            outputs={"norms": norms,
                     "deltas": [r.delta for r in decay.records],
                     "m_constant": decay.m_constant},
            status=_status(decreasing and bound_ok),
            tolerances={"bound": "(gamma/dist[circle, sigma(A)]) "
                                 "delta/(1 - delta)"}))

        bari = bari_sum(block, marks, n_decay)
        terms = [r.term for r in bari.records]
        nondecreasing = bool(np.all(np.diff(bari.partial_sums) >= -1e-15))
        checks.append(Check(
            name="mhd/bari-sums",
            anchor="sum ||y_{kappa+n} - x_n||^2 < inf; "
                   "sum 1/(mu_{n+1} - mu_n)^2 < inf",
            inputs={"n_max": n_decay},
            outputs={"terms": terms,
                     "partial_sum": float(bari.partial_sums[-1]),
                     "gap_sum": bari.gap_sum,
                     "converged": bari.converged},
            status=_status(nondecreasing),
            tolerances={}))
    return checks
