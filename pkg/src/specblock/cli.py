"""Command-line front end.

    specblock <enclose|angular|basis|soq|mhd|selftest> --input FILE
              [--alpha X] [--n-max K] [--n N] [--subspace-dim M]
              [--seed S] [--out FILE] [--csv DIR]

Reads a problem file, runs the requested pipeline, and emits a JSON report
to stdout or --out (plus per-family CSV tables under --csv).  Exit codes:
0 when no check failed (hypothesis failures count as not-applicable),
1 when any theorem check failed, 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .basis import bari_sum, projection_decay, riesz_check
from .blocks import (
    BlockOperatorMatrix,
    assemble,
    best_relative_bound,
    landmarks,
)
from .enclosures import (
    dist_bound,
    eigenvalue_window,
    exclusion_reference,
    exclusion_window,
    inclusion_reference,
    resolvent_interval,
    soq_bracket,
    soq_enclosure,
    subspace_dim_check,
    variational_bounds,
)
from .errors import (
    ArgumentError,
    DegenerateGapError,
    HypothesisError,
    LandmarkError,
    NotAGraphError,
    PairingError,
    ParseError,
    SingularShiftError,
    SpecblockError,
)
from .linalg import hermitian_eig, operator_norm
from .mhd import discretize, run_report, trial_space
from .problems import ProblemFile, load_problem
from .report import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    Check,
    Report,
    digest_bytes,
    emit_json,
)
from .subspaces import (
    GRAPH,
    NOT_GRAPH,
    angular_operator,
    delta_condition,
    graph_test,
    spectral_subspace,
)
from . import selftest as selftest_module

DEFAULT_MHD_N = 64
DEFAULT_N_MAX = 6


def _require_block(problem: ProblemFile, n_interior: int):
    """The working block matrix: direct blocks, or a discretized profile."""
    if problem.block is not None:
        return problem.block, None
    disc = discretize(problem.profile, n_interior)
    return disc.block, disc


def _relative_bound(problem: ProblemFile, block: BlockOperatorMatrix):
    return problem.rb if problem.rb is not None else best_relative_bound(block)


def _not_applicable(name, anchor, reason):
    return Check(name=name, anchor=anchor, inputs={}, outputs={"reason": reason},
                 status=NOT_APPLICABLE, tolerances={})


def cmd_enclose(problem: ProblemFile, n_interior: int = DEFAULT_MHD_N) -> list[Check]:
    """Distance bound, windows, resolvent intervals, variational bounds and
    the dimension count over the whole spectrum of one problem."""
    block, _ = _require_block(problem, n_interior)
    rb = _relative_bound(problem, block)
    spec_a = hermitian_eig(block.A).eigenvalues
    spec_c = hermitian_eig(block.C).eigenvalues
    spec_m = hermitian_eig(assemble(block)).eigenvalues
    c = float(spec_c[-1])
    checks = []

    dist_anchor = ("dist[lambda, sigma(A)] <= |a lambda + b| / "
                   "(dist[lambda, sigma(C)] - a)")
    above = spec_m[spec_m > c + rb.a + 1e-9]
    for lam in above:
        lam = float(lam)
        try:
            rep = dist_bound(lam, spec_a, spec_c, rb)
        except HypothesisError as exc:
            checks.append(_not_applicable(f"dist-bound/lambda={lam:.6g}",
                                          dist_anchor, str(exc)))
            continue
        checks.append(Check(
            name=f"dist-bound/lambda={lam:.6g}", anchor=dist_anchor,
            inputs={"lambda": lam, "a": rb.a, "b": rb.b},
            outputs={"dist_to_A": rep.dist_to_A, "bound": rep.bound},
            status=PASS if rep.satisfied else FAIL,
            tolerances={"slack": 1e-9}))

    incl_anchor = ("alpha± = (mu + c + 2a)/2 ± "
                   "sqrt(((mu - c)/2)^2 + a(a + c) + b)")
    excl_anchor = "beta± = (mu + c)/2 ± sqrt(((mu - c)/2)^2 - (a mu + b))"
    for mu in np.unique(spec_a):
        mu = float(mu)
        win = eigenvalue_window(mu, c, rb)
        applicable = [float(lam) for lam in above
                      if inclusion_reference(spec_a, float(lam)) == mu]
        status = (PASS if all(win.lo - 1e-9 <= lam <= win.hi + 1e-9
                              for lam in applicable)
                  else FAIL) if applicable else NOT_APPLICABLE
        checks.append(Check(
            name=f"inclusion-window/mu={mu:.6g}", anchor=incl_anchor,
            inputs={"mu": mu, "c": c, "a": rb.a, "b": rb.b},
            outputs={"lo": win.lo, "hi": win.hi, "applicable": applicable},
            status=status, tolerances={"margin": 1e-9}))

        exw = exclusion_window(mu, c, rb)
        if not exw.hypothesis_ok:
            checks.append(_not_applicable(f"exclusion-window/mu={mu:.6g}",
                                          excl_anchor, exw.reason))
        else:
            applicable = [float(lam) for lam in above
                          if exclusion_reference(spec_a, float(lam)) == mu]
            intruding = [lam for lam in applicable
                         if exw.lo + 1e-9 < lam < exw.hi - 1e-9]
            status = (PASS if not intruding else FAIL) if applicable \
                else NOT_APPLICABLE
            checks.append(Check(
                name=f"exclusion-window/mu={mu:.6g}", anchor=excl_anchor,
                inputs={"mu": mu, "c": c, "a": rb.a, "b": rb.b},
                outputs={"lo": exw.lo, "hi": exw.hi,
                         "applicable": applicable, "intruding": intruding},
                status=status, tolerances={"margin": 1e-9}))

    res_anchor = "mu1 <= alpha1+ < beta2+ <= mu2 and (alpha1+, beta2+) in rho(M)"
    distinct = np.unique(spec_a)
    valid_pairs = []
    for i in range(distinct.size - 1):
        mu1, mu2 = float(distinct[i]), float(distinct[i + 1])
        win = resolvent_interval(mu1, mu2, c, rb)
        name = f"resolvent-interval/mu1={mu1:.6g}"
        if not win.hypothesis_ok:
            checks.append(_not_applicable(name, res_anchor, win.reason))
            continue
        valid_pairs.append(i)
        inside = [float(lam) for lam in spec_m
                  if win.lo + 1e-9 < lam < win.hi - 1e-9]
        checks.append(Check(
            name=name, anchor=res_anchor,
            inputs={"mu1": mu1, "mu2": mu2},
            outputs={"lo": win.lo, "hi": win.hi, "eigenvalues_inside": inside},
            status=PASS if not inside else FAIL,
            tolerances={"margin": 1e-9}))

    var_anchor = ("mu_{kappa+n} <= lambda_n <= (mu_{kappa+n} + c)/2 + "
                  "sqrt(((mu_{kappa+n} - c)/2)^2 + a mu_{kappa+n} + b)")
    try:
        marks = landmarks(block)
        n_var = min(int(marks.lambda_above_c.size),
                    int(spec_a.size) - marks.kappa)
        intervals = variational_bounds(spec_a, marks.c, rb, marks.kappa, n_var)
        escapes = []
        for n in range(n_var):
            lam = float(marks.lambda_above_c[n])
            if not (intervals[n].lo - 1e-9 <= lam <= intervals[n].hi + 1e-9):
                escapes.append(lam)
        checks.append(Check(
            name="variational-bounds/ladder", anchor=var_anchor,
            inputs={"kappa": marks.kappa, "n": n_var},
            outputs={"escapes": escapes,
                     "intervals": [[iv.lo, iv.hi] for iv in intervals]},
            status=PASS if not escapes else FAIL,
            tolerances={"margin": 1e-9}))
    except (LandmarkError, SingularShiftError) as exc:
        checks.append(_not_applicable("variational-bounds/ladder", var_anchor,
                                      str(exc)))

    dim_anchor = "dim L_[beta2+, alpha3+](M) = dim L_[beta2+, alpha3+](A)"
    if len(valid_pairs) >= 2:
        i, j = valid_pairs[0], valid_pairs[-1]
        b2p = exclusion_window(float(distinct[i + 1]), c, rb).hi
        a3p = eigenvalue_window(float(distinct[j]), c, rb).hi
        if b2p < a3p:
            count_m, count_a = subspace_dim_check(block, b2p, a3p)
            checks.append(Check(
                name="dim-check/bracket", anchor=dim_anchor,
                inputs={"b2p": b2p, "a3p": a3p},
                outputs={"count_M": count_m, "count_A": count_a},
                status=PASS if count_m == count_a else FAIL,
                tolerances={}))
        else:
            checks.append(_not_applicable("dim-check/bracket", dim_anchor,
                                          "bracket endpoints out of order"))
    else:
        checks.append(_not_applicable("dim-check/bracket", dim_anchor,
                                      "fewer than two valid pair windows"))
    return checks


def cmd_angular(problem: ProblemFile, alpha: float | None,
                n_interior: int = DEFAULT_MHD_N) -> list[Check]:
    """Graph test, angular operator and the delta condition at one alpha."""
    block, _ = _require_block(problem, n_interior)
    rb = _relative_bound(problem, block)
    spec_a = hermitian_eig(block.A).eigenvalues
    c = float(hermitian_eig(block.C).eigenvalues[-1])
    checks = []
    marks = None
    try:
        marks = landmarks(block)
    except (LandmarkError, SingularShiftError):
        pass
    if alpha is None:
        alpha = problem.alpha
    if alpha is None and marks is not None:
        alpha = marks.c_tilde
    if alpha is None:
        return [_not_applicable(
            "angular/subspace", "L_(alpha, inf)(M) = {(x, K x)}",
            "no alpha given and no spectrum above c to pick one from")]
    alpha = float(alpha)

    delta_anchor = ("delta = a/(alpha - c) + |a alpha + b| / "
                    "(dist[alpha, sigma(A)] (alpha - c)) < 1/2")
    delta = None
    try:
        delta = delta_condition(alpha, c, spec_a, rb)
        checks.append(Check(
            name="angular/delta", anchor=delta_anchor,
            inputs={"alpha": alpha, "c": c, "a": rb.a, "b": rb.b},
            outputs={"delta": delta},
            status=PASS if delta < 0.5 else NOT_APPLICABLE,
            tolerances={}))
    except HypothesisError as exc:
        checks.append(_not_applicable("angular/delta", delta_anchor, str(exc)))

    graph_anchor = "L_(alpha, inf)(M) is the graph of an operator"
    op_anchor = "K = V U+; codim(Dom(K)) = n1 - dim; ||K|| from the restriction"
    try:
        sub = spectral_subspace(block, alpha)
    except ArgumentError as exc:
        checks.append(_not_applicable("angular/graph", graph_anchor, str(exc)))
        return checks
    verdict = graph_test(sub)
    if verdict.verdict == GRAPH:
        graph_status = PASS
    elif verdict.verdict == NOT_GRAPH and delta is not None and delta < 0.5:
        graph_status = FAIL  # contradicts the sufficient condition
    else:
        graph_status = NOT_APPLICABLE
    checks.append(Check(
        name="angular/graph", anchor=graph_anchor,
        inputs={"alpha": alpha},
        outputs={"verdict": verdict.verdict, "sigma_min": verdict.sigma_min,
                 "dim": sub.dim},
        status=graph_status, tolerances={"graph_tol": 1e-8}))
    try:
        k_op = angular_operator(sub)
    except NotAGraphError as exc:
        checks.append(_not_applicable("angular/operator", op_anchor, str(exc)))
        return checks
    residual = operator_norm(k_op.K @ sub.basis_first - sub.basis_second)
    checks.append(Check(
        name="angular/operator", anchor=op_anchor,
        inputs={"alpha": alpha},
        outputs={"norm": k_op.norm, "codim": k_op.codim,
                 "graph_residual": residual},
        status=PASS if residual <= 1e-8 else FAIL,
        tolerances={"residual": 1e-8}))
    codim_anchor = "codim(Dom(K_c)) = kappa"
    if marks is not None and sub.dim == int(marks.lambda_above_c.size):
        checks.append(Check(
            name="angular/codim-kappa", anchor=codim_anchor,
            inputs={"alpha": alpha},
            outputs={"codim": k_op.codim, "kappa": marks.kappa},
            status=PASS if k_op.codim == marks.kappa else FAIL,
            tolerances={}))
    else:
        checks.append(_not_applicable(
            "angular/codim-kappa", codim_anchor,
            "alpha does not isolate the full half line above c"))
    return checks


def cmd_basis(problem: ProblemFile, n_max: int | None,
              n_interior: int = DEFAULT_MHD_N) -> list[Check]:
    """Riesz frame bounds, projection decay and Bari sums for one problem."""
    block, _ = _require_block(problem, n_interior)
    rb = _relative_bound(problem, block)
    checks = []
    try:
        marks = landmarks(block)
    except (LandmarkError, SingularShiftError) as exc:
        return [_not_applicable("basis/landmarks",
                                "c = max sigma(C); kappa at c~", str(exc))]
    if n_max is None:
        n_max = problem.n_max or DEFAULT_N_MAX
    n_avail = min(n_max, int(marks.lambda_above_c.size),
                  block.n1 - marks.kappa)
    sub = spectral_subspace(block, marks.c_tilde)
    riesz_anchor = ("(1 + ||K_c||^2)^{-1} sum |beta_n|^2 <= "
                    "||sum beta_n x_n||^2 <= sum |beta_n|^2")
    try:
        k_op = angular_operator(sub)
        rep = riesz_check(block, sub, k_op)
        checks.append(Check(
            name="basis/riesz", anchor=riesz_anchor,
            inputs={"dim": sub.dim, "kappa": marks.kappa},
            outputs={"gram_min": rep.gram_min, "gram_max": rep.gram_max,
                     "riesz_lower": rep.riesz_lower, "k_norm": rep.k_norm},
            status=PASS if rep.passed else FAIL,
            tolerances={"margin": 1e-8}))
    except (NotAGraphError, ArgumentError) as exc:
        checks.append(_not_applicable("basis/riesz", riesz_anchor, str(exc)))

    decay_anchor = "||E({mu_{kappa+n}}) - F_n(Delta_n)|| -> 0"
    bari_anchor = ("sum ||y_{kappa+n} - x_n||^2 < inf with "
                   "sum 1/(mu_{n+1} - mu_n)^2 < inf")
    if n_avail < 1:
        checks.append(_not_applicable("basis/decay", decay_anchor,
                                      "no eigenvalues above c to track"))
        return checks
    try:
        decay = projection_decay(block, marks, n_avail, rb=rb)
        bound_ok = all(r.proj_diff_norm <= r.bound + 1e-9
                       for r in decay.records if r.delta < 1.0)
        checks.append(Check(
            name="basis/decay", anchor=decay_anchor,
            inputs={"n_max": n_avail},
            outputs={"norms": [r.proj_diff_norm for r in decay.records],
                     "deltas": [r.delta for r in decay.records],
                     "bounds": [r.bound for r in decay.records],
                     "m_constant": decay.m_constant},
            status=PASS if bound_ok else FAIL,
            tolerances={"slack": 1e-9}))
    except (DegenerateGapError, SingularShiftError) as exc:
        checks.append(_not_applicable("basis/decay", decay_anchor, str(exc)))
    try:
        bari = bari_sum(block, marks, n_avail)
        nondecreasing = bool(np.all(np.diff(bari.partial_sums) >= -1e-15))
        checks.append(Check(
            name="basis/bari", anchor=bari_anchor,
            inputs={"n_max": n_avail},
            outputs={"terms": [r.term for r in bari.records],
                     "partial_sum": float(bari.partial_sums[-1]),
                     "gap_sum": bari.gap_sum, "converged": bari.converged},
            status=PASS if nondecreasing else FAIL,
            tolerances={}))
    except (PairingError, SingularShiftError) as exc:
        checks.append(_not_applicable("basis/bari", bari_anchor, str(exc)))
    return checks


def cmd_soq(problem: ProblemFile, subspace_dim: int | None,
            n_interior: int = DEFAULT_MHD_N) -> list[Check]:
    """Second-order-spectrum enclosures on a deterministic trial subspace."""
    block, disc = _require_block(problem, n_interior)
    rb = _relative_bound(problem, block)
    spec_a = hermitian_eig(block.A).eigenvalues
    c = float(hermitian_eig(block.C).eigenvalues[-1])
    spec_m = hermitian_eig(assemble(block)).eigenvalues
    anchor = ("sigma(M) ∩ [Re z - |Im z|^2/(b4p - Re z), "
              "Re z + |Im z|^2/(Re z - a1p)] nonempty for admitted z")
    dim_full = block.n1 + block.n2
    m = min(subspace_dim or dim_full, dim_full)
    bracket = soq_bracket(spec_a, c, rb)
    if bracket is None:
        return [_not_applicable("soq/enclosures", anchor,
                                "fewer than two valid pair windows")]
    a1p, b4m, b4p = bracket
    if disc is not None:
        q = trial_space(disc, m)
    else:
        q = np.eye(dim_full, dtype=complex)[:, :m]
    enclosures = soq_enclosure(block, q, a1p, b4m, b4p)
    admitted = [e for e in enclosures if e.admitted]
    misses = []
    for encl in admitted:
        margin = 1e-6 * max(1.0, abs(encl.z.real))
        near = any(encl.interval.contains(float(lam))
                   or min(abs(lam - encl.interval.lo),
                          abs(lam - encl.interval.hi)) <= margin
                   for lam in spec_m)
        if not near:
            misses.append({"re": encl.z.real, "im": encl.z.imag})
    return [Check(
        name="soq/enclosures", anchor=anchor,
        inputs={"subspace_dim": m, "a1p": a1p, "b4m": b4m, "b4p": b4p},
        outputs={
            "points": [{"re": e.z.real, "im": e.z.imag,
                        "admitted": e.admitted,
                        "interval": None if e.interval is None
                        else [e.interval.lo, e.interval.hi]}
                       for e in enclosures],
            "admitted_count": len(admitted),
            "misses": misses},
        status=(PASS if not misses else FAIL) if admitted else NOT_APPLICABLE,
        tolerances={"intersection_margin_rel": 1e-6})]


def cmd_mhd(problem: ProblemFile, n_interior: int, n_max: int) -> list[Check]:
    if problem.profile is None:
        raise ParseError("the mhd command needs an 'mhd' problem file")
    squared = bool(problem.flags.get("squared_bands", True))
    return run_report(problem.profile, n_interior, n_max,
                      squared_bands=squared)


def _write_csv(report: Report, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    families: dict[str, list[Check]] = {}
    for check in report.checks:
        families.setdefault(check.family, []).append(check)
    for family, checks in sorted(families.items()):
        path = directory / f"{family}.csv"
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["name", "status", "anchor", "inputs", "outputs",
                             "tolerances"])
            for check in checks:
                writer.writerow([check.name, check.status, check.anchor,
                                 emit_json(check.inputs),
                                 emit_json(check.outputs),
                                 emit_json(check.tolerances)])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specblock",
        description="Spectral enclosures and basis diagnostics for "
                    "self-adjoint 2x2 block operator matrices.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="problem file (JSON)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--csv", help="directory for per-family CSV tables")

    p = sub.add_parser("enclose", help="spectral enclosure checks")
    common(p)
    p.add_argument("--n", type=int, default=DEFAULT_MHD_N,
                   help="interior points when the input is a profile")

    p = sub.add_parser("angular", help="graph subspace and angular operator")
    common(p)
    p.add_argument("--alpha", type=float, help="cut point above max sigma(C)")
    p.add_argument("--n", type=int, default=DEFAULT_MHD_N)

    p = sub.add_parser("basis", help="Riesz/Bari basis diagnostics")
    common(p)
    p.add_argument("--n-max", type=int, help="how many eigenvalues above c")
    p.add_argument("--n", type=int, default=DEFAULT_MHD_N)

    p = sub.add_parser("soq", help="second-order-spectrum enclosures")
    common(p)
    p.add_argument("--subspace-dim", type=int, help="trial space dimension")
    p.add_argument("--n", type=int, default=DEFAULT_MHD_N)

    p = sub.add_parser("mhd", help="full magnetohydrodynamics pipeline")
    common(p)
    p.add_argument("--n", type=int, default=DEFAULT_MHD_N,
                   help="interior points of the discretization")
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)

    p = sub.add_parser("selftest", help="run the built-in property suite")
    common(p, needs_input=False)
    p.add_argument("--seed", type=int, default=42)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "selftest":
            report = selftest_module.run(args.seed)
        else:
            problem = load_problem(args.input)
            digest = digest_bytes(problem.raw)
            if args.command == "enclose":
                checks = cmd_enclose(problem, args.n)
            elif args.command == "angular":
                checks = cmd_angular(problem, args.alpha, args.n)
            elif args.command == "basis":
                checks = cmd_basis(problem, args.n_max, args.n)
            elif args.command == "soq":
                checks = cmd_soq(problem, args.subspace_dim, args.n)
            elif args.command == "mhd":
                checks = cmd_mhd(problem, args.n,
                                 args.n_max or problem.n_max or DEFAULT_N_MAX)
            else:  # pragma: no cover
                raise ParseError(f"unknown command {args.command}")
            report = Report(tool="specblock", version=__version__,
                            command=args.command, input_digest=digest,
                            checks=checks)
    except (ParseError, ArgumentError, OSError) as exc:
        print(f"specblock: error: {exc}", file=sys.stderr)
        return 2
    except SpecblockError as exc:
        print(f"specblock: error: {exc}", file=sys.stderr)
        return 2

    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        _write_csv(report, Path(args.csv))
    return 1 if report.worst_status() == FAIL else 0


def entrypoint() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entrypoint()
