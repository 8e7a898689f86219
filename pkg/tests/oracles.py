"""Independent oracles for expected-value derivation.

These deliberately avoid the library's code paths: scalar root isolation by
bisection, closed-form 2x2 eigenvalues, hand-expanded cofactor determinants
and cross-product eigenvectors for 3x3 matrices.
"""

import numpy as np


def bisect_root(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if flo * fmid <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def real_roots(f, lo, hi, samples=40001):
    """All simple real roots of f on [lo, hi] by sign-change scan + bisection."""
    xs = np.linspace(lo, hi, samples)
    vals = np.array([f(x) for x in xs])
    roots = []
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            roots.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(bisect_root(f, float(xs[i]), float(xs[i + 1])))
    if vals[-1] == 0.0:
        roots.append(float(xs[-1]))
    return roots


def cubic_fixture_roots():
    """Roots of x^3 - 11x^2 + 6x + 32, the characteristic polynomial of
    [[2, 0, 1], [0, 10, 1], [1, 1, -1]]."""
    return real_roots(lambda x: x ** 3 - 11 * x ** 2 + 6 * x + 32, -20.0, 20.0)


def herm2x2_eigs(p, q, r):
    """Eigenvalues of [[p, q], [conj(q), r]] with p, r real."""
    mid = 0.5 * (p + r)
    rad = np.sqrt((0.5 * (p - r)) ** 2 + abs(q) ** 2)
    return mid - rad, mid + rad


def det3_shifted(m, x):
    """det(m - x I) for a 3x3 array, expanded by hand (first-row cofactors)."""
    a = [[m[i][j] - (x if i == j else 0.0) for j in range(3)] for i in range(3)]
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def poly_roots_durand_kerner(coeffs, iters=200):
    """All complex roots of a monic-normalizable polynomial, by
    Durand-Kerner fixed-point iteration (no linear algebra involved).

    ``coeffs`` are highest-degree first, as for np.polyval.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    coeffs = coeffs / coeffs[0]
    n = coeffs.size - 1
    roots = (0.4 + 0.9j) ** np.arange(1, n + 1)  # standard seeds
    for _ in range(iters):
        for i in range(n):
            num = np.polyval(coeffs, roots[i])
            den = np.prod([roots[i] - roots[j] for j in range(n) if j != i])
            roots[i] = roots[i] - num / den
    return roots


def eigvec3(m, lam):
    """Unit eigenvector of a real symmetric 3x3 at a simple eigenvalue,
    via the cross product of two rows of (m - lam I)."""
    shifted = np.asarray(m, dtype=float) - lam * np.eye(3)
    best = None
    for i in range(3):
        for j in range(i + 1, 3):
            v = np.cross(shifted[i], shifted[j])
            if best is None or np.linalg.norm(v) > np.linalg.norm(best):
                best = v
    return best / np.linalg.norm(best)
