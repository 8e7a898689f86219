"""Global tolerance policy.

Exact statements of the underlying analysis (strict inequalities, membership
of resolvent sets, ...) are realised as tolerance-guarded comparisons.  The
base scale defaults to 1e-10 and can be overridden through the SPECBLOCK_TOL
environment variable.
"""

from __future__ import annotations

import os

import numpy as np

DEFAULT_BASE_TOL = 1e-10


def base_tol() -> float:
    """Base tolerance, read from SPECBLOCK_TOL when set."""
    value = os.environ.get("SPECBLOCK_TOL")
    if value is None:
        return DEFAULT_BASE_TOL
    try:
        tol = float(value)
    except ValueError as exc:
        raise ValueError(f"SPECBLOCK_TOL is not a number: {value!r}") from exc
    if not tol > 0.0:
        raise ValueError("SPECBLOCK_TOL must be a positive number")
    return tol


def matrix_tol(mat) -> float:
    """Comparison tolerance for a matrix: base_tol * dim * max|entry|."""
    arr = np.asarray(mat)
    if arr.size == 0:
        return base_tol()
    dim = max(arr.shape)
    return base_tol() * dim * float(np.max(np.abs(arr)))


def scalar_tol(*values: float) -> float:
    """Comparison tolerance for scalar hypothesis checks, scaled to the data."""
    scale = 1.0
    for value in values:
        v = abs(float(value))
        if np.isfinite(v) and v > scale:
            scale = v
    return base_tol() * scale
