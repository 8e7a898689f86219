"""Problem-file parsing.

A problem file is a JSON object with exactly one of:

* ``blocks``: {"A": M, "B": M, "C": M} where M is either a nested array whose
  entries are numbers or [re, im] pairs, or a string path to a CSV file
  (entries like ``1.5`` or ``0.5+0.25j``, paths relative to the problem file);
* ``mhd``: {"grid_n": n, "rho": ..., "va2": ..., "vs2": ..., "kperp": ...,
  "kpar": ..., "g": x} where each field is an array of length grid_n or the
  name of a built-in shape ("constant", "linear", "sinusoidal").

Optional keys: ``rb`` = [a, b] overriding the relative-bound scan, ``alpha``,
``window`` = [lo, hi], ``n_max``, and a free-form ``flags`` object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .blocks import BlockOperatorMatrix, RelativeBound
from .errors import ParseError
from .mhd import BUILTIN_FIELDS, PlasmaProfile

__all__ = ["ProblemFile", "load_problem", "parse_matrix_entries", "read_csv_matrix"]


@dataclass
class ProblemFile:
    """Parsed problem description plus the raw bytes it came from."""

    block: BlockOperatorMatrix | None
    profile: PlasmaProfile | None
    rb: RelativeBound | None
    alpha: float | None
    window: tuple[float, float] | None
    n_max: int | None
    flags: dict = field(default_factory=dict)
    raw: bytes = b""


def _parse_entry(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (isinstance(entry, (list, tuple)) and len(entry) == 2
            and all(isinstance(p, (int, float)) for p in entry)):
        return complex(entry[0], entry[1])
    raise ParseError(f"matrix entry must be a number or [re, im] pair, got {entry!r}")


def parse_matrix_entries(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ParseError("matrix must be a non-empty list of rows")
    # A flat list of scalars is accepted as a single row.
    if all(isinstance(e, (int, float)) for e in rows):
        rows = [rows]
    width = None
    parsed = []
    for row in rows:
        if not isinstance(row, list) or not row:
            raise ParseError("matrix rows must be non-empty lists")
        values = [_parse_entry(e) for e in row]
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ParseError("matrix rows have inconsistent lengths")
        parsed.append(values)
    return np.array(parsed, dtype=complex)


def read_csv_matrix(path: Path) -> np.ndarray:
    """CSV matrix with entries like ``1.5`` or ``0.5+0.25j``."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read matrix file {path}: {exc}") from exc
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        values = []
        for cell in line.split(","):
            cell = cell.strip().replace(" ", "")
            if not cell:
                raise ParseError(f"{path}:{line_no}: empty cell")
            try:
                values.append(complex(cell))
            except ValueError as exc:
                raise ParseError(
                    f"{path}:{line_no}: cannot parse entry {cell!r}") from exc
        rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError(f"{path}: rows have inconsistent lengths")
    return np.array(rows, dtype=complex)


def _parse_block_matrix(value, base_dir: Path) -> np.ndarray:
    if isinstance(value, str):
        return read_csv_matrix(base_dir / value)
    return parse_matrix_entries(value)


def _parse_blocks(data, base_dir: Path) -> BlockOperatorMatrix:
    if not isinstance(data, dict):
        raise ParseError("'blocks' must be an object with keys A, B, C")
    missing = {"A", "B", "C"} - set(data)
    if missing:
        raise ParseError(f"'blocks' is missing {sorted(missing)}")
    a = _parse_block_matrix(data["A"], base_dir)
    b = _parse_block_matrix(data["B"], base_dir)
    c = _parse_block_matrix(data["C"], base_dir)
    try:
        return BlockOperatorMatrix(A=a, B=b, C=c)
    except Exception as exc:
        raise ParseError(f"invalid blocks: {exc}") from exc


def _parse_profile_field(name: str, value, grid_n: int) -> np.ndarray:
    if isinstance(value, str):
        if value not in BUILTIN_FIELDS:
            raise ParseError(
                f"unknown built-in {value!r} for {name}; "
                f"choose from {sorted(BUILTIN_FIELDS)}")
        return BUILTIN_FIELDS[value](np.linspace(0.0, 1.0, grid_n))
    if isinstance(value, list):
        arr = np.asarray(value, dtype=float)
        if arr.size != grid_n:
            raise ParseError(f"{name} has {arr.size} samples, expected {grid_n}")
        return arr
    raise ParseError(f"{name} must be an array or a built-in name")


def _parse_mhd(data) -> PlasmaProfile:
    if not isinstance(data, dict):
        raise ParseError("'mhd' must be an object")
    try:
        grid_n = int(data["grid_n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("'mhd' needs an integer grid_n") from exc
    fields = {}
    for name in ("rho", "va2", "vs2", "kperp", "kpar"):
        if name not in data:
            raise ParseError(f"'mhd' is missing {name}")
        fields[name] = _parse_profile_field(name, data[name], grid_n)
    g = data.get("g", 0.0)
    if not isinstance(g, (int, float)):
        raise ParseError("g must be a number")
    try:
        return PlasmaProfile(g=float(g), **fields)
    except Exception as exc:
        raise ParseError(f"invalid profile: {exc}") from exc


def load_problem(path) -> ProblemFile:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read problem file {path}: {exc}") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"problem file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("problem file must contain a JSON object")
    has_blocks = "blocks" in data
    has_mhd = "mhd" in data
    if has_blocks == has_mhd:
        raise ParseError("problem file must contain exactly one of 'blocks'/'mhd'")

    block = _parse_blocks(data["blocks"], path.parent) if has_blocks else None
    profile = _parse_mhd(data["mhd"]) if has_mhd else None

    rb = None
    if "rb" in data:
        pair = data["rb"]
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, (int, float)) for v in pair)):
            raise ParseError("'rb' must be a pair [a, b]")
        try:
            rb = RelativeBound(float(pair[0]), float(pair[1]))
        except Exception as exc:
            raise ParseError(f"invalid rb: {exc}") from exc

    alpha = data.get("alpha")
    if alpha is not None and not isinstance(alpha, (int, float)):
        raise ParseError("'alpha' must be a number")

    window = None
    if "window" in data:
        pair = data["window"]
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, (int, float)) for v in pair)):
            raise ParseError("'window' must be a pair [lo, hi]")
        window = (float(pair[0]), float(pair[1]))

    n_max = data.get("n_max")
    if n_max is not None:
        if not isinstance(n_max, int) or n_max < 1:
            raise ParseError("'n_max' must be a positive integer")

    flags = data.get("flags", {})
    if not isinstance(flags, dict):
        raise ParseError("'flags' must be an object")

    return ProblemFile(block=block, profile=profile, rb=rb,
                       alpha=None if alpha is None else float(alpha),
                       window=window, n_max=n_max, flags=flags, raw=raw)
