"""Plain-text exchange formats: CSV grid fields, JSON reports and OBJ meshes.

CSV layout: a header ``x,y,c0,c1,...`` followed by one row per grid point,
``y`` varying slowest.  The component count fixes the value type:

====  ==========================================================
1     real scalar
2     complex scalar (real part, imaginary part)
3     vector in R^3
4     vector in R^4 / quaternion
8     complexified quaternion (four real parts, four imaginary parts)
====  ==========================================================
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import CSVFormatError, PoleProximityError
from .grid import Grid, GridField

__all__ = ["write_csv", "read_csv", "format_csv", "parse_csv", "as_complex", "write_json",
           "write_obj", "format_obj", "stereographic", "COMPONENT_COUNTS"]

COMPONENT_COUNTS = (1, 2, 3, 4, 8)
_SPACING_TOL = 1e-6


def _as_real(values: np.ndarray) -> np.ndarray:
    """Real ``(ny, nx, k)`` array of CSV columns for a field's values."""
    v = np.asarray(values)
    if v.ndim == 2:
        v = v[..., None]
    if np.iscomplexobj(v):
        if v.shape[-1] not in (1, 4):
            raise ValueError("complex fields must be scalars or quaternions")
        v = np.concatenate([v.real, v.imag], axis=-1)
    if v.shape[-1] not in COMPONENT_COUNTS:
        raise ValueError(f"{v.shape[-1]} components cannot be written (allowed {COMPONENT_COUNTS})")
    return v.astype(float)


def as_complex(values) -> np.ndarray:
    """Interpret 2 or 8 CSV components as a complex scalar or complex quaternion."""
    v = np.asarray(getattr(values, "values", values))
    k = v.shape[-1]
    if k not in (2, 8):
        raise ValueError(f"{k} components do not describe a complex value")
    half = k // 2
    out = v[..., :half] + 1j * v[..., half:]
    return out[..., 0] if half == 1 else out


def format_csv(field: GridField) -> str:
    grid = field.grid
    v = _as_real(field.values)
    X, Y = grid.mesh()
    rows = np.concatenate([X[..., None], Y[..., None], v], axis=-1).reshape(-1, 2 + v.shape[-1])
    header = ",".join(["x", "y"] + [f"c{i}" for i in range(v.shape[-1])])
    body = "\n".join(",".join(f"{a:.17g}" for a in row) for row in rows)
    return header + "\n" + body + "\n"


def write_csv(path, field: GridField) -> None:
    """Write a grid field; values are printed with 17 significant digits (round-trip exact)."""
    Path(path).write_text(format_csv(field))


def _axis(values: np.ndarray, name: str) -> tuple[float, float, int]:
    u = np.unique(values)
    if u.size < 2:
        raise CSVFormatError(f"need at least two distinct {name} values")
    steps = np.diff(u)
    h = (u[-1] - u[0]) / (u.size - 1)
    if np.abs(steps - h).max() > _SPACING_TOL * h:
        raise CSVFormatError(f"{name} values are not uniformly spaced")
    return float(u[0]), float(h), int(u.size)


def parse_csv(text: str, source: str = "<csv>") -> GridField:
    """Parse CSV text into a :class:`GridField` whose values have the column count as last axis.

    Raises
    ------
    CSVFormatError
        With the 1-based line number of the first offending line.
    """
    lines = text.splitlines()
    if not lines:
        raise CSVFormatError(f"{source} is empty", 1)
    head = [h.strip() for h in lines[0].split(",")]
    k = len(head) - 2
    if head[:2] != ["x", "y"] or head[2:] != [f"c{i}" for i in range(k)]:
        raise CSVFormatError("header must read x,y,c0,c1,...", 1)
    if k not in COMPONENT_COUNTS:
        raise CSVFormatError(f"{k} value columns; expected one of {COMPONENT_COUNTS}", 1)
    rows = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != k + 2:
            raise CSVFormatError(f"expected {k + 2} columns, found {len(parts)}", no)
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise CSVFormatError(f"not a number in {line.strip()!r}", no) from None
        if not np.all(np.isfinite(rows[-1])):
            raise CSVFormatError("non-finite value", no)
    if not rows:
        raise CSVFormatError("no data rows", 2)
    data = np.array(rows)
    x0, hx, nx = _axis(data[:, 0], "x")
    y0, hy, ny = _axis(data[:, 1], "y")
    if data.shape[0] != nx * ny:
        raise CSVFormatError(f"{data.shape[0]} rows do not fill a {nx} x {ny} grid", len(lines))
    grid = Grid(x0, y0, hx, hy, nx, ny)
    X, Y = grid.mesh()
    tol = 1e-9 * max(1.0, np.abs(data[:, :2]).max())
    bad = np.flatnonzero((np.abs(data[:, 0] - X.ravel()) > tol) | (np.abs(data[:, 1] - Y.ravel()) > tol))
    if bad.size:
        raise CSVFormatError("rows are not in grid order (y outer, x inner)", int(bad[0]) + 2)
    return GridField(grid, data[:, 2:].reshape(ny, nx, k))


def read_csv(path) -> GridField:
    return parse_csv(Path(path).read_text(), str(path))


def write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# meshes


def stereographic(f, pole=(-1.0, 0.0, 0.0, 0.0), min_distance: float = 1e-6) -> np.ndarray:
    """Stereographic projection of S^3 to R^3 from ``pole``.

    For the default pole this is ``(x, y, z) / (1 + w)``.  Other poles use
    an orthonormal basis of their orthogonal complement.

    Raises
    ------
    PoleProximityError
        If some point comes within ``min_distance`` of the pole.
    """
    f = np.asarray(f, dtype=float)
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    gap = 1.0 - f @ pole
    closest = float(gap.min())
    if closest < min_distance:
        raise PoleProximityError(f"a point lies within {closest:.3e} of the projection pole")
    if np.allclose(pole, [-1.0, 0.0, 0.0, 0.0]):
        basis = np.eye(4)[1:]
    else:
        q, _ = np.linalg.qr(np.column_stack([pole, np.eye(4)]))
        basis = q[:, 1:4].T
    return (f @ basis.T) / gap[..., None]


def format_obj(vertices) -> str:
    """OBJ text for a grid of 3-D points: ``v x y z`` lines, two triangles per cell, 1-indexed."""
    v = np.asarray(vertices, dtype=float)
    ny, nx = v.shape[:2]
    out = [f"v {a:.17g} {b:.17g} {c:.17g}" for a, b, c in v.reshape(-1, 3)]
    for j in range(ny - 1):
        for i in range(nx - 1):
            a = j * nx + i + 1
            b, c, d = a + 1, a + nx + 1, a + nx
            out.append(f"f {a} {b} {c}")
            out.append(f"f {a} {c} {d}")
    return "\n".join(out) + "\n"


def write_obj(path, vertices) -> None:
    Path(path).write_text(format_obj(vertices))
