"""Named residuals with interior/boundary sup norms, serialisable to JSON."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Residual:
    interior_sup: float
    boundary_sup: float

    @property
    def sup(self) -> float:
        return max(self.interior_sup, self.boundary_sup)


def _pointwise_norm(values, ndim_grid: int) -> np.ndarray:
    a = np.abs(np.asarray(values))
    if a.ndim > ndim_grid:
        a = np.sqrt(np.sum(a.reshape(a.shape[:ndim_grid] + (-1,)) ** 2, axis=-1))
    return a


def split_sup(values) -> Residual:
    """Sup of the pointwise norm over interior and boundary grid points.

    ``values`` has shape ``(ny, nx, ...)``; scalars and 0-d arrays count as
    interior.
    """
    a = np.asarray(values)
    if a.ndim < 2:
        s = float(np.max(np.abs(a))) if a.size else 0.0
        return Residual(s, 0.0)
    norm = _pointwise_norm(a, 2)
    interior = norm[1:-1, 1:-1]
    mask = np.ones(norm.shape, dtype=bool)
    mask[1:-1, 1:-1] = False
    return Residual(
        float(interior.max()) if interior.size else 0.0,
        float(norm[mask].max()) if mask.any() else 0.0,
    )


@dataclass
class ResidualReport:
    """Mapping residual name -> :class:`Residual`, plus the grid it was measured on.

    Indexing with a name returns the interior sup norm, which is what every
    gate compares against.
    """

    grid: object = None
    residuals: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def add(self, name: str, values) -> None:
        self.residuals[name] = split_sup(values)

    def add_scalar(self, name: str, val: float) -> None:
        self.residuals[name] = Residual(float(val), 0.0)

    def update(self, other: ResidualReport, prefix: str = "") -> None:
        for k, v in other.residuals.items():
            self.residuals[prefix + k] = v
        self.notes.update({prefix + k: v for k, v in other.notes.items()})

    def __getitem__(self, name: str) -> float:
        return self.residuals[name].interior_sup

    def __contains__(self, name: str) -> bool:
        return name in self.residuals

    def __iter__(self):
        return iter(self.residuals)

    def names(self) -> list[str]:
        return list(self.residuals)

    def worst(self, names=None) -> tuple[str, float]:
        names = self.residuals if names is None else names
        name = max(names, key=lambda k: self.residuals[k].interior_sup)
        return name, self.residuals[name].interior_sup

    def failures(self, gates: dict) -> dict:
        """Residuals whose interior sup exceeds the gate given for that name."""
        return {k: self[k] for k, tol in gates.items() if k in self and not self[k] <= tol}

    def to_dict(self) -> dict:
        g = self.grid
        gd = None if g is None else {"hx": g.hx, "hy": g.hy, "nx": g.nx, "ny": g.ny}
        out = {k: {"interior_sup": r.interior_sup, "boundary_sup": r.boundary_sup, "grid": gd}
               for k, r in self.residuals.items()}
        if self.notes:
            out["_notes"] = self.notes
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), indent=kw.pop("indent", 2), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, data: dict) -> ResidualReport:
        rep = cls()
        for k, v in data.items():
            if k == "_notes":
                rep.notes = dict(v)
                continue
            rep.residuals[k] = Residual(float(v["interior_sup"]), float(v["boundary_sup"]))
        return rep

    def __str__(self) -> str:
        lines = [f"{k:32s} {r.interior_sup:.3e}  (boundary {r.boundary_sup:.3e})"
                 for k, r in self.residuals.items()]
        return "\n".join(lines)
