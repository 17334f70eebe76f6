"""Command-line front end: ``s3h <subcommand> ...``.

Every subcommand writes a JSON report (to ``--report`` or standard output)
with the residuals it measured, the gates they were compared against and
the gate failures.  Exit status: 0 when every gated residual is within its
gate, 1 when one is not, 2 for invalid input (parse errors, domain errors).

Default gates are ``1e-9`` for analytic data and ``100 h^2`` for data that
went through finite differences; ``S3H_TOLERANCE_SCALE`` multiplies all of
them and ``--gate NAME=VALUE`` overrides single gates.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bonnet, family, frame as frame_mod, hsurface, io, transform
from .congruence import procrustes_o4
from .errors import S3HError
from .grid import Grid, GridField
from .report import ResidualReport

__all__ = ["RunConfig", "run", "main", "build_parser"]

ANALYTIC_GATE = 1e-9
FD_GATE_FACTOR = 100.0
CONGRUENCE_GATE = 1e-6
PATH_GATE = 1e-6


@dataclass
class RunConfig:
    """Validated command-line configuration."""

    subcommand: str
    args: dict
    grid: Grid | None = None
    gate_overrides: dict = field(default_factory=dict)
    report: str | None = None

    @property
    def tolerance_scale(self) -> float:
        raw = os.environ.get("S3H_TOLERANCE_SCALE", "1")
        try:
            val = float(raw)
        except ValueError:
            raise S3HError(f"S3H_TOLERANCE_SCALE={raw!r} is not a number") from None
        if not val > 0:
            raise S3HError("S3H_TOLERANCE_SCALE must be positive")
        return val

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> RunConfig:
        args = {k: v for k, v in vars(ns).items() if k not in ("command", "gate", "report")}
        grid = None
        if "nx" in args:
            grid = Grid.from_bounds(args.pop("x0"), args.pop("x1"), args.pop("y0"), args.pop("y1"),
                                    args.pop("nx"), args.pop("ny"))
        overrides = {}
        for item in ns.gate or []:
            name, sep, val = item.partition("=")
            if not sep:
                raise S3HError(f"--gate expects NAME=VALUE, got {item!r}")
            overrides[name] = float(val)
        if "eps" in args and args["eps"] is not None:
            args["eps"] = transform.Eps.parse(args["eps"])
        return cls(ns.command, args, grid, overrides, ns.report)


# ---------------------------------------------------------------------------
# helpers


class _Outcome:
    """Residuals, gates and extra data of one run."""

    def __init__(self, config: RunConfig, grid=None):
        self.config = config
        self.report = ResidualReport(grid=grid)
        self.gates: dict[str, float] = {}
        self.data: dict = {}

    def gate(self, rep: ResidualReport, tol: float, prefix: str = "", names=None) -> None:
        self.report.update(rep, prefix)
        for k in (rep.names() if names is None else names):
            self.gates[prefix + k] = tol * self.config.tolerance_scale

    def scalar(self, name: str, val: float, tol: float | None = None) -> None:
        self.report.add_scalar(name, val)
        if tol is not None:
            self.gates[name] = tol * self.config.tolerance_scale

    def finish(self) -> int:
        self.gates.update({k: v for k, v in self.config.gate_overrides.items()})
        fails = self.report.failures(self.gates)
        doc = {
            "command": self.config.subcommand,
            "residuals": self.report.to_dict(),
            "gates": self.gates,
            "failures": fails,
            "status": "fail" if fails else "ok",
            "data": self.data,
        }
        text = json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
        if self.config.report:
            Path(self.config.report).write_text(text)
        else:
            sys.stdout.write(text)
        for k, v in fails.items():
            print(f"gate failed: {k} = {v:.3e} > {self.gates[k]:.3e}", file=sys.stderr)
        return 1 if fails else 0


def _json_default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _fd_gate(grid: Grid) -> float:
    return FD_GATE_FACTOR * grid.h ** 2


def _read(path, counts) -> GridField:
    fld = io.read_csv(path)
    k = fld.values.shape[-1]
    if k not in counts:
        raise S3HError(f"{path}: expected {' or '.join(map(str, counts))} components, found {k}")
    return fld


def _frame_from_csv(path) -> frame_mod.AdaptedFrameField:
    return frame_mod.build_frame(_read(path, (4,)))


def _write_frame_fields(prefix: str, fr) -> dict:
    g = fr.grid
    files = {}
    for name, vals in (("phi", fr.phi), ("mu", fr.mu), ("alpha", fr.alpha), ("beta", fr.beta), ("N", fr.N)):
        path = f"{prefix}_{name}.csv"
        io.write_csv(path, GridField(g, vals))
        files[name] = path
    return files


# ---------------------------------------------------------------------------
# subcommands


def _cmd_clifford(cfg: RunConfig) -> int:
    a = cfg.args
    if a["tau"] is not None:
        params = family.clifford_params_from_mu(a["phi"], a["tau"])
    else:
        params = family.clifford_params(a["r"], a["phi"])
    cm = family.clifford_map(params)
    fr = cm.frame(cfg.grid)
    out = _Outcome(cfg, cfg.grid)
    out.gate(frame_mod.verify_frame(fr), ANALYTIC_GATE)
    out.data["params"] = {k: getattr(params, k) for k in ("r", "s", "phi", "theta", "a", "b", "c", "d")}
    out.data["params"]["mu"] = [params.mu.real, params.mu.imag]
    if a["out"]:
        io.write_csv(a["out"], GridField(cfg.grid, fr.f))
    if a["frame_prefix"]:
        out.data["frame_files"] = _write_frame_fields(a["frame_prefix"], fr)
    return out.finish()


def _cmd_transform(cfg: RunConfig) -> int:
    a = cfg.args
    fr = _frame_from_csv(a["input"])
    pair = transform.eps_transform(fr, a["eps"])
    out = _Outcome(cfg, fr.grid)
    tol = _fd_gate(fr.grid)
    out.gate(transform.transform_report(pair), tol)
    out.gate(frame_mod.verify_frame(pair.result), tol, prefix="result_")
    if a["out"]:
        io.write_csv(a["out"], GridField(fr.grid, pair.result.f))
    return out.finish()


def _cmd_sequence(cfg: RunConfig) -> int:
    a = cfg.args
    fr = _frame_from_csv(a["input"])
    frames = transform.sequence(fr, a["p_min"], a["p_max"])
    out = _Outcome(cfg, fr.grid)
    tol = _fd_gate(fr.grid)
    files = {}
    for p, fp in zip(range(a["p_min"], a["p_max"] + 1), frames):
        rep = frame_mod.verify_frame(fp)
        out.gate(rep, tol, prefix=f"p{p}_", names=["harmonic", "adapted"])
        out.report.update(rep, prefix=f"p{p}_")
        if a["out_prefix"]:
            path = f"{a['out_prefix']}_p{p}.csv"
            io.write_csv(path, GridField(fr.grid, fp.f))
            files[str(p)] = path
    out.data["files"] = files
    return out.finish()


def _cmd_bonnet(cfg: RunConfig) -> int:
    a = cfg.args
    if a["sinh_gordon"] is not None:
        grid = cfg.grid
        prof = family.sinh_gordon_profile(a["sinh_gordon"], a["dphi0"], grid)
        data = bonnet.BonnetData.from_fields(prof.field, np.zeros(grid.shape, complex),
                                             phi_x=np.broadcast_to(prof.dphi, grid.shape),
                                             phi_y=np.zeros(grid.shape))
    else:
        if not (a["phi"] and a["mu"]):
            raise S3HError("bonnet needs --phi and --mu CSV files, or --sinh-gordon PHI0")
        phi = _read(a["phi"], (1,))
        mu = _read(a["mu"], (2,))
        if phi.grid.shape != mu.grid.shape:
            raise S3HError("phi and mu must be sampled on the same grid")
        data = bonnet.BonnetData.from_fields(GridField(phi.grid, phi.values[..., 0]), io.as_complex(mu))
        grid = phi.grid
    gate = a["compat_gate"] * cfg.tolerance_scale
    out = _Outcome(cfg, grid)
    for k, v in data.compat_residual.items():
        out.scalar(k, v, a["compat_gate"])
    if data.compat_sup > gate:
        return out.finish()
    res = bonnet.reconstruct(data, order=a["order"], compat_gate=gate)
    other = bonnet.reconstruct(data, order="column" if a["order"] == "row" else "row", compat_gate=gate)
    out.scalar("path_independence", float(np.linalg.norm(res.f.values - other.f.values, axis=-1).max()), PATH_GATE)
    out.data["max_drift"] = res.max_drift
    fr = frame_mod.build_frame(res.f)
    tol = _fd_gate(grid)
    rep = ResidualReport(grid=grid)
    rep.add("phi_match", fr.phi - data.phi.values)
    rep.add("mu_match", fr.mu - data.mu.values)
    out.gate(rep, tol)
    out.gate(frame_mod.verify_frame(fr), tol, prefix="frame_", names=["harmonic", "adapted"])
    if a["out"]:
        io.write_csv(a["out"], res.f)
    return out.finish()


def _cmd_hsurface(cfg: RunConfig) -> int:
    a = cfg.args
    if a["reverse"]:
        X = _read(a["input"], (3,))
        surf = hsurface.HSurfaceField.from_samples(X, hsurface.HARMONIC_H)
        fr = hsurface.harmonic_from_h(surf)
        out = _Outcome(cfg, X.grid)
        out.gate(frame_mod.verify_frame(fr), _fd_gate(X.grid), names=["harmonic", "adapted"])
        if a["out"]:
            io.write_csv(a["out"], GridField(X.grid, fr.f))
        return out.finish()
    fr = _frame_from_csv(a["input"])
    surf = hsurface.h_from_harmonic(fr)
    if a["dilate"] is not None:
        surf = hsurface.dilate(surf, a["dilate"])
    out = _Outcome(cfg, fr.grid)
    out.gate(hsurface.surface_report(surf), _fd_gate(fr.grid))
    out.data["H"] = surf.H
    if a["out"]:
        io.write_csv(a["out"], surf.X)
    return out.finish()


def _cmd_verify(cfg: RunConfig) -> int:
    a = cfg.args
    fld = io.read_csv(a["input"])
    k = fld.values.shape[-1]
    grid = fld.grid
    out = _Outcome(cfg, grid)
    tol = _fd_gate(grid)
    if k == 4:
        rep = frame_mod.verify_frame(frame_mod.build_frame(fld))
        out.gate(rep, tol, names=["harmonic", "adapted", "alpha_beta", "beta_norm", "normal_unit"])
        out.report.update(rep)
    elif k == 3:
        surf = hsurface.HSurfaceField.from_samples(fld, a["H"])
        out.gate(hsurface.surface_report(surf), tol)
    elif k == 8:
        hd = hsurface.holo_differential(fld)
        out.scalar("holo_dbar", hd.dbar_residual, tol)
    elif k in (1, 2):
        partner = a["mu"] if k == 1 else a["phi"]
        if not partner:
            raise S3HError("verifying phi or mu needs the other field (--mu or --phi)")
        other = io.read_csv(partner)
        phi, mu = (fld, other) if k == 1 else (other, fld)
        data = bonnet.BonnetData.from_fields(GridField(phi.grid, phi.values[..., 0]), io.as_complex(mu))
        for name, v in data.compat_residual.items():
            out.scalar(name, v, tol)
    out.data["components"] = k
    return out.finish()


def _cmd_congruent(cfg: RunConfig) -> int:
    a = cfg.args
    fa, fb = _read(a["a"], (4,)), _read(a["b"], (4,))
    fit = procrustes_o4(fa, fb)
    out = _Outcome(cfg, fa.grid)
    out.scalar("procrustes", fit.residual, a["tol"])
    out.data.update(fit.to_dict())
    out.data["rank_deficient"] = fit.rank_deficient
    return out.finish()


def _cmd_export_obj(cfg: RunConfig) -> int:
    a = cfg.args
    fld = _read(a["input"], (3, 4))
    v = fld.values
    if v.shape[-1] == 4:
        if not a["stereographic"]:
            raise S3HError("R^4 data need --stereographic to be exported as a mesh")
        pole = tuple(float(t) for t in a["pole"].split(","))
        v = io.stereographic(v, pole)
    io.write_obj(a["out"], v)
    out = _Outcome(cfg, fld.grid)
    out.data["vertices"] = int(v.shape[0] * v.shape[1])
    out.data["faces"] = int(2 * (v.shape[0] - 1) * (v.shape[1] - 1))
    return out.finish()


_COMMANDS = {
    "clifford": _cmd_clifford, "transform": _cmd_transform, "sequence": _cmd_sequence,
    "bonnet": _cmd_bonnet, "hsurface": _cmd_hsurface, "verify": _cmd_verify,
    "congruent": _cmd_congruent, "export-obj": _cmd_export_obj,
}


def run(config: RunConfig) -> int:
    """Execute one subcommand; returns the exit status."""
    return _COMMANDS[config.subcommand](config)


# ---------------------------------------------------------------------------
# argument parsing


def _grid_args(p: argparse.ArgumentParser, bounds=(0.0, 1.0, 0.0, 1.0), n=64) -> None:
    g = p.add_argument_group("grid")
    for name, val in zip(("x0", "x1", "y0", "y1"), bounds):
        g.add_argument(f"--{name}", type=float, default=val)
    g.add_argument("--nx", type=int, default=n)
    g.add_argument("--ny", type=int, default=n)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="s3h", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        p.add_argument("--gate", action="append", metavar="NAME=VALUE", help="override one gate")
        return p

    p = add("clifford", "sample a Clifford-torus map and its analytic frame")
    p.add_argument("--r", type=float, default=2 ** -0.5)
    p.add_argument("--phi", type=float, default=float(np.arcsinh(1.0)))
    p.add_argument("--tau", type=float, help="choose the member by arg(mu) instead of r")
    p.add_argument("--out")
    p.add_argument("--frame-prefix", help="also write PREFIX_{phi,mu,alpha,beta,N}.csv")
    _grid_args(p)

    p = add("transform", "apply the eps-transform to a sampled map")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps", default="+1")
    p.add_argument("--out")

    p = add("sequence", "iterate the transform: f^p for p_min <= p <= p_max")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--p-min", type=int, default=-1)
    p.add_argument("--p-max", type=int, default=1)
    p.add_argument("--out-prefix")

    p = add("bonnet", "reconstruct a map from (phi, mu)")
    p.add_argument("--phi")
    p.add_argument("--mu")
    p.add_argument("--sinh-gordon", type=float, metavar="PHI0",
                   help="use the sinh-Gordon profile through PHI0 (mu = 0) on the grid")
    p.add_argument("--dphi0", type=float, default=0.0)
    p.add_argument("--order", choices=("row", "column"), default="row")
    p.add_argument("--compat-gate", type=float, default=bonnet.DEFAULT_COMPAT_GATE)
    p.add_argument("--out")
    _grid_args(p, (-0.3, 0.3, -0.3, 0.3), 120)

    p = add("hsurface", "convert a map to its H-surface (or back with --reverse)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--reverse", action="store_true", help="input is a surface; output the map")
    p.add_argument("--dilate", type=float, metavar="LAMBDA")
    p.add_argument("--out")

    p = add("verify", "residual report for a map (4), surface (3), psi (8) or phi/mu (1/2) CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--H", type=float, default=hsurface.HARMONIC_H)
    p.add_argument("--phi")
    p.add_argument("--mu")

    p = add("congruent", "orthogonal Procrustes fit of two sampled maps")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--tol", type=float, default=CONGRUENCE_GATE)

    p = add("export-obj", "triangulated OBJ mesh of a surface or a projected map")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stereographic", action="store_true")
    p.add_argument("--pole", default="-1,0,0,0")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return run(RunConfig.from_namespace(ns))
    except ValueError as exc:               # includes every S3HError
        code = getattr(exc, "code", "invalid-input")
        print(f"s3h {ns.command}: {code}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"s3h {ns.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
