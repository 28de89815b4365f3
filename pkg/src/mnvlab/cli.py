"""Command-line front end.

Subcommands: field, verify, conserve, surface, invert.  A JSON config file
(--config) provides defaults; explicit flags win over it.  Exit codes:
0 success, 1 validation error, 2 numerical-acceptance failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

from .errors import MnvError
from .fields import FieldEvaluator, FieldGrid, default_u0, linspace_grid
from .inversion import sample_inverted_surface, write_inverted_obj
from .quadrature import conservation_scan
from .spinor import SpinorPair
from .verify import ORDER_STEPS, Stencil, random_points, verify_points
from .weierstrass import grid_faces, grid_vertices, write_obj


class CliError(Exception):
    """Validation failure; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


@dataclass(frozen=True)
class RunConfig:
    C: float = 0.0
    t_values: tuple = (0.0,)
    grid: tuple = (-1.0, 1.0, -1.0, 1.0, 32, 32)
    out: str = ""
    tol: float = 1e-4
    h: float = 1e-3
    spinor_p: tuple = ((0.0, 0.0), (1.0, 0.0))
    spinor_q: tuple = ((1.0, 0.0),)
    n_points: int = 50
    seed: int = 2024
    max_residual: float = 1e-3
    min_order: float = 1.7
    max_order: float = 2.3
    deviation_threshold: float = 1e-3
    budget: int = 1_000_000

    def spinor(self) -> SpinorPair:
        p = [complex(re, im) for re, im in self.spinor_p]
        q = [complex(re, im) for re, im in self.spinor_q]
        return SpinorPair.from_coeffs(p, q)

    def evaluator(self) -> FieldEvaluator:
        return FieldEvaluator(self.spinor(), C=self.C)


def _parse_complex_list(text: str):
    """Comma-separated coefficients, each "re:im" (":im" optional)."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) == 1:
            out.append((float(parts[0]), 0.0))
        elif len(parts) == 2:
            out.append((float(parts[0]), float(parts[1])))
        else:
            raise CliError(f"bad complex coefficient {item!r}, expected re:im")
    if not out:
        raise CliError("empty coefficient list")
    return tuple(out)


def _coeffs_from_config(value):
    if isinstance(value, str):
        return _parse_complex_list(value)
    out = []
    for item in value:
        if isinstance(item, (int, float)):
            out.append((float(item), 0.0))
        else:
            re, im = item
            out.append((float(re), float(im)))
    return tuple(out)


def _parse_grid(text: str):
    parts = text.split(",")
    if len(parts) != 6:
        raise CliError("grid must be XMIN,XMAX,YMIN,YMAX,NX,NY")
    xmin, xmax, ymin, ymax = (float(v) for v in parts[:4])
    nx, ny = int(parts[4]), int(parts[5])
    if nx < 1 or ny < 1:
        raise CliError("grid counts must be positive")
    return (xmin, xmax, ymin, ymax, nx, ny)


def load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise CliError("config must be a JSON object")
    return data


def merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        raw = load_config(args.config)
        known = {}
        for key, value in raw.items():
            if key == "t":
                known["t_values"] = tuple(float(v) for v in value)
            elif key == "grid":
                known["grid"] = tuple(value[:4]) + (int(value[4]), int(value[5]))
            elif key in ("spinor_p", "spinor_q"):
                known[key] = _coeffs_from_config(value)
            elif key in RunConfig.__dataclass_fields__:
                known[key] = type(getattr(cfg, key))(value) if key != "out" else str(value)
            else:
                raise CliError(f"unknown config key {key!r}")
        cfg = replace(cfg, **known)
    overrides = {}
    if args.C is not None:
        overrides["C"] = args.C
    if args.t:
        overrides["t_values"] = tuple(args.t)
    if args.grid is not None:
        overrides["grid"] = _parse_grid(args.grid)
    if args.out is not None:
        overrides["out"] = args.out
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.h is not None:
        overrides["h"] = args.h
    if args.spinor_p is not None:
        overrides["spinor_p"] = _parse_complex_list(args.spinor_p)
    if args.spinor_q is not None:
        overrides["spinor_q"] = _parse_complex_list(args.spinor_q)
    if getattr(args, "n_points", None) is not None:
        overrides["n_points"] = args.n_points
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    return replace(cfg, **overrides)


def _write_text(path: str, text: str, default_name: str) -> str:
    target = path or default_name
    with open(target, "w", encoding="utf-8") as fh:
        fh.write(text)
    return target


def _error_json(exc: Exception) -> str:
    return json.dumps(
        {"error": {"type": type(exc).__name__, "message": str(exc)}}, indent=2
    ) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_field(cfg: RunConfig) -> int:
    ev = cfg.evaluator()
    xmin, xmax, ymin, ymax, nx, ny = cfg.grid
    xs, ys = linspace_grid(xmin, xmax, ymin, ymax, nx, ny)
    lines = ["x,y,t,U,ReV,ImV"]
    for t in cfg.t_values:
        grid = FieldGrid.sample(ev, xs, ys, t)
        bad = grid.degenerate_mask
        for iy in range(len(ys)):
            for ix in range(len(xs)):
                u = grid.u[iy, ix]
                v = grid.v[iy, ix]
                lines.append(
                    f"{xs[ix]:.17g},{ys[iy]:.17g},{t:.17g},"
                    f"{u:.17g},{v.real:.17g},{v.imag:.17g}"
                )
                if bad[iy, ix]:
                    print(
                        f"warning: blow-up point sampled at "
                        f"({xs[ix]:g}, {ys[iy]:g}, {t:g}); emitted nan",
                        file=sys.stderr,
                    )
    _write_text(cfg.out, "\n".join(lines) + "\n", "field.csv")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    ev = cfg.evaluator()
    st = Stencil(h_space=cfg.h, h_time=cfg.h / 10.0)
    # keep clear of the blow-up ball for every step the order scan will use
    exclusion = 12.0 * max(max(ORDER_STEPS), cfg.h)
    points = random_points(cfg.n_points, cfg.C, exclude_radius=exclusion,
                           seed=cfg.seed)
    reports, summary = verify_points(ev, points, st)
    records = [
        {
            "x": r.point.x, "y": r.point.y, "t": r.point.t, "h": r.h_used,
            "mnv_residual": r.mnv_residual,
            "constraint_residual": r.constraint_residual,
            "order": r.estimated_order,
        }
        for r in reports
    ]
    doc = {"points": records, "summary": summary}
    _write_text(cfg.out, json.dumps(doc, indent=2) + "\n", "verify.json")
    orders = [r.estimated_order for r in reports if math.isfinite(r.estimated_order)]
    ok = (summary["max_residual"] <= cfg.max_residual
          and orders
          and min(orders) >= cfg.min_order
          and max(orders) <= cfg.max_order)
    return 0 if ok else 2


def cmd_conserve(cfg: RunConfig) -> int:
    ev = cfg.evaluator()
    times = cfg.t_values
    rows = conservation_scan(ev, times, tol=cfg.tol, budget=cfg.budget)
    max_dev = max((abs(r["deviation"]) for r in rows), default=0.0)
    doc = {"results": rows, "max_abs_deviation": max_dev}
    _write_text(cfg.out, json.dumps(doc, indent=2) + "\n", "conserve.json")
    return 0 if max_dev <= cfg.deviation_threshold else 2


def cmd_surface(cfg: RunConfig) -> int:
    xmin, xmax, ymin, ymax, nx, ny = cfg.grid
    xs, ys = linspace_grid(xmin, xmax, ymin, ymax, nx, ny)
    t = cfg.t_values[0]
    vertices = grid_vertices(cfg.spinor(), xs, ys, t, default_u0(cfg.C))
    faces = grid_faces(len(xs), len(ys))
    target = cfg.out or "surface.obj"
    with open(target, "w", encoding="utf-8") as fh:
        write_obj(fh, vertices, faces)
    return 0


def cmd_invert(cfg: RunConfig) -> int:
    xmin, xmax, ymin, ymax, nx, ny = cfg.grid
    xs, ys = linspace_grid(xmin, xmax, ymin, ymax, nx, ny)
    t = cfg.t_values[0]
    samples = sample_inverted_surface(cfg.spinor(), xs, ys, t, default_u0(cfg.C))
    n_bad = sum(1 for s in samples if s.degenerate)
    if n_bad:
        print(f"warning: {n_bad} degenerate vertex(es) flagged", file=sys.stderr)
    target = cfg.out or "invert.obj"
    with open(target, "w", encoding="utf-8") as fh:
        write_inverted_obj(fh, samples, len(xs), len(ys))
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="mnvlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("field", "sample U and V on a grid to CSV"),
        ("verify", "finite-difference residual report to JSON"),
        ("conserve", "plane integrals of U^2 per time to JSON"),
        ("surface", "export the surface mesh to OBJ"),
        ("invert", "export the inverted surface mesh to OBJ"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--C", type=float, default=None, help="blow-up time parameter")
        p.add_argument("--t", type=float, action="append", default=None,
                       help="time value (repeatable)")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
        p.add_argument("--h", type=float, default=None, help="spatial stencil step")
        p.add_argument("--grid", default=None, help="XMIN,XMAX,YMIN,YMAX,NX,NY")
        p.add_argument("--spinor-p", dest="spinor_p", default=None,
                       help='comma-separated complex coefficients "re:im"')
        p.add_argument("--spinor-q", dest="spinor_q", default=None,
                       help='comma-separated complex coefficients "re:im"')
        if name == "verify":
            p.add_argument("--n-points", dest="n_points", type=int, default=None)
            p.add_argument("--seed", type=int, default=None)
    return parser


_COMMANDS = {
    "field": cmd_field,
    "verify": cmd_verify,
    "conserve": cmd_conserve,
    "surface": cmd_surface,
    "invert": cmd_invert,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = merge_config(args)
        return _COMMANDS[args.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MnvError as exc:
        sys.stdout.write(_error_json(exc))
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
