"""Command-line interface.

Tasks:
  map       solve a map and report {target, modulus, residual, dof, version}
  modulus   report only the conformal modulus (annulus R or quad mu)
  grid      render the pulled-back canonical grid to SVG (optionally PNG)
  field     render the quadrilateral potential field to SVG (optionally PNG)
  probe     map points from a CSV file through a solved map
  compress  fit and save a barycentric rational approximant of the map

Report JSON is emitted with sorted keys so repeated runs are byte-identical
except for the timing_ms field.  Exit codes: 0 success, 2 parse, 3 geometry,
4 solver, 5 tolerance, 6 render.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__
from .errors import ConfmapError, ParseError
from .geometry import domain_from_json
from .maps import annulus_map, disk_map, evaluate_map, rectangle_map
from .rational import boundary_correspondence, fit_rational
from .render import RenderSpec, render_field_svg, render_grid_svg, save_figure_png


def _load_domain(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read domain file {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON in {path} at byte {exc.pos}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"domain file {path} must hold a JSON object")
    return domain_from_json(obj)


def _solve(args):
    domain = _load_domain(args.domain)
    kwargs = dict(tol=args.tol, max_dof=args.max_dof, best_effort=args.best_effort)
    if args.target == "disk":
        return disk_map(domain, **kwargs)
    if args.target == "annulus":
        return annulus_map(domain, **kwargs)
    return rectangle_map(domain, **kwargs)


def _report(cmap, elapsed_ms: float) -> dict:
    return {
        "target": cmap.target,
        "modulus": cmap.modulus,
        "residual": cmap.max_residual,
        "dof": cmap.model.residual.fitted_dof,
        "version": __version__,
        "timing_ms": round(elapsed_ms, 3),
    }


def _emit(obj: dict, out: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _parse_grid(text: str):
    try:
        nr, nt = text.lower().split("x")
        return int(nr), int(nt)
    except ValueError as exc:
        raise ParseError(f"--grid expects NRxNT (e.g. 8x12), got {text!r}") from exc


def cmd_map(args):
    t0 = time.perf_counter()
    cmap = _solve(args)
    elapsed = (time.perf_counter() - t0) * 1e3
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_grid_svg(cmap))
    if args.fig:
        save_figure_png(cmap, args.fig)
    _emit(_report(cmap, elapsed), args.out)
    return 0


def cmd_modulus(args):
    if args.target == "disk":
        raise ParseError("modulus task needs --target annulus or rectangle")
    t0 = time.perf_counter()
    cmap = _solve(args)
    elapsed = (time.perf_counter() - t0) * 1e3
    _emit(_report(cmap, elapsed), args.out)
    return 0


def cmd_grid(args):
    nr, nt = _parse_grid(args.grid)
    cmap = _solve(args)
    spec = RenderSpec(n_radial=nr, n_angular=nt)
    svg = render_grid_svg(cmap, spec)
    with open(args.svg, "w") as fh:
        fh.write(svg)
    if args.fig:
        save_figure_png(cmap, args.fig, spec)
    _emit(_report(cmap, 0.0) | {"svg": args.svg}, args.out)
    return 0


def cmd_field(args):
    args.target = "rectangle"
    cmap = _solve(args)
    svg = render_field_svg(cmap)
    with open(args.svg, "w") as fh:
        fh.write(svg)
    if args.fig:
        save_figure_png(cmap, args.fig)
    _emit(_report(cmap, 0.0) | {"svg": args.svg}, args.out)
    return 0


def cmd_probe(args):
    cmap = _solve(args)
    try:
        with open(args.points) as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise ParseError(f"cannot read points file {args.points}: {exc}") from exc
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]  # header line
    try:
        pts = np.array([complex(float(r[0]), float(r[1])) for r in rows])
    except (ValueError, IndexError) as exc:
        raise ParseError(f"points file {args.points} needs numeric x,y columns") from exc
    f, df = evaluate_map(cmap, pts)
    out = args.out or "-"
    fh = sys.stdout if out == "-" else open(out, "w", newline="")
    try:
        writer = csv.writer(fh)
        writer.writerow(["x_in", "y_in", "x_out", "y_out", "|f'|"])
        for z, w, d in zip(pts, f, df):
            writer.writerow(["%.12g" % z.real, "%.12g" % z.imag,
                             "%.12g" % w.real, "%.12g" % w.imag,
                             "%.12g" % abs(d)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_compress(args):
    domain = _load_domain(args.domain)
    if args.target == "rectangle":
        raise ParseError("compress task needs --target disk or annulus")
    cmap = (disk_map if args.target == "disk" else annulus_map)(
        domain, tol=min(args.tol, 1e-8), max_dof=args.max_dof,
        best_effort=args.best_effort)
    table = boundary_correspondence(cmap, args.samples)
    r = fit_rational(table, args.direction, tol=args.tol,
                     max_degree=args.max_degree, domain=domain)
    obj = r.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(obj, fh, sort_keys=True, indent=2)
            fh.write("\n")
    summary = {"direction": r.direction, "degree": r.degree,
               "accuracy": r.accuracy_estimate, "converged": r.converged,
               "version": __version__}
    sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return 0


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="confmap",
                                description="numerical conformal maps")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="task", required=True)

    def common(sp, target=True):
        sp.add_argument("--domain", required=True, help="domain JSON file")
        if target:
            sp.add_argument("--target", choices=["disk", "annulus", "rectangle"],
                            default="disk")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--max-dof", type=int, default=2000, dest="max_dof")
        sp.add_argument("--best-effort", action="store_true", dest="best_effort")
        sp.add_argument("--out", default=None, help="write the report here too")

    sp = sub.add_parser("map", help="solve a conformal map")
    common(sp)
    sp.add_argument("--svg", default=None, help="also render the grid SVG")
    sp.add_argument("--fig", default=None, help="also render a PNG figure")
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("modulus", help="conformal modulus only")
    common(sp)
    sp.set_defaults(func=cmd_modulus)

    sp = sub.add_parser("grid", help="render the pulled-back canonical grid")
    common(sp)
    sp.add_argument("--grid", default="8x12", help="NRxNT curve counts")
    sp.add_argument("--svg", required=True)
    sp.add_argument("--fig", default=None)
    sp.set_defaults(func=cmd_grid)

    sp = sub.add_parser("field", help="render the quadrilateral potential field")
    common(sp, target=False)
    sp.add_argument("--svg", required=True)
    sp.add_argument("--fig", default=None)
    sp.set_defaults(func=cmd_field)

    sp = sub.add_parser("probe", help="map CSV points through a solved map")
    common(sp)
    sp.add_argument("--points", required=True, help="CSV with x,y columns")
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("compress", help="rational compression of the map")
    common(sp)
    sp.add_argument("--direction", choices=["forward", "inverse"],
                    default="forward")
    sp.add_argument("--samples", type=int, default=800)
    sp.add_argument("--max-degree", type=int, default=200, dest="max_degree")
    sp.set_defaults(func=cmd_compress)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfmapError as exc:
        sys.stderr.write(f"confmap: error: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
