"""Deterministic SVG renderings of mapped grids and potential fields.

SVG output is assembled by hand with fixed-precision coordinates so that a
render of the same map is byte-identical across runs.  A matplotlib helper
produces PNG companion figures for the CLI report path.
"""

from __future__ import annotations

import colorsys
from dataclasses import dataclass

import numpy as np

from .errors import RenderError, WrongTarget
from .maps import ConformalMap, invert_map, _raw_eval

SVG_SIZE = 640
SVG_PAD = 0.05
COORD_FMT = "%.4f"
CURVE_SAMPLES = 160
HUE_RED = 0.0
HUE_BLUE = 2.0 / 3.0


@dataclass(frozen=True)
class RenderSpec:
    """Grid-render controls: counts of pulled-back coordinate curves."""

    n_radial: int = 8       # circles (disk/annulus) or verticals (rectangle)
    n_angular: int = 12     # rays (disk/annulus) or horizontals (rectangle)
    samples: int = CURVE_SAMPLES
    stroke: str = "#1f77b4"
    boundary_stroke: str = "#000000"


# ---------------------------------------------------------------------------
# field colors (pure helpers, kept separate for testing)


def lightness_factor(im_w: float, mu: float) -> float:
    """1 - yhat^2 with yhat = 2 mu Im w - 1: the Im w span [0, 1/mu] is
    rescaled to yhat in [-1, 1], so the factor is 1 on the midline and 0
    on the two long sides."""
    yhat = 2.0 * mu * im_w - 1.0
    return max(0.0, 1.0 - yhat * yhat)


def field_color(w: complex, mu: float) -> tuple:
    """(r, g, b) in [0, 1]: hue linear in Re w from red to blue (HLS color
    space, full saturation), base lightness 0.5 scaled by the 1 - yhat^2
    factor so the long sides fade to black."""
    u = min(1.0, max(0.0, w.real))
    hue = HUE_RED + (HUE_BLUE - HUE_RED) * u
    light = 0.5 * lightness_factor(w.imag, mu)
    return colorsys.hls_to_rgb(hue, light, 1.0)


# ---------------------------------------------------------------------------
# shared SVG plumbing


def _svg_transform(domain):
    x0, x1, y0, y1 = domain.bounding_box
    span = max(x1 - x0, y1 - y0)
    pad = SVG_PAD * span
    scale = SVG_SIZE / (span + 2 * pad)

    def to_px(z):
        z = np.asarray(z, dtype=complex)
        return ((z.real - x0 + pad) * scale,
                (y1 - z.imag + pad) * scale)  # y flips: SVG is top-down

    width = (x1 - x0 + 2 * pad) * scale
    height = (y1 - y0 + 2 * pad) * scale
    return to_px, width, height


def _path_d(xs, ys, closed=False):
    parts = ["M " + COORD_FMT % xs[0] + " " + COORD_FMT % ys[0]]
    parts.extend("L " + COORD_FMT % x + " " + COORD_FMT % y
                 for x, y in zip(xs[1:], ys[1:]))
    if closed:
        parts.append("Z")
    return " ".join(parts)


def _boundary_path(domain, to_px, stroke):
    t = np.linspace(0.0, 1.0, CURVE_SAMPLES, endpoint=False)
    paths = []
    for chain in domain.chains:
        pts = np.concatenate([arc.point(t) for arc in chain])
        xs, ys = to_px(pts)
        paths.append(f'<path d="{_path_d(xs, ys, closed=True)}" fill="none" '
                     f'stroke="{stroke}" stroke-width="1.5"/>')
    return paths


def _canonical_curves(cmap: ConformalMap, spec: RenderSpec):
    """Canonical-grid curves (lists of w points) to pull back into the domain."""
    s = np.linspace(0.0, 1.0, spec.samples)
    curves = []
    if cmap.target == "disk":
        for k in range(1, spec.n_radial + 1):
            r = k / (spec.n_radial + 1.0)
            curves.append(r * np.exp(2j * np.pi * s))
        for k in range(spec.n_angular):
            ang = 2.0 * np.pi * k / spec.n_angular
            curves.append((0.02 + 0.96 * s) * np.exp(1j * ang))
    elif cmap.target == "annulus":
        R = cmap.modulus
        for k in range(1, spec.n_radial + 1):
            r = np.exp(np.log(R) * k / (spec.n_radial + 1.0))
            curves.append(r * np.exp(2j * np.pi * s))
        for k in range(spec.n_angular):
            ang = 2.0 * np.pi * k / spec.n_angular
            r = np.exp(np.log(R) * (0.02 + 0.96 * s))
            curves.append(r * np.exp(1j * ang))
    else:  # rectangle [0, 1] x [0, 1/mu]
        h = 1.0 / cmap.modulus
        inset = 0.02
        for k in range(1, spec.n_radial + 1):
            x = k / (spec.n_radial + 1.0)
            curves.append(x + 1j * h * (inset + (1 - 2 * inset) * s))
        for k in range(1, spec.n_angular + 1):
            y = h * k / (spec.n_angular + 1.0)
            curves.append((inset + (1 - 2 * inset) * s) + 1j * y)
    return curves


def render_grid_svg(cmap: ConformalMap, spec: RenderSpec | None = None) -> str:
    """Preimage of the canonical coordinate grid, as a standalone SVG string.

    Emits one <path> per grid curve plus one per boundary chain; curves whose
    inversion fails are truncated at the failure with an SVG comment noting
    the drop, so a partial render is still well formed.
    """
    spec = spec or RenderSpec()
    if spec.n_radial < 2 or spec.n_angular < 2:
        raise RenderError(f"grid counts must be at least 2, "
                          f"got {spec.n_radial}x{spec.n_angular}")
    to_px, width, height = _svg_transform(cmap.domain)
    body = []
    for curve in _canonical_curves(cmap, spec):
        try:
            z = invert_map(cmap, curve)
        except Exception:
            # retry pointwise, keeping the longest invertible prefix
            kept = []
            for w in curve:
                try:
                    kept.append(complex(invert_map(cmap, [w])[0]))
                except Exception:
                    break
            if len(kept) < 2:
                body.append("<!-- grid curve dropped: inversion failed -->")
                continue
            z = np.array(kept)
            body.append("<!-- grid curve truncated: inversion failed -->")
        xs, ys = to_px(z)
        body.append(f'<path d="{_path_d(xs, ys)}" fill="none" '
                    f'stroke="{spec.stroke}" stroke-width="0.8"/>')
    body.extend(_boundary_path(cmap.domain, to_px, spec.boundary_stroke))
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{COORD_FMT % width}" height="{COORD_FMT % height}" '
            f'viewBox="0 0 {COORD_FMT % width} {COORD_FMT % height}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def render_field_svg(cmap: ConformalMap, resolution: int = 96) -> str:
    """Potential-field coloring of a quadrilateral, as an SVG of filled cells.

    Each interior lattice cell is colored by the canonical image of its
    center: hue tracks the potential Re w, lightness fades toward the
    insulated sides.  Only rectangle-target maps carry a potential.
    """
    if cmap.target != "rectangle":
        raise WrongTarget(f"field rendering needs a rectangle map, got {cmap.target!r}")
    from .geometry import inside_mask

    to_px, width, height = _svg_transform(cmap.domain)
    x0, x1, y0, y1 = cmap.domain.bounding_box
    xs = np.linspace(x0, x1, resolution + 1)
    ys = np.linspace(y0, y1, resolution + 1)
    cx = 0.5 * (xs[:-1] + xs[1:])
    cy = 0.5 * (ys[:-1] + ys[1:])
    X, Y = np.meshgrid(cx, cy)
    centers = (X + 1j * Y).ravel()
    mask = inside_mask(cmap.domain, centers,
                       margin=1e-6 * cmap.domain.diameter)
    w = np.full(centers.size, np.nan + 0j)
    w[mask], _ = _raw_eval(cmap, centers[mask])

    px_w = (xs[1] - xs[0]) * SVG_SIZE / ((x1 - x0) * (1 + 2 * SVG_PAD))
    body = []
    for idx in np.flatnonzero(mask):
        r, g, b = field_color(w[idx], cmap.modulus)
        cxp, cyp = to_px(centers[idx])
        fill = "#%02x%02x%02x" % (round(255 * r), round(255 * g), round(255 * b))
        body.append(f'<rect x="{COORD_FMT % (cxp - px_w / 2)}" '
                    f'y="{COORD_FMT % (cyp - px_w / 2)}" '
                    f'width="{COORD_FMT % px_w}" height="{COORD_FMT % px_w}" '
                    f'fill="{fill}"/>')
    body.extend(_boundary_path(cmap.domain, to_px, "#000000"))
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{COORD_FMT % width}" height="{COORD_FMT % height}" '
            f'viewBox="0 0 {COORD_FMT % width} {COORD_FMT % height}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def save_figure_png(cmap: ConformalMap, path: str,
                    spec: RenderSpec | None = None) -> None:
    """Matplotlib companion figure: pulled-back grid over the region outline."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    spec = spec or RenderSpec()
    fig, ax = plt.subplots(figsize=(6, 6))
    for curve in _canonical_curves(cmap, spec):
        try:
            z = invert_map(cmap, curve)
        except Exception:
            continue
        ax.plot(z.real, z.imag, color=spec.stroke, lw=0.7)
    t = np.linspace(0.0, 1.0, CURVE_SAMPLES)
    for chain in cmap.domain.chains:
        pts = np.concatenate([arc.point(t) for arc in chain])
        ax.plot(pts.real, pts.imag, color="black", lw=1.4)
    ax.set_aspect("equal")
    ax.set_axis_off()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
