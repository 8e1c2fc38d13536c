"""Conformal maps onto the disk, annulus, and rectangle.

A disk map is assembled as f(z) = (z - z0) e^{g(z)} from the Dirichlet solve
with data -log|z - z0|; an annulus map as a rotated exp(g) with the outer
level of Re g giving log R; a rectangle map directly as the shifted analytic
representative of the mixed solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CenterOutside,
    EvalAtCenter,
    NewtonDiverged,
    NoQuadMarking,
    NotSimplyConnected,
    PointOutsideDomain,
    TargetOutsideCanonical,
    TolUnreachable,
    WrongConnectivity,
)
from .geometry import (
    DomainSpec,
    centroid,
    contains,
    inside_mask,
    interior_point,
    sample_boundary,
)
from .laplace import (
    DEFAULT_MAX_DOF,
    AnalyticModel,
    solve_dirichlet_adaptive,
    solve_mixed,
)

NEWTON_TOL_FACTOR = 1e-10   # x diameter; inversion convergence target
NEWTON_MAX_ITER = 50
NEWTON_RESEEDS = 3
SEED_GRID = 64


@dataclass(frozen=True)
class ConformalMap:
    target: str                  # "disk" | "annulus" | "rectangle"
    domain: DomainSpec
    center: complex              # preimage of 0 for disk maps; basis center otherwise
    model: AnalyticModel
    modulus: float | None = None  # R > 1 (annulus) or mu > 0 (rectangle)
    rotation: complex = 1.0 + 0j  # unimodular factor (annulus normalization)
    offset: complex = 0j          # additive shift (rectangle: -i c_min)

    @property
    def max_residual(self) -> float:
        return self.model.residual.max_residual

    @cached_property
    def _seeds(self):
        """(z, f(z)) lattice clipped to the domain, for Newton seeding."""
        x0, x1, y0, y1 = self.domain.bounding_box
        xs = np.linspace(x0, x1, SEED_GRID + 2)[1:-1]
        ys = np.linspace(y0, y1, SEED_GRID + 2)[1:-1]
        X, Y = np.meshgrid(xs, ys)
        z = (X + 1j * Y).ravel()
        mask = inside_mask(self.domain, z, margin=1e-3 * self.domain.diameter)
        z = z[mask]
        f, _ = _raw_eval(self, z)
        return z, f

    def __call__(self, points):
        return evaluate_map(self, points)[0]


def _raw_eval(cmap: ConformalMap, z):
    """f and f' without the interior check (used on boundary and by Newton)."""
    z = np.asarray(z, dtype=complex).ravel()
    g = cmap.model.g(z)
    dg = cmap.model.dg(z)
    if cmap.target == "disk":
        eg = np.exp(g)
        f = (z - cmap.center) * eg
        df = eg * (1.0 + (z - cmap.center) * dg)
    elif cmap.target == "annulus":
        eg = np.exp(g)
        f = cmap.rotation * eg
        df = cmap.rotation * eg * dg
    else:
        f = g + cmap.offset
        df = dg
    return f, df


def _default_center(domain: DomainSpec) -> complex:
    z0 = centroid(domain)
    if contains(domain, z0) != "inside":
        z0 = interior_point(domain)
    return z0


def disk_map(domain: DomainSpec, center: complex | None = None,
             tol: float = 1e-10, max_dof: int = DEFAULT_MAX_DOF,
             best_effort: bool = False) -> ConformalMap:
    """Conformal map onto the unit disk with f(z0) = 0 and f'(z0) > 0."""
    if domain.holes:
        raise NotSimplyConnected("disk map requires a simply connected domain")
    z0 = _default_center(domain) if center is None else complex(center)
    if contains(domain, z0) != "inside":
        raise CenterOutside(f"map center {z0} is not interior")

    def data(z):
        return -np.log(np.abs(np.asarray(z, dtype=complex) - z0))

    try:
        model = solve_dirichlet_adaptive(domain, data, "disk", tol, max_dof, center=z0)
    except TolUnreachable as exc:
        if not best_effort:
            raise
        model = exc.best
    return ConformalMap("disk", domain, z0, model)


def green_function(cmap: ConformalMap, z) -> float:
    """G(z) = log|f(z)|: negative inside, 0 on the boundary, -inf at the center."""
    if cmap.target != "disk":
        raise WrongConnectivity("Green's function is defined for disk maps here")
    z = complex(z)
    if abs(z - cmap.center) < 1e-14 * cmap.domain.diameter:
        raise EvalAtCenter("Green's function diverges at the map center")
    f, _ = _raw_eval(cmap, [z])
    return float(np.log(np.abs(f[0])))


def annulus_map(domain: DomainSpec, tol: float = 1e-10,
                max_dof: int = DEFAULT_MAX_DOF, best_effort: bool = False) -> ConformalMap:
    """Map onto the circular annulus 1 < |w| < R; R is the conformal modulus."""
    if len(domain.holes) != 1:
        raise WrongConnectivity("annulus map requires exactly one hole")

    def data(z):
        return np.zeros(np.asarray(z).size)

    try:
        model = solve_dirichlet_adaptive(domain, data, "annulus", tol, max_dof)
    except TolUnreachable as exc:
        if not best_effort:
            raise
        model = exc.best
    R = math.exp(model.side_constants[0])
    cmap = ConformalMap("annulus", domain, model.basis.center, model, R)
    # rotation normalization: f > 0 at the first inner-boundary node
    sampling = sample_boundary(domain, max(model.fit_points_per_arc, 4), model.cluster)
    anchor = sampling.nodes[sampling.chain_slice(1)][0]
    f_anchor, _ = _raw_eval(cmap, [anchor])
    rho = np.conj(f_anchor[0]) / abs(f_anchor[0])
    return ConformalMap("annulus", domain, model.basis.center, model, R, complex(rho))


def rectangle_map(domain: DomainSpec, tol: float = 1e-9,
                  max_dof: int = DEFAULT_MAX_DOF, best_effort: bool = False) -> ConformalMap:
    """Map a quadrilateral onto [0,1] x [0, 1/mu]; mu is the conformal modulus."""
    if domain.quad_vertices is None:
        raise NoQuadMarking("rectangle map requires quad vertices")
    try:
        model = solve_mixed(domain, {0: 0.0, 2: 1.0}, tol, max_dof)
    except TolUnreachable as exc:
        if not best_effort:
            raise
        model = exc.best
    c_lo, c_hi = min(model.side_constants), max(model.side_constants)
    mu = 1.0 / (c_hi - c_lo)
    return ConformalMap("rectangle", domain, model.basis.center, model, mu,
                        offset=-1j * c_lo)


def evaluate_map(cmap: ConformalMap, points):
    """f(z) and f'(z) at interior or boundary points."""
    z = np.asarray(points, dtype=complex).ravel()
    for p in z:
        if contains(cmap.domain, p) == "outside":
            raise PointOutsideDomain(f"{complex(p)} lies outside the domain")
    return _raw_eval(cmap, z)


def _check_canonical(cmap: ConformalMap, w: np.ndarray):
    if cmap.target == "disk":
        bad = np.abs(w) >= 1.0
    elif cmap.target == "annulus":
        bad = (np.abs(w) <= 1.0) | (np.abs(w) >= cmap.modulus)
    else:
        h = 1.0 / cmap.modulus
        bad = (w.real <= 0) | (w.real >= 1) | (w.imag <= 0) | (w.imag >= h)
    if np.any(bad):
        raise TargetOutsideCanonical(
            f"{int(bad.sum())} target(s) outside the canonical {cmap.target}")


def invert_map(cmap: ConformalMap, targets):
    """Newton inversion of f, seeded from a precomputed interior lattice."""
    w = np.asarray(targets, dtype=complex).ravel()
    _check_canonical(cmap, w)
    seeds_z, seeds_f = cmap._seeds
    tol = NEWTON_TOL_FACTOR * cmap.domain.diameter

    order = np.argsort(np.abs(seeds_f[None, :] - w[:, None]), axis=1)
    z = seeds_z[order[:, 0]].astype(complex)
    attempt = np.zeros(w.size, dtype=int)

    for _ in range(NEWTON_MAX_ITER * (NEWTON_RESEEDS + 1)):
        f, df = _raw_eval(cmap, z)
        res = np.abs(f - w)
        act = res >= tol
        if not act.any():
            break
        step = np.zeros_like(z)
        step[act] = ((f - w) / df)[act]
        z_new = z - step
        f2, _ = _raw_eval(cmap, z_new)
        res2 = np.abs(f2 - w)
        # damping: halve the step while the residual grows
        for _ in range(20):
            worse = act & (res2 > res)
            if not worse.any():
                break
            step[worse] *= 0.5
            z_new = z - step
            f2, _ = _raw_eval(cmap, z_new)
            res2 = np.abs(f2 - w)
        stuck = act & (res2 >= res)
        for i in np.flatnonzero(stuck):
            attempt[i] += 1
            if attempt[i] > NEWTON_RESEEDS:
                raise NewtonDiverged(f"inversion failed for target {w[i]}")
            z_new[i] = seeds_z[order[i, min(attempt[i], order.shape[1] - 1)]]
        z = z_new

    f, _ = _raw_eval(cmap, z)
    if np.any(np.abs(f - w) > tol * 10):
        raise NewtonDiverged("inversion did not reach the requested tolerance")
    return z
