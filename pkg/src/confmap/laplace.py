"""Regularized least-squares Laplace solves over an analytic basis.

The Dirichlet problem (and the mixed Dirichlet-Neumann problem for
quadrilaterals) is discretized as one real least-squares system: complex
coefficients split into real pairs, columns equilibrated, directions with
tiny singular values truncated.  The harmonic conjugate comes for free as
the imaginary part of the fitted analytic function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .basis import BasisSet, build_basis, evaluate_basis
from .errors import NoQuadMarking, RankCollapse, TolUnreachable, Underdetermined
from .geometry import BoundarySampling, DomainSpec, sample_boundary

RCOND = 1e-14            # relative singular-value truncation threshold
OVERSAMPLING = 3         # samples >= OVERSAMPLING x real unknowns
VERIFY_FACTOR = 4        # verification grid density multiplier
DEFAULT_MAX_DOF = 2000


@dataclass(frozen=True)
class ErrorReport:
    max_residual: float
    rms_residual: float
    verification_grid_size: int
    fitted_dof: int


@dataclass(frozen=True)
class AnalyticModel:
    """g = u + iv as coefficients over a BasisSet, with Im g(z_c) = 0."""

    basis: BasisSet
    coeffs: np.ndarray
    side_constants: tuple = ()
    residual: ErrorReport | None = None
    kind: str = "dirichlet"          # "dirichlet" | "annulus" | "mixed"
    fit_points_per_arc: int = 0
    cluster: bool = False
    side_values: tuple = ()          # ((side, value), ...) for mixed solves
    neumann_data: tuple = ()         # ((side, nu), ...) inhomogeneous Neumann

    def g(self, points) -> np.ndarray:
        V, _ = evaluate_basis(self.basis, points)
        return V @ self.coeffs

    def dg(self, points) -> np.ndarray:
        _, dV = evaluate_basis(self.basis, points)
        return dV @ self.coeffs

    def u(self, points) -> np.ndarray:
        return self.g(points).real

    def v(self, points) -> np.ndarray:
        return self.g(points).imag


def _unknown_layout(basis: BasisSet):
    """Column layout: (term index, part) with part 0 = real, 1 = imag.

    The constant monomial carries a real coefficient only; the log term is
    not an unknown at all (its real coefficient is pinned to the winding).
    """
    layout = []
    for j, term in enumerate(basis.terms):
        if term.variant == "log":
            continue
        layout.append((j, 0))
        if not (term.variant == "monomial" and term.power == 0):
            layout.append((j, 1))
    return layout


def _re_block(V, layout):
    cols = [V[:, j].real if p == 0 else -V[:, j].imag for j, p in layout]
    return np.stack(cols, axis=1)


def _im_block(V, layout):
    cols = [V[:, j].imag if p == 0 else V[:, j].real for j, p in layout]
    return np.stack(cols, axis=1)


def _assemble_coeffs(basis: BasisSet, layout, x) -> np.ndarray:
    coeffs = np.zeros(basis.n_terms, dtype=complex)
    for col, (j, p) in enumerate(layout):
        coeffs[j] += x[col] * (1j if p == 1 else 1.0)
    return coeffs


def _normalize(basis: BasisSet, coeffs, side_constants, shift_sides: bool):
    """Shift the free imaginary constant so that Im g(z_c) = 0 exactly.

    Stream-function side constants (Im-type) shift along with it; the annulus
    level constant (Re-type) does not.
    """
    V, _ = evaluate_basis(basis, [basis.center])
    shift = float((V @ coeffs).imag[0])
    const_idx = next(j for j, t in enumerate(basis.terms)
                     if t.variant == "monomial" and t.power == 0)
    coeffs = coeffs.copy()
    coeffs[const_idx] -= 1j * shift
    if shift_sides:
        side_constants = tuple(c - shift for c in side_constants)
    return coeffs, side_constants



def _row_weights(sampling):
    """Least-squares row weights: quadrature weights floored at their mean.

    Raw quadrature weights decay exponentially toward corners on clustered
    grids and drown exactly the rows that pin the singular behavior; the
    floor restores sup-norm accuracy there.
    """
    w = sampling.weights
    return np.sqrt(np.maximum(w, w.mean()))


def _lstsq(A, rhs, n_extra):
    """Column-equilibrated truncated-SVD least squares.

    The last n_extra columns (levels / side constants) are equilibrated too;
    zero columns are left untouched rather than dropped.
    """
    norms = np.linalg.norm(A, axis=0)
    if np.all(norms == 0.0):
        raise RankCollapse("design matrix is identically zero")
    safe = np.where(norms > 0.0, norms, 1.0)
    x, _, rank, _ = np.linalg.lstsq(A / safe, rhs, rcond=RCOND)
    if rank == 0:
        raise RankCollapse("all directions truncated by regularization")
    return x / safe


def solve_dirichlet(domain: DomainSpec, data, basis: BasisSet,
                    sampling: BoundarySampling) -> AnalyticModel:
    """Fit Re g = h on the sampled boundary, normalized by Im g(z_c) = 0.

    For an annulus basis, h applies to the hole boundary directly while the
    outer boundary satisfies Re g = h + s for an extra unknown level s
    (returned in side_constants); the conjugate period around the hole is
    fixed by pinning the real log-term coefficient to the target winding (1),
    which moves its contribution to the right-hand side.
    """
    layout = _unknown_layout(basis)
    annulus = basis.purpose == "annulus"
    n_extra = 1 if annulus else 0
    n_unknowns = len(layout) + n_extra
    n_nodes = sampling.nodes.size
    if n_nodes < OVERSAMPLING * n_unknowns:
        raise Underdetermined(
            f"{n_nodes} samples for {n_unknowns} real unknowns (need >= {OVERSAMPLING}x)")

    h = np.asarray(data(sampling.nodes), dtype=float)
    V, _ = evaluate_basis(basis, sampling.nodes)
    A = _re_block(V, layout)
    w = _row_weights(sampling)
    rows = A * w[:, None]
    rhs = h.copy()

    if annulus:
        rhs = rhs - np.log(np.abs(sampling.nodes - basis.hole_center))
        outer_idx = sampling.chain_slice(0)
        level_col = np.zeros(n_nodes)
        level_col[outer_idx] = -1.0
        rows = np.column_stack([rows, level_col * w])
    rhs = rhs * w

    x = _lstsq(rows, rhs, n_extra)
    side = (float(x[-1]),) if annulus else ()
    coeffs = _assemble_coeffs(basis, layout, x[:len(layout)])
    if annulus:
        log_idx = next(j for j, t in enumerate(basis.terms) if t.variant == "log")
        coeffs[log_idx] = 1.0
    coeffs, side = _normalize(basis, coeffs, side, shift_sides=False)

    ppa = max(r[3] - r[2] for r in sampling.arc_ranges)
    model = AnalyticModel(basis, coeffs, side, None,
                          "annulus" if annulus else "dirichlet",
                          ppa, sampling.cluster)
    report = verify_residual(model, domain, data)
    return replace(model, residual=report)


def _mixed_rows(domain, basis, sampling, side_values, neumann_data,
                layout, n_unknowns):
    V, _ = evaluate_basis(basis, sampling.nodes)
    Re = _re_block(V, layout)
    Im = _im_block(V, layout)
    w = _row_weights(sampling)
    dir_map = dict(side_values)
    nu_map = dict(neumann_data)
    neumann_sides = [s for s in range(4) if s not in dir_map]
    rows = np.zeros((sampling.nodes.size, n_unknowns))
    rhs = np.zeros(sampling.nodes.size)
    for (chain, arc, lo, hi) in sampling.arc_ranges:
        side = domain.quad_side_of_arc(arc)
        if side in dir_map:
            rows[lo:hi, :len(layout)] = Re[lo:hi]
            rhs[lo:hi] = dir_map[side]
        else:
            k = neumann_sides.index(side)
            rows[lo:hi, :len(layout)] = Im[lo:hi]
            rows[lo:hi, len(layout) + k] = -1.0
            if side in nu_map:
                rhs[lo:hi] = np.asarray(nu_map[side](sampling.nodes[lo:hi]),
                                        dtype=float)
    return rows * w[:, None], rhs * w, neumann_sides


def solve_mixed(domain: DomainSpec, side_values=None, tol: float = 1e-9,
                max_dof: int = DEFAULT_MAX_DOF, neumann_data=None) -> AnalyticModel:
    """Mixed Dirichlet-Neumann solve on a quadrilateral, with degree escalation.

    side_values maps side index (side k runs from quad vertex k to k+1) to a
    Dirichlet value; remaining sides get Im g = c_k for unknown per-side
    constants.  Default electrodes: side 0 at 0, side 2 at 1.  For that
    opposite-side pattern the quadrilateral modulus is 1/(c_max - c_min).

    neumann_data optionally maps a Neumann side to a real function nu(z);
    the condition there becomes Im g = c_k + nu(z), which lets a caller
    subtract a known analytic part from the problem.
    """
    if domain.quad_vertices is None:
        raise NoQuadMarking("solve_mixed requires a quadrilateral (quad_vertices)")
    if side_values is None:
        side_values = {0: 0.0, 2: 1.0}
    side_values = tuple(sorted((int(k), float(v)) for k, v in side_values.items()))
    neumann_data = tuple(sorted((neumann_data or {}).items()))

    best = None
    for degree, n_poles in _schedule(domain, max_dof):
        basis = build_basis(domain, "quad", degree, n_poles)
        layout = _unknown_layout(basis)
        n_extra = 4 - len(side_values)
        n_unknowns = len(layout) + n_extra
        sampling = _fit_sampling(domain, n_unknowns)
        rows, rhs, neumann_sides = _mixed_rows(
            domain, basis, sampling, side_values, neumann_data,
            layout, n_unknowns)
        if rows.shape[0] < OVERSAMPLING * n_unknowns:
            raise Underdetermined("too few samples for mixed solve")
        x = _lstsq(rows, rhs, n_extra)
        side = tuple(float(c) for c in x[len(layout):])
        coeffs = _assemble_coeffs(basis, layout, x[:len(layout)])
        coeffs, side = _normalize(basis, coeffs, side, shift_sides=True)
        ppa = max(r[3] - r[2] for r in sampling.arc_ranges)
        model = AnalyticModel(basis, coeffs, side, None, "mixed",
                              ppa, sampling.cluster, side_values, neumann_data)
        model = replace(model, residual=verify_residual(model, domain, None))
        if best is None or model.residual.max_residual < best.residual.max_residual:
            best = model
        if best.residual.max_residual < tol:
            return best
    exc = TolUnreachable(
        f"mixed solve reached {best.residual.max_residual:.3g} (target {tol:.3g}) "
        f"within the {max_dof}-DOF budget")
    exc.best = best
    raise exc


def verify_residual(model: AnalyticModel, domain: DomainSpec, data) -> ErrorReport:
    """Boundary residual certificate on a fresh grid denser than the fit grid."""
    ppa = VERIFY_FACTOR * max(model.fit_points_per_arc, 1) + 1
    sampling = sample_boundary(domain, ppa, model.cluster)
    g = model.g(sampling.nodes)
    if model.kind == "mixed":
        dir_map = dict(model.side_values)
        nu_map = dict(model.neumann_data)
        neumann_sides = [s for s in range(4) if s not in dir_map]
        res = np.zeros(sampling.nodes.size)
        for (chain, arc, lo, hi) in sampling.arc_ranges:
            side = domain.quad_side_of_arc(arc)
            if side in dir_map:
                res[lo:hi] = np.abs(g[lo:hi].real - dir_map[side])
            else:
                c = model.side_constants[neumann_sides.index(side)]
                nu = (np.asarray(nu_map[side](sampling.nodes[lo:hi]), dtype=float)
                      if side in nu_map else 0.0)
                res[lo:hi] = np.abs(g[lo:hi].imag - c - nu)
    else:
        h = np.asarray(data(sampling.nodes), dtype=float)
        res = np.abs(g.real - h)
        if model.kind == "annulus":
            outer = sampling.chain_slice(0)
            res[outer] = np.abs(g[outer].real - h[outer] - model.side_constants[0])
    layout_n = len(_unknown_layout(model.basis)) + len(model.side_constants)
    return ErrorReport(
        max_residual=float(res.max()),
        rms_residual=float(np.sqrt(np.mean(res ** 2))),
        verification_grid_size=int(sampling.nodes.size),
        fitted_dof=layout_n,
    )


def _has_specials(domain: DomainSpec) -> bool:
    return bool(domain.corners) or domain.quad_vertices is not None


def _schedule(domain: DomainSpec, max_dof: int):
    """Doubling degree/pole escalation, capped by the real-DOF budget."""
    n_special = len({(c.chain, c.arcs[1]) for c in domain.corners})
    if domain.quad_vertices is not None:
        corner_junctions = {c.arcs[1] for c in domain.corners if c.chain == 0}
        n_special += len([j for j in domain.quad_vertices if j not in corner_junctions])
    if n_special == 0:
        steps = [(n, 0) for n in (8, 16, 32, 64, 128, 256)]
    else:
        steps = [(8, 4), (16, 8), (24, 12), (32, 16), (48, 24), (64, 32),
                 (96, 48), (128, 64)]
    out = []
    for degree, n_poles in steps:
        dof = 2 * (degree + 1) + 2 * n_poles * n_special
        if domain.holes:
            dof += 2 * degree + 1  # laurent + log terms
        if dof <= max_dof:
            out.append((degree, n_poles))
    if not out:
        out = [steps[0]]
    return out


def _fit_sampling(domain: DomainSpec, n_unknowns: int) -> BoundarySampling:
    n_arcs = sum(len(c) for c in domain.chains)
    ppa = max(8, math.ceil(OVERSAMPLING * n_unknowns / n_arcs) + 2)
    return sample_boundary(domain, ppa, cluster=_has_specials(domain))


def solve_dirichlet_adaptive(domain: DomainSpec, data, purpose: str,
                             tol: float = 1e-10, max_dof: int = DEFAULT_MAX_DOF,
                             center: complex | None = None) -> AnalyticModel:
    """Escalate degree and pole counts (doubling) until the certified
    boundary residual drops below tol or the DOF budget is exhausted."""
    best = None
    for degree, n_poles in _schedule(domain, max_dof):
        basis = build_basis(domain, purpose, degree, n_poles, center=center)
        n_unknowns = basis.n_real_unknowns + (1 if purpose == "annulus" else 0)
        sampling = _fit_sampling(domain, n_unknowns)
        model = solve_dirichlet(domain, data, basis, sampling)
        if best is None or model.residual.max_residual < best.residual.max_residual:
            best = model
        if best.residual.max_residual < tol:
            return best
    exc = TolUnreachable(
        f"residual {best.residual.max_residual:.3g} above target {tol:.3g} "
        f"within the {max_dof}-DOF budget")
    exc.best = best
    raise exc
