"""Analytic basis sets: scaled monomials, corner-clustered poles, Laurent/log terms.

The real parts of these functions span the space in which harmonic boundary
data is fitted.  Pole clustering follows the tapered-exponential rule
delta_j = d_c * exp(-4 (sqrt(N) - sqrt(j))), j = 1..N, along the exterior
angle bisector of each corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CenterOutside, EvalAtSingularity, PurposeMismatch
from .geometry import DomainSpec, contains

TAPER = 4.0  # clustering taper exponent


@dataclass(frozen=True)
class BasisTerm:
    variant: str        # "monomial" | "pole" | "laurent" | "log"
    power: int = 0      # monomial k >= 0; laurent k >= 1
    center: complex = 0j  # monomial/laurent/log expansion point; pole location
    scale: float = 1.0


@dataclass(frozen=True)
class BasisSet:
    terms: tuple
    center: complex     # z_c, interior normalization point
    purpose: str        # "disk" | "annulus" | "quad"
    hole_center: complex = 0j

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def n_real_unknowns(self) -> int:
        """Real degrees of freedom: 2 per term, minus the constrained-real ones."""
        fixed = sum(1 for t in self.terms if t.variant == "log" or
                    (t.variant == "monomial" and t.power == 0))
        return 2 * len(self.terms) - fixed

    def counts(self) -> dict:
        out = {"monomial": 0, "pole": 0, "laurent": 0, "log": 0}
        for t in self.terms:
            out[t.variant] += 1
        return out


def cluster_distances(d_c: float, n_poles: int) -> np.ndarray:
    j = np.arange(1, n_poles + 1, dtype=float)
    return d_c * np.exp(-TAPER * (np.sqrt(float(n_poles)) - np.sqrt(j)))


def _corner_pole_sites(domain: DomainSpec, n_poles: int):
    """Pole locations outside the domain for every corner (and quad vertex)."""
    sites = []
    specials = []
    for c in domain.corners:
        chain = domain.chains[c.chain]
        a_in, a_out = chain[c.arcs[0]], chain[c.arcs[1]]
        specials.append((c.location, a_in, a_out, c.interior_angle))
    if domain.quad_vertices is not None:
        corner_locs = {c.location for c in domain.corners}
        n = len(domain.outer)
        for j in domain.quad_vertices:
            loc = domain.outer[j].start
            if any(abs(loc - cl) < 1e-12 * domain.diameter for cl in corner_locs):
                continue  # already a corner; poles placed there anyway
            a_in, a_out = domain.outer[(j - 1) % n], domain.outer[j]
            tin = complex(a_in.dpoint(1.0))
            tout = complex(a_out.dpoint(0.0))
            angle = math.pi - float(np.angle(tout / tin))
            specials.append((loc, a_in, a_out, angle))

    for loc, a_in, a_out, angle in specials:
        tout = complex(a_out.dpoint(0.0))
        d2 = tout / abs(tout)
        bisector_in = d2 * np.exp(0.5j * angle)
        direction = -bisector_in
        d_c = min(1.0, a_in.length(), a_out.length())
        deltas = cluster_distances(d_c, n_poles)
        poles = loc + deltas * direction
        # nonconvex geometry can still swallow the farthest poles; shrink d_c
        # ("boundary" is fine: the deepest poles sit below the classification
        # band but lie on the exterior bisector by construction)
        for _ in range(8):
            if all(contains(domain, p) != "inside" for p in poles):
                break
            d_c *= 0.5
            deltas = cluster_distances(d_c, n_poles)
            poles = loc + deltas * direction
        else:
            raise PurposeMismatch(f"could not place exterior poles at corner {loc}")
        sites.append((loc, poles))
    return sites


def build_basis(domain: DomainSpec, purpose: str, degree: int,
                poles_per_corner: int = 0, center: complex | None = None) -> BasisSet:
    """Assemble the ordered basis for a given purpose.

    Monomials ((z - z_c)/s)^k for k = 0..degree with s = diameter/2, then
    poles_per_corner poles per corner (and per quad vertex when purpose is
    "quad"), then, for an annulus, Laurent powers 1..degree and one log term
    about the hole center.
    """
    if purpose not in ("disk", "annulus", "quad"):
        raise PurposeMismatch(f"unknown purpose {purpose!r}")
    if purpose == "annulus" and len(domain.holes) != 1:
        raise PurposeMismatch("annulus purpose requires exactly one hole")
    if purpose in ("disk", "quad") and domain.holes:
        raise PurposeMismatch(f"purpose {purpose!r} requires a simply connected domain")

    if center is None:
        from .geometry import centroid, interior_point
        if purpose == "annulus":
            center = interior_point(domain)
        else:
            center = centroid(domain)
            if contains(domain, center) != "inside":
                center = interior_point(domain)
    center = complex(center)
    if contains(domain, center) != "inside":
        raise CenterOutside(f"basis center {center} is not interior")

    s = domain.diameter / 2.0
    terms = [BasisTerm("monomial", k, center, s) for k in range(degree + 1)]

    if poles_per_corner > 0:
        for _, poles in _corner_pole_sites(domain, poles_per_corner):
            terms.extend(BasisTerm("pole", 0, complex(p)) for p in poles)

    hole_center = 0j
    if purpose == "annulus":
        t = np.linspace(0.0, 1.0, 128, endpoint=False)
        hole_pts = np.concatenate([arc.point(t) for arc in domain.holes[0]])
        hole_center = complex(hole_pts.mean())
        s_h = float(np.abs(hole_pts - hole_center).mean())
        terms.extend(BasisTerm("laurent", k, hole_center, s_h)
                     for k in range(1, degree + 1))
        terms.append(BasisTerm("log", 0, hole_center))

    return BasisSet(tuple(terms), center, purpose, hole_center)


def evaluate_basis(basis: BasisSet, points) -> tuple:
    """Values and derivatives of every term at every point.

    Returns (V, dV) complex arrays of shape (n_points, n_terms).
    """
    z = np.asarray(points, dtype=complex).ravel()
    V = np.empty((z.size, basis.n_terms), dtype=complex)
    dV = np.empty_like(V)
    for j, term in enumerate(basis.terms):
        if term.variant == "monomial":
            w = (z - term.center) / term.scale
            k = term.power
            V[:, j] = w ** k
            dV[:, j] = 0.0 if k == 0 else (k / term.scale) * w ** (k - 1)
        elif term.variant == "pole":
            d = z - term.center
            if np.any(np.abs(d) < 1e-14):
                raise EvalAtSingularity(f"evaluation at pole {term.center}")
            V[:, j] = 1.0 / d
            dV[:, j] = -1.0 / d ** 2
        elif term.variant == "laurent":
            d = z - term.center
            if np.any(np.abs(d) < 1e-14):
                raise EvalAtSingularity(f"evaluation at branch point {term.center}")
            k = term.power
            V[:, j] = (term.scale / d) ** k
            dV[:, j] = -k * term.scale ** k / d ** (k + 1)
        else:  # log
            d = z - term.center
            if np.any(np.abs(d) < 1e-14):
                raise EvalAtSingularity(f"evaluation at branch point {term.center}")
            V[:, j] = np.log(d)
            dV[:, j] = 1.0 / d
    return V, dV
