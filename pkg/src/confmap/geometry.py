"""Planar domains bounded by piecewise-smooth Jordan curves.

A domain is an oriented chain of arcs (lines, circular arcs, closed
trigonometric curves) for the outer boundary, plus at most one hole chain.
Corners are derived from one-sided tangents at arc junctions.  All objects
are immutable; every operation here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    BadQuadMarking,
    GeometryError,
    NotClosed,
    ParseError,
    SelfIntersecting,
    ZeroPoints,
)

CORNER_TOL = 1e-10          # radians; smaller tangent jumps are smooth joins
BOUNDARY_REL_TOL = 1e-12    # x diameter; classify-as-boundary band
VALIDATE_SAMPLES = 61       # per arc for the intersection scan; odd, so
                            # symmetric crossings miss the sample points
DENSE_SAMPLES = 256         # per arc for winding / distance / area work


def _trig_freq(i: int) -> int:
    """Frequency of the i-th trig coefficient: 0, 1, -1, 2, -2, ..."""
    if i == 0:
        return 0
    return (i + 1) // 2 if i % 2 == 1 else -(i // 2)


@dataclass(frozen=True)
class ArcSegment:
    """One boundary piece, parametrized over t in [0, 1].

    kind "line":     z(t) = start + t (end - start)
    kind "circular": z(t) = center + (start - center) e^{i sweep t}
    kind "trig":     z(t) = sum_m coeffs[m] e^{2 pi i freq(m) t}  (closed)
    """

    kind: str
    start: complex
    end: complex
    center: complex = 0j
    sweep: float = 0.0
    coeffs: tuple = ()

    @staticmethod
    def line(a: complex, b: complex) -> "ArcSegment":
        return ArcSegment("line", complex(a), complex(b))

    @staticmethod
    def circular(a: complex, center: complex, sweep: float) -> "ArcSegment":
        a, center = complex(a), complex(center)
        if not (0.0 < abs(sweep) < 2.0 * math.pi):
            raise GeometryError(f"circular sweep must lie in (-2pi, 2pi) \\ {{0}}, got {sweep}")
        b = center + (a - center) * np.exp(1j * sweep)
        return ArcSegment("circular", a, complex(b), center, float(sweep))

    @staticmethod
    def trig(coeffs) -> "ArcSegment":
        cs = tuple(complex(c) for c in coeffs)
        z0 = complex(sum(cs))
        return ArcSegment("trig", z0, z0, coeffs=cs)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "line":
            return self.start + t * (self.end - self.start)
        if self.kind == "circular":
            return self.center + (self.start - self.center) * np.exp(1j * self.sweep * t)
        z = np.zeros_like(t, dtype=complex)
        for i, c in enumerate(self.coeffs):
            z = z + c * np.exp(2j * np.pi * _trig_freq(i) * t)
        return z

    def dpoint(self, t):
        """Derivative dz/dt."""
        t = np.asarray(t, dtype=float)
        if self.kind == "line":
            return np.full_like(t, self.end - self.start, dtype=complex)
        if self.kind == "circular":
            return 1j * self.sweep * (self.start - self.center) * np.exp(1j * self.sweep * t)
        dz = np.zeros_like(t, dtype=complex)
        for i, c in enumerate(self.coeffs):
            f = _trig_freq(i)
            dz = dz + c * (2j * np.pi * f) * np.exp(2j * np.pi * f * t)
        return dz

    def reversed(self) -> "ArcSegment":
        if self.kind == "line":
            return ArcSegment.line(self.end, self.start)
        if self.kind == "circular":
            return ArcSegment("circular", self.end, self.start, self.center, -self.sweep)
        # z(1 - t): coefficient at frequency f moves to frequency -f
        n = len(self.coeffs)
        out = [0j] * n
        for i, c in enumerate(self.coeffs):
            f = -_trig_freq(i)
            j = 0 if f == 0 else (2 * f - 1 if f > 0 else -2 * f)
            if j >= n:
                out.extend([0j] * (j + 1 - n))
                n = j + 1
            out[j] = c
        return ArcSegment.trig(out)

    def transformed(self, a: complex, b: complex) -> "ArcSegment":
        """Image under z -> a z + b (a != 0)."""
        if self.kind == "line":
            return ArcSegment.line(a * self.start + b, a * self.end + b)
        if self.kind == "circular":
            return ArcSegment("circular", a * self.start + b, a * self.end + b,
                              a * self.center + b, self.sweep)
        cs = list(a * np.asarray(self.coeffs, dtype=complex))
        cs[0] += b
        return ArcSegment.trig(cs)

    def length(self) -> float:
        t = (np.arange(DENSE_SAMPLES) + 0.5) / DENSE_SAMPLES
        return float(np.sum(np.abs(self.dpoint(t))) / DENSE_SAMPLES)


@dataclass(frozen=True)
class Corner:
    location: complex
    interior_angle: float
    arcs: tuple          # (incoming arc index, outgoing arc index) within chain
    chain: int = 0       # 0 = outer, 1.. = holes


@dataclass(frozen=True)
class DomainSpec:
    outer: tuple
    holes: tuple
    corners: tuple
    quad_vertices: tuple | None
    diameter: float

    @property
    def chains(self):
        return (self.outer,) + self.holes

    @cached_property
    def _dense(self):
        """Per chain: (points, tangents) sampled densely along the chain."""
        out = []
        for chain in self.chains:
            t = np.arange(DENSE_SAMPLES) / DENSE_SAMPLES
            pts = np.concatenate([arc.point(t) for arc in chain])
            out.append(pts)
        return out

    @cached_property
    def bounding_box(self):
        pts = np.concatenate(self._dense)
        return (pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max())

    def junctions(self):
        """Start point of each outer arc, in order (arc-junction points)."""
        return [arc.start for arc in self.outer]

    def boundary_distance(self, z: complex) -> float:
        return min(
            min(_arc_distance(arc, z) for arc in chain) for chain in self.chains
        )

    def quad_side_of_arc(self, arc_idx: int) -> int:
        """Side index (0..3) of an outer arc, given quad vertex junctions."""
        if self.quad_vertices is None:
            raise BadQuadMarking("domain has no quad vertices")
        n = len(self.outer)
        q = list(self.quad_vertices)
        for side in range(4):
            j0, j1 = q[side], q[(side + 1) % 4]
            span = (j1 - j0) % n or n
            if (arc_idx - j0) % n < span:
                return side
        raise BadQuadMarking(f"arc {arc_idx} not assignable to a side")


@dataclass(frozen=True)
class BoundarySampling:
    nodes: np.ndarray          # complex, ordered by boundary parameter
    tangents: np.ndarray       # unit complex
    weights: np.ndarray        # positive arc weights
    corner_distance: np.ndarray
    arc_ranges: tuple          # (chain, arc, lo, hi) per arc
    cluster: bool = False

    def chain_slice(self, chain: int) -> np.ndarray:
        idx = [np.arange(lo, hi) for (c, a, lo, hi) in self.arc_ranges if c == chain]
        return np.concatenate(idx) if idx else np.array([], dtype=int)


def _arc_distance(arc: ArcSegment, z: complex) -> float:
    """Exact distance for lines/circles; refined sampling for trig arcs."""
    if arc.kind == "line":
        a, b = arc.start, arc.end
        d = b - a
        t = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
        return abs(a + t * d - z)
    if arc.kind == "circular":
        c, r = arc.center, abs(arc.start - arc.center)
        if z == c:
            return r
        th0 = np.angle(arc.start - c)
        dth = (np.angle(z - c) - th0) / arc.sweep
        dth = dth % (2.0 * np.pi / abs(arc.sweep))
        if dth <= 1.0:
            return abs(abs(z - c) - r)
        return min(abs(z - arc.start), abs(z - arc.end))
    t = np.arange(DENSE_SAMPLES + 1) / DENSE_SAMPLES
    d = np.abs(arc.point(t) - z)
    i = int(np.argmin(d))
    lo, hi = max(0.0, t[i] - 1.5 / DENSE_SAMPLES), min(1.0, t[i] + 1.5 / DENSE_SAMPLES)
    best = d[i]

    # distance stationarity: Re[(arc(s) - z) conj(arc'(s))] = 0.  A root
    # find localizes s to machine precision even when the distance itself
    # vanishes, where direct minimization of |arc(s) - z| stalls at ~1e-11.
    def phi(s):
        p = complex(arc.point(s))
        return ((p - z) * np.conj(complex(arc.dpoint(s)))).real

    if phi(lo) * phi(hi) < 0:
        s_star = brentq(phi, lo, hi, xtol=1e-15)
        best = min(best, abs(complex(arc.point(s_star)) - z))
    else:
        res = minimize_scalar(lambda s: abs(complex(arc.point(s)) - z),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-15})
        best = min(best, res.fun)
    return float(best)


def _chain_winding(pts: np.ndarray, z: complex) -> float:
    """Winding number of a closed dense polyline about z."""
    w = pts - z
    rolled = np.roll(w, -1)
    return float(np.sum(np.angle(rolled / w)) / (2.0 * np.pi))


def _chain_signed_area(chain) -> float:
    t = np.arange(DENSE_SAMPLES) / DENSE_SAMPLES
    pts = np.concatenate([arc.point(t) for arc in chain])
    rolled = np.roll(pts, -1)
    return float(0.5 * np.sum(np.conj(pts) * (rolled - pts)).imag)


def _chain_corners(chain, chain_idx: int):
    corners = []
    n = len(chain)
    for k in range(n):
        a_in, a_out = chain[k - 1], chain[k]
        tin = complex(a_in.dpoint(1.0))
        tout = complex(a_out.dpoint(0.0))
        if tin == 0 or tout == 0:
            raise GeometryError("vanishing tangent at an arc junction")
        turn = float(np.angle(tout / tin))
        if abs(turn) <= CORNER_TOL:
            continue
        interior = math.pi - turn
        if not (CORNER_TOL < interior < 2.0 * math.pi - CORNER_TOL):
            raise GeometryError(f"cusp corner (interior angle {interior:.3g}) rejected")
        corners.append(Corner(arc_out_start := a_out.start,
                              interior, ((k - 1) % n, k), chain_idx))
    return corners


def _segments_cross(p: np.ndarray, q: np.ndarray) -> bool:
    """Proper-crossing test between two sampled polylines."""
    a, b = p[:-1], p[1:]
    c, d = q[:-1], q[1:]
    A = a[:, None]
    B = b[:, None]
    C = c[None, :]
    D = d[None, :]

    def cross(u, v):
        return (np.conj(u) * v).imag

    d1 = cross(B - A, C - A)
    d2 = cross(B - A, D - A)
    d3 = cross(D - C, A - C)
    d4 = cross(D - C, B - C)
    hit = ((d1 * d2 < 0) & (d3 * d4 <= 0)) | ((d1 * d2 <= 0) & (d3 * d4 < 0))
    return bool(np.any(hit))


def _validate_no_intersections(domain: DomainSpec):
    chains = domain.chains
    samples = []
    for ci, chain in enumerate(chains):
        t = np.arange(VALIDATE_SAMPLES + 1) / VALIDATE_SAMPLES
        samples.append([(ci, ai, chain[ai].point(t)) for ai in range(len(chain))])
    flat = [s for group in samples for s in group]
    for i in range(len(flat)):
        ci, ai, p = flat[i]
        for j in range(i + 1, len(flat)):
            cj, aj, q = flat[j]
            if ci == cj:
                n = len(chains[ci])
                if (ai - aj) % n in (0, 1) or (aj - ai) % n in (0, 1):
                    continue  # adjacent arcs share an endpoint
            if _segments_cross(p, q):
                raise SelfIntersecting(f"arcs ({ci},{ai}) and ({cj},{aj}) intersect")


def build_domain(outer, holes=(), quad=None) -> DomainSpec:
    """Validate a raw arc description and derive corners, orientation, diameter.

    Chains with the wrong orientation (outer must be counterclockwise, holes
    clockwise) are reversed automatically.
    """
    outer = tuple(outer)
    holes = tuple(tuple(h) for h in holes)
    if len(outer) < 1:
        raise GeometryError("need at least one arc")
    if len(holes) > 1:
        raise GeometryError("at most one hole supported")

    all_pts = np.concatenate([
        arc.point(np.linspace(0, 1, 32)) for chain in (outer,) + holes for arc in chain
    ])
    diameter = float(np.abs(all_pts[:, None] - all_pts[None, :]).max())
    if not np.isfinite(diameter) or diameter <= 0:
        raise GeometryError("degenerate domain")

    # closure of every chain
    for chain in (outer,) + holes:
        for k in range(len(chain)):
            gap = abs(chain[k].end - chain[(k + 1) % len(chain)].start)
            if gap > 1e-12 * diameter:
                raise NotClosed(f"chain gap {gap:.3g} at arc {k}")

    if _chain_signed_area(outer) < 0:
        outer = tuple(arc.reversed() for arc in reversed(outer))
    holes = tuple(
        tuple(arc.reversed() for arc in reversed(h)) if _chain_signed_area(h) > 0 else h
        for h in holes
    )

    corners = []
    for ci, chain in enumerate((outer,) + holes):
        corners.extend(_chain_corners(chain, ci))

    if quad is not None:
        quad = tuple(int(i) for i in quad)
        n = len(outer)
        if len(quad) != 4 or len(set(quad)) != 4 or any(not 0 <= i < n for i in quad):
            raise BadQuadMarking(f"quad vertices {quad} invalid for {n} outer arcs")
        rel = [(i - quad[0]) % n for i in quad]
        if sorted(rel) != rel:
            raise BadQuadMarking("quad vertices not in cyclic order")

    domain = DomainSpec(outer, holes, tuple(corners), quad, diameter)
    _validate_no_intersections(domain)
    return domain


def contains(domain: DomainSpec, z: complex) -> str:
    """Classify a point as "inside", "outside", or "boundary"."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return "outside"
    if domain.boundary_distance(z) <= BOUNDARY_REL_TOL * domain.diameter:
        return "boundary"
    total = sum(_chain_winding(pts, z) for pts in domain._dense)
    return "inside" if round(total) == 1 else "outside"


def corner_list(domain: DomainSpec):
    return list(domain.corners)


def _special_junctions(domain: DomainSpec):
    """Outer/hole junctions that attract clustered sampling: corners and quad vertices."""
    special = {(c.chain, c.arcs[1]) for c in domain.corners}
    if domain.quad_vertices is not None:
        special |= {(0, j) for j in domain.quad_vertices}
    return special


def _cluster_params(n: int) -> np.ndarray:
    """Tapered-exponential parameters in (0, 1), densest near 0.

    Follows exp(-4 (sqrt(n+1) - sqrt(j))) exactly for shallow grids; the
    depth is floored at ~1e-12 so nodes stay resolvable in double precision
    relative to either arc endpoint.
    """
    j = np.arange(1, n + 1, dtype=float)
    span = math.sqrt(n + 1.0) - 1.0
    sigma = min(4.0 * span, 27.6)
    return np.exp(-sigma * (math.sqrt(n + 1.0) - np.sqrt(j)) / max(span, 1e-30))


def sample_boundary(domain: DomainSpec, points_per_arc: int, cluster: bool = False) -> BoundarySampling:
    """Sample nodes, unit tangents and quadrature-style weights along the boundary.

    Without clustering, nodes sit at t = j/n per arc (start junction included
    unless it is a corner, in which case nodes shift to cell midpoints).  With
    clustering, arcs touching a corner or quad vertex get nodes whose spacing
    tapers exponentially toward that junction.
    """
    n = int(points_per_arc)
    n_arcs = sum(len(c) for c in domain.chains)
    if n < 1 or n * n_arcs < 4:
        raise ZeroPoints(f"need at least 4 boundary nodes, got {n} per arc x {n_arcs} arcs")

    special = _special_junctions(domain)
    corner_locs = np.array([c.location for c in domain.corners], dtype=complex)
    if domain.quad_vertices is not None:
        qlocs = np.array([domain.outer[j].start for j in domain.quad_vertices], dtype=complex)
        corner_locs = np.concatenate([corner_locs, qlocs]) if corner_locs.size else qlocs

    nodes, tangents, weights, cdist, ranges = [], [], [], [], []
    pos = 0
    for ci, chain in enumerate(domain.chains):
        nch = len(chain)
        for ai, arc in enumerate(chain):
            start_special = (ci, ai) in special
            end_special = (ci, (ai + 1) % nch) in special
            if cluster and (start_special or end_special):
                # tapered nodes toward each special junction, plus uniform
                # nodes so the smooth mid-arc part stays resolved
                n_u = max(2, n // 4)
                n_t = n - n_u
                parts = [(np.arange(n_u) + 0.5) / n_u]
                if start_special and end_special:
                    m1 = n_t // 2
                    m2 = n_t - m1
                    parts.append(0.5 * _cluster_params(m1))
                    parts.append(1.0 - 0.5 * _cluster_params(m2)[::-1])
                elif start_special:
                    parts.append(_cluster_params(n_t))
                else:
                    parts.append(1.0 - _cluster_params(n_t)[::-1])
                t = np.unique(np.concatenate(parts))
            elif start_special:
                t = (np.arange(n) + 0.5) / n
            else:
                t = np.arange(n) / float(n)
            z = arc.point(t)
            dz = arc.dpoint(t)
            # parameter cell widths: half-gaps to neighbours, arc ends at 0 / 1
            edges = np.concatenate([[0.0], 0.5 * (t[1:] + t[:-1]), [1.0]])
            dt = np.diff(edges)
            nodes.append(z)
            tangents.append(dz / np.abs(dz))
            weights.append(np.abs(dz) * dt)
            if corner_locs.size:
                cdist.append(np.abs(z[:, None] - corner_locs[None, :]).min(axis=1))
            else:
                cdist.append(np.full(len(z), np.inf))
            ranges.append((ci, ai, pos, pos + len(z)))
            pos += len(z)

    return BoundarySampling(
        nodes=np.concatenate(nodes),
        tangents=np.concatenate(tangents),
        weights=np.concatenate(weights),
        corner_distance=np.concatenate(cdist),
        arc_ranges=tuple(ranges),
        cluster=cluster,
    )


def transform_domain(domain: DomainSpec, a: complex, b: complex) -> DomainSpec:
    """Rebuild the domain after the similarity z -> a z + b."""
    outer = [arc.transformed(a, b) for arc in domain.outer]
    holes = [[arc.transformed(a, b) for arc in h] for h in domain.holes]
    return build_domain(outer, holes, domain.quad_vertices)


def interior_point(domain: DomainSpec, grid: int = 64) -> complex:
    """A robust interior point: the grid point farthest from the boundary."""
    x0, x1, y0, y1 = domain.bounding_box
    xs = np.linspace(x0, x1, grid + 2)[1:-1]
    ys = np.linspace(y0, y1, grid + 2)[1:-1]
    best, best_d = None, -1.0
    dense = np.concatenate(domain._dense)
    for x in xs:
        for y in ys:
            z = complex(x, y)
            d = float(np.abs(dense - z).min())
            if d > best_d and contains(domain, z) == "inside":
                best, best_d = z, d
    if best is None:
        raise GeometryError("no interior grid point found")
    return best


def centroid(domain: DomainSpec) -> complex:
    """Area centroid of the domain (holes subtracted)."""
    t = np.arange(DENSE_SAMPLES) / DENSE_SAMPLES
    area = 0.0
    moment = 0j
    for chain in domain.chains:
        pts = np.concatenate([arc.point(t) for arc in chain])
        nxt = np.roll(pts, -1)
        cr = (pts.real * nxt.imag - nxt.real * pts.imag)
        area += 0.5 * float(np.sum(cr))
        moment += np.sum((pts + nxt) * cr) / 6.0
    return complex(moment / area)


def inside_mask(domain: DomainSpec, z, margin: float = 0.0) -> np.ndarray:
    """Vectorized interior test for bulk point sets (lattices, render grids).

    Uses the dense boundary polyline only: points within `margin` (plus the
    boundary band) of the polyline are excluded.  Cruder than contains() near
    the boundary, but fast.
    """
    z = np.asarray(z, dtype=complex).ravel()
    keep = margin + BOUNDARY_REL_TOL * domain.diameter
    total = np.zeros(z.size)
    mindist = np.full(z.size, np.inf)
    for pts in domain._dense:
        rolled = np.roll(pts, -1)
        for lo in range(0, z.size, 1024):
            chunk = z[lo:lo + 1024]
            w = pts[:, None] - chunk[None, :]
            w2 = rolled[:, None] - chunk[None, :]
            with np.errstate(divide="ignore", invalid="ignore"):
                turn = np.angle(w2 / w)
            # points on the polyline get NaN turns; they fail the distance
            # cut below regardless, so any winding value will do
            total[lo:lo + 1024] += np.nansum(turn, axis=0) / (2.0 * np.pi)
            mindist[lo:lo + 1024] = np.minimum(mindist[lo:lo + 1024],
                                               np.abs(w).min(axis=0))
    return (np.abs(total - 1.0) < 0.25) & (mindist > keep)


def polygon(vertices, quad=None) -> DomainSpec:
    """Simply connected polygon from a vertex list (any orientation)."""
    vs = [complex(v) for v in vertices]
    arcs = [ArcSegment.line(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]
    return build_domain(arcs, quad=quad)


def circle_chain(center: complex, radius: float, n_arcs: int = 4):
    """A circle as n_arcs smooth circular arcs (counterclockwise)."""
    center = complex(center)
    sweep = 2.0 * math.pi / n_arcs
    arcs = []
    for k in range(n_arcs):
        a = center + radius * np.exp(1j * sweep * k)
        arcs.append(ArcSegment.circular(a, center, sweep))
    return arcs


def disk_domain(center: complex = 0j, radius: float = 1.0) -> DomainSpec:
    return build_domain(circle_chain(center, radius))


# ---------------------------------------------------------------------------
# JSON domain files


def _pt(v) -> complex:
    return complex(float(v[0]), float(v[1]))


def domain_from_json(obj: dict) -> DomainSpec:
    """Parse the domain-spec JSON schema into a validated DomainSpec."""
    try:
        def parse_chain(items):
            arcs = []
            for it in items:
                kind = it["type"]
                if kind == "line":
                    arcs.append(ArcSegment.line(_pt(it["from"]), _pt(it["to"])))
                elif kind == "arc":
                    arcs.append(ArcSegment.circular(_pt(it["from"]), _pt(it["center"]),
                                                    float(it["sweep"])))
                elif kind == "trig":
                    arcs.append(ArcSegment.trig([_pt(c) for c in it["coeffs"]]))
                else:
                    raise ParseError(f"unknown arc type {kind!r}")
            return arcs

        outer = parse_chain(obj["outer"])
        holes = [parse_chain(h) for h in obj.get("holes", [])]
        quad = obj.get("quad")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"bad domain file: {exc}") from exc
    return build_domain(outer, holes, quad)


def domain_to_json(domain: DomainSpec) -> dict:
    def dump_chain(chain):
        out = []
        for arc in chain:
            if arc.kind == "line":
                out.append({"type": "line", "from": [arc.start.real, arc.start.imag],
                            "to": [arc.end.real, arc.end.imag]})
            elif arc.kind == "circular":
                out.append({"type": "arc", "from": [arc.start.real, arc.start.imag],
                            "to": [arc.end.real, arc.end.imag],
                            "center": [arc.center.real, arc.center.imag],
                            "sweep": arc.sweep})
            else:
                out.append({"type": "trig",
                            "coeffs": [[c.real, c.imag] for c in arc.coeffs]})
        return out

    obj = {"outer": dump_chain(domain.outer)}
    if domain.holes:
        obj["holes"] = [dump_chain(h) for h in domain.holes]
    if domain.quad_vertices is not None:
        obj["quad"] = list(domain.quad_vertices)
    return obj
