"""Crowding forecasts, elongation estimates, and physical quantities.

The crowding severity of an elongated region can be forecast before any
solve: a region of elongation L maps to the disk with derivative ratios of
order exp(pi L), which quickly exhausts double precision.  The Brownian
end-hitting probability and quadrilateral resistance reduce to the
conformal modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeL, NonpositiveInput, NonpositiveMu
from .geometry import DomainSpec, inside_mask

SCAN_DIRECTIONS = 64
SCAN_LATTICE = 64
SERIES_CAP = 10_000
SERIES_RTOL = 1e-16
REPRESENTABLE_LIMIT = 1.0 / np.finfo(float).eps  # ~4.5e15


@dataclass(frozen=True)
class ElongationEstimate:
    L: float                 # max directional extent over twice the max inradius
    method: str = "width-of-best-strip"
    direction: float = 0.0   # angle (radians) of the widest direction
    width: float = 0.0       # extent along that direction
    thickness: float = 0.0   # 2 x max distance from an interior point to the boundary


@dataclass(frozen=True)
class CrowdingForecast:
    L: float
    scale: float                   # exp(pi L)
    representable_in_double: bool  # scale still resolvable in double precision
    digits_lost: float             # log10 of the scale


@dataclass(frozen=True)
class ProbabilityResult:
    asymptotic: float       # (8/pi) exp(-mu pi / 2)
    series_value: float     # truncated sech series
    terms_used: int


def elongation_estimate(domain: DomainSpec) -> ElongationEstimate:
    """Scan directions and an interior lattice for the aspect of the region."""
    t = np.linspace(0.0, 1.0, 64, endpoint=False)
    pts = np.concatenate([arc.point(t) for chain in domain.chains for arc in chain])

    angles = np.linspace(0.0, math.pi, SCAN_DIRECTIONS, endpoint=False)
    proj = np.real(pts[None, :] * np.exp(-1j * angles)[:, None])
    widths = proj.max(axis=1) - proj.min(axis=1)
    k = int(np.argmax(widths))
    width = float(widths[k])

    x0, x1, y0, y1 = domain.bounding_box
    xs = np.linspace(x0, x1, SCAN_LATTICE)
    ys = np.linspace(y0, y1, SCAN_LATTICE)
    X, Y = np.meshgrid(xs, ys)
    grid = (X + 1j * Y).ravel()
    interior = grid[inside_mask(domain, grid)]
    if interior.size == 0:
        raise NegativeL("no interior lattice points; region too thin to scan")
    inradius = max(float(domain.boundary_distance(z)) for z in interior)
    thickness = 2.0 * inradius
    return ElongationEstimate(width / thickness, "width-of-best-strip",
                              float(angles[k]), width, thickness)


def crowding_forecast(L: float) -> CrowdingForecast:
    """exp(pi L) derivative-ratio forecast for elongation L."""
    L = float(L)
    if not math.isfinite(L) or L < 0:
        raise NegativeL(f"elongation must be finite and nonnegative, got {L}")
    log_scale = math.pi * L
    scale = math.exp(log_scale) if log_scale < 700 else math.inf
    return CrowdingForecast(L, scale, scale < REPRESENTABLE_LIMIT,
                            log_scale / math.log(10.0))


def end_hitting_probability(mu: float) -> ProbabilityResult:
    """Probability that Brownian motion started at the center of the
    rectangle (-mu, mu) x (-1, 1) exits through one of the two far ends
    rather than through the long sides.

    Returns the leading asymptotic (8/pi) exp(-mu pi / 2) together with the
    exact separable series u(0,0) = sum over odd k of
    (4 / pi k)(-1)^((k-1)/2) sech(k pi mu / 2), truncated at relative 1e-16.
    """
    mu = float(mu)
    if mu <= 0:
        raise NonpositiveMu(f"modulus must be positive, got {mu}")
    lead = (8.0 / math.pi) * math.exp(-mu * math.pi / 2.0)
    total = 0.0
    terms = 0
    for i in range(SERIES_CAP):
        k = 2 * i + 1
        arg = k * math.pi * mu / 2.0
        if arg > 745.0:  # sech underflows
            break
        term = (4.0 / (math.pi * k)) * ((-1.0) ** i) / math.cosh(arg)
        total += term
        terms += 1
        if abs(term) < SERIES_RTOL * abs(total):
            break
    return ProbabilityResult(lead, total, terms)


def resistance_of_quadrilateral(mu: float, resistivity: float = 1.0) -> float:
    """Sheet resistance between the two marked electrode sides: rho * mu."""
    mu = float(mu)
    resistivity = float(resistivity)
    if mu <= 0:
        raise NonpositiveInput(f"modulus must be positive, got {mu}")
    if resistivity <= 0:
        raise NonpositiveInput(f"resistivity must be positive, got {resistivity}")
    return resistivity * mu
