"""Boundary correspondence extraction and barycentric rational compression.

The forward map (and its inverse, by swapping coordinates) is compressed by
adaptive greedy support-point selection: at each step the table point of
largest current error becomes a support point and the barycentric weights
are refit by a small SVD.  Approximants whose poles intrude into the closed
approximation region are refit with the offending support point excluded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BadTol, TooFewSamples
from .geometry import contains, sample_boundary
from .maps import ConformalMap, _raw_eval

POLE_SCAN_MARGIN = 1e-8


@dataclass(frozen=True)
class CorrespondenceTable:
    """Ordered boundary pairs (z on Gamma, w on the canonical boundary)."""

    z: np.ndarray
    w: np.ndarray
    target: str               # canonical side: "disk" | "annulus"
    direction: str = "forward"

    @property
    def count(self) -> int:
        return int(self.z.size)


@dataclass(frozen=True)
class RationalApproximant:
    support: np.ndarray       # support points x_k
    values: np.ndarray        # support values r(x_k)
    weights: np.ndarray       # barycentric weights
    direction: str            # "forward" | "inverse"
    accuracy_estimate: float
    converged: bool = True

    @property
    def degree(self) -> int:
        return int(self.support.size) - 1

    def __call__(self, points):
        return evaluate_rational(self, points)

    def poles(self) -> np.ndarray:
        """Poles via the generalized arrowhead eigenvalue problem."""
        m = self.support.size
        B = np.eye(m + 1)
        B[0, 0] = 0.0
        E = np.zeros((m + 1, m + 1), dtype=complex)
        E[0, 1:] = self.weights
        E[1:, 0] = 1.0
        E[1:, 1:] = np.diag(self.support)
        ev = scipy.linalg.eigvals(E, B)
        ev = ev[np.isfinite(ev)]
        return ev

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "support": [[z.real, z.imag] for z in self.support],
            "values": [[z.real, z.imag] for z in self.values],
            "weights": [[z.real, z.imag] for z in self.weights],
            "accuracy": self.accuracy_estimate,
        }

    @staticmethod
    def from_json(obj: dict) -> "RationalApproximant":
        def arr(key):
            return np.array([complex(a, b) for a, b in obj[key]], dtype=complex)

        return RationalApproximant(arr("support"), arr("values"), arr("weights"),
                                   obj["direction"], float(obj["accuracy"]))


def boundary_correspondence(cmap: ConformalMap, m: int) -> CorrespondenceTable:
    """m pairs (z_j, f(z_j)) along the outer boundary, corner-clustered."""
    if cmap.target not in ("disk", "annulus"):
        raise TooFewSamples(f"no boundary correspondence for target {cmap.target!r}")
    if m < 4:
        raise TooFewSamples(f"need at least 4 samples, got {m}")
    n_arcs = len(cmap.domain.outer)
    ppa = max(2, -(-m // n_arcs))  # ceil division; count rounds up to a multiple
    cluster = bool(cmap.domain.corners)
    full = sample_boundary(cmap.domain, ppa, cluster)
    idx = full.chain_slice(0)
    z = full.nodes[idx]
    w, _ = _raw_eval(cmap, z)
    return CorrespondenceTable(z, w, cmap.target)


def evaluate_rational(r: RationalApproximant, points) -> np.ndarray:
    """Barycentric evaluation; exact at support points."""
    x = np.asarray(points, dtype=complex).ravel()
    out = np.empty(x.size, dtype=complex)
    block = 1 << 14
    for lo in range(0, x.size, block):
        xc = x[lo:lo + block]
        D = xc[:, None] - r.support[None, :]
        hit_i, hit_j = np.nonzero(D == 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            C = 1.0 / D
            num = C @ (r.weights * r.values)
            den = C @ r.weights
            vals = num / den
        vals[hit_i] = r.values[hit_j]
        out[lo:lo + block] = vals
    return out


def _fit_weights(x, y, support_idx):
    """Barycentric weights minimizing the linearized residual (Loewner SVD)."""
    mask = np.zeros(x.size, dtype=bool)
    mask[support_idx] = True
    xs, ys = x[support_idx], y[support_idx]
    C = 1.0 / (x[~mask][:, None] - xs[None, :])
    A = (y[~mask][:, None] - ys[None, :]) * C
    _, _, Vh = np.linalg.svd(A, full_matrices=False)
    return Vh[-1].conj()


def _greedy_fit(x, y, tol, max_degree, banned):
    """Greedy AAA-style loop; returns the best (support_idx, weights, err) seen."""
    err_prev = np.inf
    best = None
    support = []
    r_vals = np.full(x.size, y.mean())
    for _ in range(min(max_degree + 1, x.size - 1)):
        resid = np.abs(y - r_vals)
        resid[support] = 0.0
        resid[banned] = 0.0
        j = int(np.argmax(resid))
        support.append(j)
        if len(support) >= x.size - len(banned) - 1:
            break
        weights = _fit_weights(x, y, support)
        r = RationalApproximant(x[support], y[support], weights, "tmp", 0.0)
        r_vals = evaluate_rational(r, x)
        mask = np.ones(x.size, dtype=bool)
        mask[banned] = False
        err = float(np.abs(y - r_vals)[mask].max())
        if err < err_prev:
            best = (list(support), weights, err)
            err_prev = err
        if err_prev <= tol:
            break
    if best is None:
        best = ([support[0]], np.array([1.0 + 0j]), float(np.abs(y - y[support[0]]).max()))
    return best


def _pole_violations(r: RationalApproximant, table: CorrespondenceTable,
                     direction: str) -> np.ndarray:
    """Poles inside the closed region the approximant is certified on."""
    poles = r.poles()
    bad = []
    if direction == "forward":
        # region: the closed problem domain
        from .geometry import DomainSpec  # local alias for clarity
        for p in poles:
            if contains_region_forward(table, p):
                bad.append(p)
    else:
        for p in poles:
            if contains_region_inverse(table, p):
                bad.append(p)
    return np.array(bad, dtype=complex)


_DOMAIN_BY_TABLE = {}


def contains_region_forward(table: CorrespondenceTable, p: complex) -> bool:
    domain = _DOMAIN_BY_TABLE.get(id(table))
    if domain is not None:
        return contains(domain, p) != "outside"
    # fallback: winding of the tabulated boundary about p
    w = table.z - p
    total = np.sum(np.angle(np.roll(w, -1) / w)) / (2.0 * np.pi)
    return bool(abs(total) > 0.5)


def contains_region_inverse(table: CorrespondenceTable, p: complex) -> bool:
    if table.target == "disk":
        return bool(abs(p) <= 1.0 + POLE_SCAN_MARGIN)
    R = float(np.abs(table.w).max())
    return bool(1.0 - POLE_SCAN_MARGIN <= abs(p) <= R + POLE_SCAN_MARGIN)


def fit_rational(table: CorrespondenceTable, direction: str = "forward",
                 tol: float = 1e-8, max_degree: int = 200,
                 domain=None) -> RationalApproximant:
    """Compress the correspondence into barycentric rational form.

    direction "forward" fits w(z); "inverse" fits z(w) on the swapped pairs.
    Passing the DomainSpec sharpens the forward pole-intrusion check; without
    it a winding test against the tabulated boundary is used.
    """
    if tol <= 0:
        raise BadTol(f"tol must be positive, got {tol}")
    if direction == "forward":
        x, y = table.z, table.w
    elif direction == "inverse":
        x, y = table.w, table.z
    else:
        raise BadTol(f"unknown direction {direction!r}")

    if domain is not None:
        _DOMAIN_BY_TABLE[id(table)] = domain
    try:
        banned: list = []
        for _ in range(12):
            support, weights, err = _greedy_fit(x, y, tol, max_degree, banned)
            r = RationalApproximant(x[support], y[support], weights, direction,
                                    err, converged=err <= tol)
            viol = _pole_violations(r, table, direction)
            if viol.size == 0:
                return r
            # ban the support point nearest each intruding pole and refit
            for p in viol:
                banned.append(int(np.argmin(np.abs(x - p))))
        return r
    finally:
        _DOMAIN_BY_TABLE.pop(id(table), None)
