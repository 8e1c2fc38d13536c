"""Basis assembly: monomials, clustered poles, annulus Laurent terms."""

import math

import numpy as np
import pytest

from confmap.basis import (
    build_basis,
    cluster_distances,
    evaluate_basis,
)
from confmap.errors import EvalAtSingularity, PurposeMismatch
from confmap.geometry import contains


class TestClusterDistances:
    def test_tapered_exponential_law(self):
        n = 12
        d = cluster_distances(1.0, n)
        j = np.arange(1, n + 1)
        expect = np.exp(-4.0 * (math.sqrt(n) - np.sqrt(j)))
        assert np.allclose(d, expect)
        assert d[-1] == pytest.approx(1.0)

    def test_monotone_increasing(self):
        d = cluster_distances(0.5, 20)
        assert np.all(np.diff(d) > 0)


class TestBuildBasis:
    def test_disk_counts(self, blob_domain):
        b = build_basis(blob_domain, "disk", degree=10)
        assert b.counts() == {"monomial": 11, "pole": 0, "laurent": 0, "log": 0}
        # constant is real-only, so 2*11 - 1 real unknowns
        assert b.n_real_unknowns == 21

    def test_poles_sit_outside(self, l_shape):
        b = build_basis(l_shape, "disk", degree=8, poles_per_corner=12)
        assert b.counts()["pole"] == 6 * 12
        for t in b.terms:
            if t.variant == "pole":
                assert contains(l_shape, t.center) != "inside"

    def test_annulus_terms(self, concentric_annulus):
        b = build_basis(concentric_annulus, "annulus", degree=6)
        counts = b.counts()
        assert counts["laurent"] == 6 and counts["log"] == 1
        assert abs(b.hole_center) < 1e-12

    def test_purpose_checks(self, blob_domain, concentric_annulus):
        with pytest.raises(PurposeMismatch):
            build_basis(blob_domain, "annulus", degree=4)
        with pytest.raises(PurposeMismatch):
            build_basis(concentric_annulus, "disk", degree=4)
        with pytest.raises(PurposeMismatch):
            build_basis(blob_domain, "exotic", degree=4)


class TestEvaluateBasis:
    def test_monomial_values_and_derivatives(self, unit_disk):
        b = build_basis(unit_disk, "disk", degree=3, center=0j)
        z = np.array([0.3 + 0.1j, -0.2j])
        V, dV = evaluate_basis(b, z)
        s = b.terms[1].scale
        assert np.allclose(V[:, 2], (z / s) ** 2)
        assert np.allclose(dV[:, 2], 2 * z / s ** 2)
        assert np.allclose(dV[:, 0], 0.0)

    def test_pole_value(self):
        # 1/(z - p) with p = 2 at z = 0: value -1/2, derivative -1/4
        from confmap.basis import BasisSet, BasisTerm
        b = BasisSet((BasisTerm("pole", 0, 2.0 + 0j),), 0j, "disk")
        V, dV = evaluate_basis(b, [0j])
        assert V[0, 0] == pytest.approx(-0.5)
        assert dV[0, 0] == pytest.approx(-0.25)

    def test_eval_at_singularity(self):
        from confmap.basis import BasisSet, BasisTerm
        b = BasisSet((BasisTerm("pole", 0, 2.0 + 0j),), 0j, "disk")
        with pytest.raises(EvalAtSingularity):
            evaluate_basis(b, [2.0 + 0j])

    def test_derivatives_match_finite_differences(self, l_shape):
        b = build_basis(l_shape, "disk", degree=5, poles_per_corner=4)
        z = np.array([0.5 + 0.5j, 1.5 + 0.4j, 0.3 + 1.7j])
        h = 1e-6
        V, dV = evaluate_basis(b, z)
        Vp, _ = evaluate_basis(b, z + h)
        Vm, _ = evaluate_basis(b, z - h)
        fd = (Vp - Vm) / (2 * h)
        assert np.abs(dV - fd).max() < 1e-5
