"""Least-squares Laplace solves: Dirichlet, annulus level, mixed BC."""

import math

import numpy as np
import pytest

from confmap.basis import build_basis
from confmap.errors import NoQuadMarking, TolUnreachable, Underdetermined
from confmap.geometry import polygon, sample_boundary
from confmap.laplace import (
    solve_dirichlet,
    solve_dirichlet_adaptive,
    solve_mixed,
    verify_residual,
)
from conftest import rectangle_quad


class TestSolveDirichlet:
    def test_harmonic_polynomial_recovered(self, unit_disk):
        # data Re(z^2) is exactly representable: residual at machine precision
        data = lambda z: np.real(np.asarray(z) ** 2)
        basis = build_basis(unit_disk, "disk", degree=4, center=0j)
        sampling = sample_boundary(unit_disk, 32)
        model = solve_dirichlet(unit_disk, data, basis, sampling)
        assert model.residual.max_residual < 1e-13
        z = np.array([0.3 + 0.4j, -0.5j])
        assert np.allclose(model.u(z), np.real(z ** 2), atol=1e-13)

    def test_conjugate_normalized_at_center(self, unit_disk):
        data = lambda z: np.real(np.asarray(z) ** 3) + 1.0
        basis = build_basis(unit_disk, "disk", degree=6, center=0j)
        model = solve_dirichlet(unit_disk, data, basis,
                               sample_boundary(unit_disk, 32))
        assert abs(model.v(np.array([0j]))[0]) < 1e-13

    def test_underdetermined_raises(self, unit_disk):
        basis = build_basis(unit_disk, "disk", degree=20, center=0j)
        with pytest.raises(Underdetermined):
            solve_dirichlet(unit_disk, lambda z: np.zeros(len(z)), basis,
                            sample_boundary(unit_disk, 2))

    def test_adaptive_reaches_tol_on_smooth_data(self, blob_domain):
        data = lambda z: np.exp(np.real(z)) * np.cos(np.imag(z))
        model = solve_dirichlet_adaptive(blob_domain, data, "disk", tol=1e-10)
        assert model.residual.max_residual < 1e-10

    def test_tol_unreachable_carries_best(self, l_shape):
        data = lambda z: np.abs(np.asarray(z) - (0.5 + 0.5j)) ** 0.1
        with pytest.raises(TolUnreachable) as info:
            solve_dirichlet_adaptive(l_shape, data, "disk", tol=1e-30,
                                     max_dof=300)
        assert info.value.best.residual.max_residual < 1.0


class TestVerifyResidual:
    def test_uses_denser_grid(self, unit_disk):
        data = lambda z: np.real(np.asarray(z))
        basis = build_basis(unit_disk, "disk", degree=4, center=0j)
        sampling = sample_boundary(unit_disk, 16)
        model = solve_dirichlet(unit_disk, data, basis, sampling)
        report = verify_residual(model, unit_disk, data)
        assert report.verification_grid_size > sampling.nodes.size


class TestSolveMixed:
    def test_requires_quad_marking(self, l_shape):
        with pytest.raises(NoQuadMarking):
            solve_mixed(l_shape)

    def test_unit_square_modulus(self, unit_square_quad):
        model = solve_mixed(unit_square_quad, tol=1e-10)
        c = model.side_constants
        assert 1.0 / (max(c) - min(c)) == pytest.approx(1.0, abs=1e-10)

    def test_rectangle_moduli(self):
        for aspect in (2.0, 3.0):
            model = solve_mixed(rectangle_quad(aspect), tol=1e-10)
            c = model.side_constants
            assert 1.0 / (max(c) - min(c)) == pytest.approx(aspect, abs=1e-9)

    def test_dirichlet_sides_hold_their_values(self, unit_square_quad):
        model = solve_mixed(unit_square_quad, side_values={0: 0.25, 2: 0.75},
                            tol=1e-10)
        # side 0 runs from quad vertex 0 to 1 (the bottom edge here)
        z = np.linspace(0.1, 0.9, 7) + 0j
        assert np.allclose(model.u(z), 0.25, atol=1e-9)
        assert np.allclose(model.u(z + 1j), 0.75, atol=1e-9)

    def test_solution_is_harmonic(self):
        model = solve_mixed(rectangle_quad(1.0), tol=1e-10)
        z = np.array([0.3 + 0.3j, 0.7 + 0.2j, 0.5 + 0.8j])
        h = 1e-4
        lap = (model.u(z + h) + model.u(z - h) + model.u(z + 1j * h)
               + model.u(z - 1j * h) - 4 * model.u(z)) / h ** 2
        assert np.abs(lap).max() < 1e-4

    def test_neumann_data_via_manufactured_jump(self):
        # center potential of the (-1,1)^2 square with ends at 1, sides
        # at 0 is exactly 1/2 by symmetry.  Solved on the quarter square
        # after subtracting the analytic angle function that carries the
        # corner jump of the boundary data.
        zc = 1.0 + 1j
        h = lambda z: (-2j / math.pi) * np.log(zc - np.asarray(z, dtype=complex))
        nu = lambda z: -np.imag(h(z))
        dom = polygon([0, 1, 1 + 1j, 1j], quad=[0, 1, 2, 3])
        model = solve_mixed(dom, side_values={1: 0.0, 2: 0.0},
                            neumann_data={0: nu, 3: nu}, tol=1e-10)
        u0 = float(np.real(h(np.array([0j]))[0]) + model.u(np.array([0j]))[0])
        assert u0 == pytest.approx(0.5, abs=1e-10)
