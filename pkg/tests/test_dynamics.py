import unittest

import numpy as np

from ehrenlab.exceptions import ModelError
from ehrenlab.models.dynamics import (
    DensityFunctionalModel, DoebnerGoldinModel, Kernel, KernelShape, LinearModel
)
from ehrenlab.models.grid import RealField, make_grid
from ehrenlab.models.potentials import HarmonicPotential, ZeroPotential
from ehrenlab.services.dynamics import (
    Dynamics, current, density_functional_term, dg_cutoff, dg_term, gauge_phase, has_nodes,
    phase_velocity_field, rhs
)
from ehrenlab.services.observables import self_force
from ehrenlab.services.spectral import exponential_filter, wavenumber_array
from ehrenlab.services.states import gaussian_packet, plane_wave, superpose


class ModelValidationTestCase(unittest.TestCase):
    """Model parameter checks"""

    def test_mass_must_be_positive(self):
        for factory in (LinearModel, DensityFunctionalModel, DoebnerGoldinModel):
            with self.subTest(model=factory.__name__):
                with self.assertRaises(ModelError):
                    factory(mass=0.0)

    def test_exponent_and_epsilon(self):
        with self.assertRaises(ModelError):
            DensityFunctionalModel(exponent=0.5)
        with self.assertRaises(ModelError):
            DoebnerGoldinModel(coupling=0.1, epsilon=-1.0)

    def test_kernel(self):
        with self.assertRaises(ModelError):
            Kernel(KernelShape.GAUSSIAN, 0.0)
        k = np.linspace(-5.0, 5.0, 41)
        for shape in KernelShape:
            kernel = Kernel(shape, 1.0)
            with self.subTest(shape=shape.value):
                self.assertAlmostEqual(float(kernel.transfer(np.zeros(1))[0]), 1.0)
                transfer = kernel.transfer(k)
                np.testing.assert_allclose(transfer, kernel.transfer(-k))
                self.assertTrue(np.all(transfer <= 1.0))

    def test_lagrangian_flags(self):
        self.assertTrue(LinearModel().is_lagrangian)
        self.assertTrue(DensityFunctionalModel().is_lagrangian)
        self.assertFalse(DoebnerGoldinModel().is_lagrangian)


class RightHandSideTestCase(unittest.TestCase):
    """Hamiltonian action of the three families"""

    def setUp(self):
        self.grid = make_grid(1024, 40.0)
        self.packet = gaussian_packet(self.grid, 20.0, 1.0, k0=0.7, chirp=0.05)

    def test_plane_wave_current(self):
        grid = make_grid(64, 10.0)
        psi = plane_wave(grid, 2)
        k = 2 * np.pi * 2 / 10.0
        np.testing.assert_allclose(current(psi, grid, 2.0).values, k / (2.0 * 10.0), atol=1e-12)

    def test_free_plane_wave_rhs(self):
        grid = make_grid(64, 10.0)
        psi = plane_wave(grid, 3)
        k = 2 * np.pi * 3 / 10.0
        result = rhs(LinearModel(mass=1.5), psi, grid, ZeroPotential())
        np.testing.assert_allclose(result.values, -1j * k ** 2 / 3.0 * psi.values, atol=1e-12)

    def test_plane_wave_rhs_per_family(self):
        grid = make_grid(64, 10.0)
        psi = plane_wave(grid, 3)
        k = 2 * np.pi * 3 / 10.0
        gpe = rhs(DensityFunctionalModel(g=2.0), psi, grid, ZeroPotential())
        np.testing.assert_allclose(gpe.values, -1j * (k ** 2 / 2 + 2.0 / 10.0) * psi.values, atol=1e-12)
        dg = rhs(DoebnerGoldinModel(coupling=0.3), psi, grid, ZeroPotential())
        np.testing.assert_allclose(dg.values, -1j * k ** 2 / 2 * psi.values, atol=1e-10)

    def test_dg_term_of_chirped_packet(self):
        term = dg_term(self.packet, self.grid, 1.0, 0.3)
        self.assertFalse(term.node_flag)
        inside = np.abs(self.grid.points - 20.0) < 3.0
        np.testing.assert_allclose(term.field.values[inside], 0.03 * self.packet.values[inside], atol=1e-8)

    def test_rejects_foreign_grid(self):
        with self.assertRaises(ModelError):
            rhs(LinearModel(), self.packet, make_grid(512, 40.0), ZeroPotential())

    def test_gauge_covariance(self):
        trap = HarmonicPotential(omega=1.0, center=20.0)
        models = (LinearModel(), DensityFunctionalModel(g=2.0),
                  DensityFunctionalModel(kernel=Kernel(KernelShape.EXPONENTIAL, 0.5)),
                  DoebnerGoldinModel(coupling=0.3))
        rotated = gauge_phase(self.packet, 0.9)
        for model in models:
            with self.subTest(model=model.kind.value):
                left = rhs(model, rotated, self.grid, trap).values
                right = np.exp(0.9j) * rhs(model, self.packet, self.grid, trap).values
                np.testing.assert_allclose(left, right, atol=1e-10)

    def test_phase_velocity_of_chirped_packet(self):
        velocity = phase_velocity_field(self.packet, self.grid, 1.0)
        self.assertFalse(velocity.node_flag)
        d = self.grid.points - 20.0
        inside = np.abs(d) < 3.0
        np.testing.assert_allclose(velocity.field.values[inside], (0.7 + 0.1 * d)[inside], atol=1e-7)

    def test_node_detection(self):
        grid = make_grid(64, 2 * np.pi)
        standing = superpose((1.0, plane_wave(grid, 1)), (1.0, plane_wave(grid, -1)))
        self.assertTrue(has_nodes(standing.density, 1e-12))
        self.assertFalse(has_nodes(self.packet.density, 1e-12))

    def test_density_functional_term(self):
        rho = RealField(self.grid, self.packet.density)
        local = density_functional_term(DensityFunctionalModel(g=2.0, exponent=2.0), rho)
        np.testing.assert_allclose(local.values, 2.0 * rho.values ** 2)
        uniform = RealField(self.grid, np.full(self.grid.n, 0.3))
        smoothed = density_functional_term(
            DensityFunctionalModel(kernel=Kernel(KernelShape.GAUSSIAN, 1.0)), uniform)
        np.testing.assert_allclose(smoothed.values, 0.3, atol=1e-12)
        with self.assertRaises(ModelError):
            density_functional_term(LinearModel(), rho)

    def test_spectral_radius_covers_kinetic_spectrum(self):
        dynamics = Dynamics(LinearModel(mass=2.0), self.grid, ZeroPotential())
        self.assertAlmostEqual(dynamics.spectral_radius(self.packet.values),
                               float(np.max(dynamics.kinetic)))
        self.assertAlmostEqual(float(np.max(dynamics.kinetic)), self.grid.k_max ** 2 / 4.0, places=6)

    def test_rhs_preserves_norm(self):
        trap = HarmonicPotential(omega=1.0, center=20.0)
        models = (LinearModel(), DensityFunctionalModel(g=2.0),
                  DensityFunctionalModel(kernel=Kernel(KernelShape.GAUSSIAN, 0.5)),
                  DoebnerGoldinModel(coupling=0.3))
        for model in models:
            with self.subTest(model=model.kind.value):
                result = rhs(model, self.packet, self.grid, trap)
                rate = self.grid.dx * np.sum(np.conj(self.packet.values) * result.values)
                self.assertLess(abs(rate.real), 1e-12)

    def test_even_kernel_exerts_no_self_force(self):
        models = (DensityFunctionalModel(g=2.0, exponent=2.0),
                  DensityFunctionalModel(kernel=Kernel(KernelShape.GAUSSIAN, 1.0)),
                  DensityFunctionalModel(kernel=Kernel(KernelShape.EXPONENTIAL, 0.5)))
        for model in models:
            with self.subTest(model=model.to_dict()):
                self.assertLess(abs(self_force(model, self.packet)), 1e-12)


class CurrentFilterTestCase(unittest.TestCase):
    """Low-pass filter on the Doebner-Goldin current term"""

    def setUp(self):
        self.grid = make_grid(1024, 40.0)
        self.packet = gaussian_packet(self.grid, 20.0, 1.0, cubic_phase=0.05)

    def test_cutoff_holds_growth_rate(self):
        cutoff = dg_cutoff(self.grid, 1.0, 0.3, growth_rate=10.0)
        self.assertAlmostEqual(cutoff, 17.2, delta=0.05)
        k = wavenumber_array(self.grid)
        growth = 0.3 * float(np.max(k ** 2 * exponential_filter(self.grid, cutoff))) / 2.0
        self.assertLessEqual(growth, 10.0 * (1 + 1e-9))
        self.assertGreater(growth, 9.0)

    def test_cutoff_is_capped(self):
        coarse = make_grid(128, 40.0)
        self.assertEqual(dg_cutoff(coarse, 1.0, 0.1), 0.5 * coarse.k_max)
        self.assertEqual(dg_cutoff(self.grid, 1.0, 0.0), 0.5 * self.grid.k_max)
        self.assertEqual(dg_cutoff(self.grid, 1.0, -0.3), dg_cutoff(self.grid, 1.0, 0.3))

    def test_spectral_radius_includes_current_term(self):
        linear = Dynamics(LinearModel(), self.grid, ZeroPotential()).spectral_radius(self.packet.values)
        dg = Dynamics(DoebnerGoldinModel(coupling=0.3), self.grid, ZeroPotential())
        self.assertGreater(dg.spectral_radius(self.packet.values), linear + 9.0)
        self.assertIsNone(Dynamics(DoebnerGoldinModel(coupling=0.0), self.grid,
                                   ZeroPotential()).current_term(self.packet.values))


if __name__ == '__main__':
    unittest.main()
