import unittest

import numpy as np

from ehrenlab.exceptions import PotentialError
from ehrenlab.models.grid import make_grid
from ehrenlab.models.potentials import (
    DensityCoupledPotential, GaussianBarrier, GradientMode, HarmonicPotential,
    UniformPotential, ZeroPotential
)
from ehrenlab.services.potentials import (
    evaluate_potential, potential_energy_density, potential_gradient, potential_values
)
from ehrenlab.services.spectral import derivative_values
from ehrenlab.services.states import gaussian_packet


class ClosedFormPotentialTestCase(unittest.TestCase):
    """Harmonic, uniform and barrier potentials"""

    def setUp(self):
        self.grid = make_grid(1024, 40.0)
        self.x = self.grid.points

    def test_zero(self):
        np.testing.assert_array_equal(evaluate_potential(ZeroPotential(), self.grid).values, 0.0)

    def test_harmonic_uses_minimum_image(self):
        trap = HarmonicPotential(omega=2.0, center=20.0)
        values = potential_values(trap, self.grid, mass=0.5)
        index = int(round(21.25 / self.grid.dx))
        self.assertAlmostEqual(values[index], 0.5 * 0.5 * 4.0 * 1.25 ** 2, places=12)
        # x = 0 sits half a period away from the center
        self.assertAlmostEqual(values[0], 0.5 * 0.5 * 4.0 * 400.0, places=9)

    def test_harmonic_gradient(self):
        trap = HarmonicPotential(omega=1.0, center=20.0)
        gradient = potential_gradient(trap, self.grid, mass=2.0).values
        np.testing.assert_allclose(gradient, 2.0 * self.grid.minimum_image(20.0))

    def test_uniform(self):
        slope = UniformPotential(f0=0.3)
        np.testing.assert_allclose(potential_values(slope, self.grid), -0.3 * self.x)
        np.testing.assert_allclose(potential_gradient(slope, self.grid).values, -0.3)

    def test_barrier_gradient_matches_spectral_derivative(self):
        barrier = GaussianBarrier(height=2.0, width=1.0, center=20.0)
        values = potential_values(barrier, self.grid)
        self.assertAlmostEqual(values[int(round(20.0 / self.grid.dx))], 2.0)
        np.testing.assert_allclose(potential_gradient(barrier, self.grid).values,
                                   derivative_values(values, self.grid, 1), atol=1e-10)

    def test_invalid_parameters(self):
        with self.assertRaises(PotentialError):
            HarmonicPotential(omega=0.0, center=1.0)
        with self.assertRaises(PotentialError):
            GaussianBarrier(height=1.0, width=-1.0, center=0.0)
        with self.assertRaises(PotentialError):
            UniformPotential(f0=float('inf'))


class DensityCoupledPotentialTestCase(unittest.TestCase):
    """U(rho, x) = U_base(x) (1 + eta rho)"""

    def setUp(self):
        self.grid = make_grid(1024, 40.0)
        self.base = HarmonicPotential(omega=1.0, center=20.0)
        self.potential = DensityCoupledPotential(base=self.base, eta=0.5)
        self.rho = gaussian_packet(self.grid, 21.0, 0.8).density

    def test_requires_density(self):
        with self.assertRaises(PotentialError):
            potential_values(self.potential, self.grid)
        with self.assertRaises(PotentialError):
            potential_gradient(self.potential, self.grid)

    def test_values(self):
        expected = potential_values(self.base, self.grid) * (1 + 0.5 * self.rho)
        np.testing.assert_allclose(potential_values(self.potential, self.grid, self.rho), expected)
        self.assertTrue(self.potential.depends_on_density)

    def test_full_gradient_adds_density_slope_term(self):
        full = potential_gradient(self.potential, self.grid, self.rho, GradientMode.FULL).values
        partial = potential_gradient(self.potential, self.grid, self.rho, GradientMode.PARTIAL).values
        base = potential_values(self.base, self.grid)
        np.testing.assert_allclose(full - partial,
                                   base * 0.5 * derivative_values(self.rho, self.grid, 1), atol=1e-12)

    def test_energy_density_derivative_is_the_potential(self):
        h = 1e-6
        upper = potential_energy_density(self.potential, self.grid, self.rho + h)
        lower = potential_energy_density(self.potential, self.grid, self.rho - h)
        np.testing.assert_allclose((upper - lower) / (2 * h),
                                   potential_values(self.potential, self.grid, self.rho), rtol=1e-6, atol=1e-6)

    def test_rejects_nested_density_coupling(self):
        with self.assertRaises(PotentialError):
            DensityCoupledPotential(base=self.potential, eta=0.1)
        with self.assertRaises(PotentialError):
            DensityCoupledPotential(base='harmonic', eta=0.1)


if __name__ == '__main__':
    unittest.main()
