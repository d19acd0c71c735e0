import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from ehrenlab.exceptions import GridError
from ehrenlab.models.grid import ComplexField, Grid, RealField, make_grid
from ehrenlab.services.spectral import (
    convolve_values, derivative_values, exponential_filter, filter_peak_gain, integrate, shift_values,
    spectral_derivative, wavenumber_array, wavenumbers
)


class GridTestCase(unittest.TestCase):
    """Grid construction and geometry"""

    def test_rejects_non_power_of_two(self):
        with self.assertRaises(GridError):
            make_grid(100, 1.0)

    def test_rejects_too_few_points(self):
        with self.assertRaises(GridError):
            make_grid(4, 1.0)

    def test_rejects_bad_length(self):
        for length in (0.0, -1.0, float('inf'), float('nan')):
            with self.subTest(length=length):
                with self.assertRaises(GridError):
                    make_grid(64, length)

    def test_points_and_spacing(self):
        grid = make_grid(8, 8.0)
        self.assertEqual(grid.dx, 1.0)
        np.testing.assert_array_equal(grid.points, np.arange(8.0))
        self.assertAlmostEqual(grid.k_max, np.pi)

    def test_points_are_read_only(self):
        grid = make_grid(8, 8.0)
        with self.assertRaises(ValueError):
            grid.points[0] = 1.0

    def test_minimum_image(self):
        grid = make_grid(8, 8.0)
        np.testing.assert_array_equal(grid.minimum_image(0.0), [0, 1, 2, 3, -4, -3, -2, -1])

    def test_field_shape_and_finiteness(self):
        grid = make_grid(8, 1.0)
        with self.assertRaises(GridError):
            ComplexField(grid, np.zeros(16))
        with self.assertRaises(GridError):
            RealField(grid, np.full(8, np.nan))
        field = RealField(grid, np.ones(8))
        self.assertFalse(field.values.flags.writeable)


class SpectralTestCase(unittest.TestCase):
    """Wavenumbers, quadrature and spectral derivatives"""

    def setUp(self):
        self.grid = make_grid(64, 2 * np.pi)
        self.x = self.grid.points

    def test_wavenumber_ordering(self):
        k = wavenumber_array(make_grid(8, 2 * np.pi))
        np.testing.assert_allclose(k, [0, 1, 2, 3, -4, -3, -2, -1])
        self.assertIsInstance(wavenumbers(self.grid), RealField)

    def test_integrate_constant(self):
        field = RealField(self.grid, np.full(self.grid.n, 2.0))
        self.assertAlmostEqual(integrate(field), 4 * np.pi, places=12)

    def test_first_and_second_derivative_of_sine(self):
        field = RealField(self.grid, np.sin(3 * self.x))
        np.testing.assert_allclose(spectral_derivative(field, 1).values, 3 * np.cos(3 * self.x), atol=1e-12)
        np.testing.assert_allclose(spectral_derivative(field, 2).values, -9 * np.sin(3 * self.x), atol=1e-11)

    def test_real_input_gives_real_output(self):
        self.assertFalse(np.iscomplexobj(derivative_values(np.cos(self.x), self.grid, 1)))

    def test_rejects_unsupported_order(self):
        with self.assertRaises(ValueError):
            spectral_derivative(RealField(self.grid, np.sin(self.x)), 3)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=-31, max_value=31))
    def test_derivative_of_fourier_mode(self, mode):
        values = np.exp(1j * mode * self.x)
        np.testing.assert_allclose(derivative_values(values, self.grid, 1), 1j * mode * values, atol=1e-11)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=-10, max_value=10),
           st.floats(min_value=-3.0, max_value=3.0, allow_nan=False))
    def test_shift_of_fourier_mode(self, mode, displacement):
        values = np.exp(1j * mode * self.x)
        shifted = shift_values(values, self.grid, displacement)
        np.testing.assert_allclose(shifted, np.exp(1j * mode * (self.x + displacement)), atol=1e-11)

    def test_second_derivative_of_gaussian(self):
        grid = make_grid(256, 40.0)
        d = grid.points - 20.0
        gaussian = np.exp(-d ** 2 / 2.0)
        expected = (d ** 2 - 1.0) * gaussian
        self.assertLessEqual(float(np.max(np.abs(derivative_values(gaussian, grid, 2) - expected))), 1e-10)


class FilterTestCase(unittest.TestCase):
    """Exponential low-pass filter and circular convolution"""

    def setUp(self):
        self.grid = make_grid(256, 40.0)

    def test_filter_profile(self):
        k = wavenumber_array(self.grid)
        sigma = exponential_filter(self.grid, 10.0)
        self.assertEqual(sigma[0], 1.0)
        half = self.grid.n // 2
        np.testing.assert_allclose(sigma[1:half], sigma[::-1][:half - 1])
        self.assertTrue(np.all(sigma[np.abs(k) >= 10.0] <= np.exp(-36.0)))
        with self.assertRaises(ValueError):
            exponential_filter(self.grid, 0.0)

    def test_peak_gain(self):
        x = np.linspace(0.0, 1.0, 200001)
        self.assertAlmostEqual(filter_peak_gain(), float(np.max(x ** 2 * np.exp(-36.0 * x ** 8))), places=8)

    def test_filter_scales_fourier_mode(self):
        k = 2 * np.pi * 3 / self.grid.length
        values = np.cos(k * self.grid.points)
        filtered = convolve_values(values, exponential_filter(self.grid, 1.0))
        np.testing.assert_allclose(filtered, np.exp(-36.0 * k ** 8) * values, atol=1e-14)

    def test_identity_transfer(self):
        values = np.cos(self.grid.points)
        np.testing.assert_allclose(convolve_values(values, np.ones(self.grid.n)), values, atol=1e-14)


if __name__ == '__main__':
    unittest.main()
