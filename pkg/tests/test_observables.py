import math
import unittest

import numpy as np

from ehrenlab.exceptions import SamplingError
from ehrenlab.models.dynamics import (
    DensityFunctionalModel, DoebnerGoldinModel, Kernel, KernelShape, LinearModel
)
from ehrenlab.models.grid import make_grid
from ehrenlab.models.potentials import (
    DensityCoupledPotential, GradientMode, HarmonicPotential, UniformPotential, ZeroPotential
)
from ehrenlab.models.records import ObservableRecord, TimeSeries
from ehrenlab.services.observables import (
    calibrate_fd_tolerance, centroid, convergence_order, dg_violation_term, ehrenfest_residual,
    energy, force, mean_velocity, momentum_law_defect, record, self_force, total_momentum,
    velocity_chain_defect
)
from ehrenlab.services.states import gaussian_packet, plane_wave


def synthetic_series(times, x, v, f, dg=None, mass=1.0):
    """Series built from closed-form observables"""
    records = []
    for i, t in enumerate(times):
        records.append(ObservableRecord(
            t=float(t), norm=1.0, x_mean=float(x[i]), v_mean=float(v[i]), p_total=mass * float(v[i]),
            force_full=float(f[i]), force_partial=float(f[i]),
            dg_violation=0.0 if dg is None else float(dg[i]), energy=None,
        ))
    return TimeSeries.from_records(records)


class SnapshotObservablesTestCase(unittest.TestCase):
    """Centroid, momentum, force, energy and the DG violation term"""

    def setUp(self):
        self.grid = make_grid(1024, 40.0)

    def test_centroid_velocity_momentum(self):
        psi = gaussian_packet(self.grid, 18.5, 0.9, k0=1.2)
        self.assertAlmostEqual(centroid(psi, self.grid), 18.5, places=10)
        self.assertAlmostEqual(mean_velocity(psi, self.grid, 2.0), 0.6, places=10)
        self.assertAlmostEqual(total_momentum(psi, self.grid, 2.0), 1.2, places=10)

    def test_uniform_force(self):
        psi = gaussian_packet(self.grid, 20.0, 1.0)
        self.assertAlmostEqual(force(psi, UniformPotential(f0=0.2)), 0.2, places=12)

    def test_harmonic_force(self):
        psi = gaussian_packet(self.grid, 21.0, 0.7)
        trap = HarmonicPotential(omega=1.5, center=20.0)
        self.assertAlmostEqual(force(psi, trap, mass=2.0), -2.0 * 2.25 * 1.0, places=9)

    def test_density_coupled_forces_differ(self):
        psi = gaussian_packet(self.grid, 21.0, 0.7)
        potential = DensityCoupledPotential(base=HarmonicPotential(omega=1.0, center=20.0), eta=0.5)
        full = force(psi, potential, GradientMode.FULL)
        partial = force(psi, potential, GradientMode.PARTIAL)
        self.assertGreater(abs(full - partial), 1e-3)

    def test_dg_violation_closed_form_for_cubic_phase(self):
        psi = gaussian_packet(self.grid, 20.0, 1.0, cubic_phase=0.05)
        violation = dg_violation_term(psi, self.grid, 1.0, 0.3)
        self.assertAlmostEqual(violation.value, -6 * 0.3 * 0.05, places=6)
        self.assertFalse(violation.node_flag)

    def test_dg_violation_vanishes_without_coupling(self):
        psi = gaussian_packet(self.grid, 20.0, 1.0, cubic_phase=0.05)
        self.assertEqual(dg_violation_term(psi, self.grid, 1.0, 0.0).value, 0.0)

    def test_plane_wave_energy(self):
        grid = make_grid(64, 10.0)
        psi = plane_wave(grid, 2)
        k = 2 * np.pi * 2 / 10.0
        self.assertAlmostEqual(energy(LinearModel(mass=0.5), psi, grid, ZeroPotential()), k ** 2, places=10)

    def test_local_functional_energy(self):
        grid = make_grid(64, 10.0)
        psi = plane_wave(grid, 0)
        model = DensityFunctionalModel(g=3.0, exponent=1.0)
        # uniform density 1/L: g rho^2 / 2 integrated over L
        self.assertAlmostEqual(energy(model, psi, grid, ZeroPotential()), 3.0 / (2 * 10.0), places=12)

    def test_kernel_functional_energy(self):
        grid = make_grid(64, 10.0)
        psi = plane_wave(grid, 0)
        model = DensityFunctionalModel(g=3.0, kernel=Kernel(KernelShape.EXPONENTIAL, 0.5))
        self.assertAlmostEqual(energy(model, psi, grid, ZeroPotential()), 3.0 / (2 * 10.0), places=12)

    def test_energy_undefined_for_doebner_goldin(self):
        psi = gaussian_packet(self.grid, 20.0, 1.0)
        self.assertIsNone(energy(DoebnerGoldinModel(coupling=0.1), psi, self.grid, ZeroPotential()))

    def test_self_force_vanishes(self):
        psi = gaussian_packet(self.grid, 20.0, 1.0, k0=0.3)
        self.assertLess(abs(self_force(DensityFunctionalModel(g=5.0, exponent=2.0), psi)), 1e-10)
        self.assertEqual(self_force(LinearModel(), psi), 0.0)

    def test_record(self):
        psi = gaussian_packet(self.grid, 20.0, 1.0, cubic_phase=0.05)
        model = DoebnerGoldinModel(coupling=0.3)
        sample = record(model, psi, ZeroPotential(), 0.25, step=5)
        self.assertEqual(sample.t, 0.25)
        self.assertEqual(sample.step, 5)
        self.assertIsNone(sample.energy)
        self.assertAlmostEqual(sample.norm, 1.0, places=12)
        self.assertEqual(sample.force_full, sample.force_partial)
        self.assertAlmostEqual(sample.dg_violation, -0.09, places=6)


class TimeSeriesDiagnosticsTestCase(unittest.TestCase):
    """Finite-difference residuals and their calibration"""

    def test_exact_newton_law(self):
        times = np.arange(11) * 0.1
        series = synthetic_series(times, times ** 2, 2 * times, np.full(11, 2.0))
        self.assertLess(ehrenfest_residual(series, 1.0).max_abs, 1e-12)
        self.assertLess(momentum_law_defect(series, 1.0).max_abs, 1e-12)
        self.assertLess(velocity_chain_defect(series).max_abs, 1e-12)
        self.assertEqual(len(ehrenfest_residual(series, 1.0)), 9)

    def test_residual_picks_the_force_column(self):
        times = np.arange(5) * 0.5
        records = [ObservableRecord(t=float(t), norm=1.0, x_mean=0.0, v_mean=0.0, p_total=0.0,
                                    force_full=1.0, force_partial=3.0, dg_violation=0.0, energy=None)
                   for t in times]
        series = TimeSeries.from_records(records)
        np.testing.assert_allclose(ehrenfest_residual(series, 1.0, GradientMode.FULL).values, -1.0)
        np.testing.assert_allclose(ehrenfest_residual(series, 1.0, GradientMode.PARTIAL).values, -3.0)

    def test_too_few_samples(self):
        times = np.array([0.0, 0.1])
        series = synthetic_series(times, times, times, times)
        with self.assertRaises(SamplingError):
            ehrenfest_residual(series, 1.0)
        with self.assertRaises(SamplingError):
            calibrate_fd_tolerance(series, lambda s: ehrenfest_residual(s, 1.0))

    def test_calibration_on_pure_truncation(self):
        h = 0.1
        times = np.arange(21) * h
        series = synthetic_series(times, -np.cos(times), np.sin(times), np.cos(times))
        calibration = calibrate_fd_tolerance(series, lambda s: ehrenfest_residual(s, 1.0))
        self.assertAlmostEqual(calibration.spacing, h)
        self.assertTrue(3.5 <= calibration.ratio <= 4.5)
        self.assertGreaterEqual(calibration.tolerance, calibration.max_residual)
        self.assertLess(calibration.extrapolated_defect, 1e-4)
        self.assertEqual(set(calibration.to_dict()),
                         {'tol_fd', 'C', 'h', 'halving_ratio', 'max_residual', 'extrapolated_defect'})

    def test_calibration_does_not_absorb_a_constant_defect(self):
        h = 0.1
        times = np.arange(21) * h
        series = synthetic_series(times, times, np.sin(times), np.cos(times) - 0.01)
        calibration = calibrate_fd_tolerance(series, lambda s: ehrenfest_residual(s, 1.0))
        self.assertLess(calibration.tolerance, 0.01)
        self.assertGreater(calibration.max_residual, calibration.tolerance)

    def test_convergence_order(self):
        self.assertAlmostEqual(convergence_order(16.0, 1.0), 4.0)
        self.assertTrue(math.isnan(convergence_order(0.0, 1.0)))

    def test_series_rejects_non_uniform_spacing(self):
        times = np.array([0.0, 0.1, 0.3])
        with self.assertRaises(SamplingError):
            synthetic_series(times, times, times, times)


if __name__ == '__main__':
    unittest.main()
