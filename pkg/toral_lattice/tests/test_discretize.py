# -*- coding:utf-8 -*-

import math

import numpy as np
from django.test import SimpleTestCase

from toral_lattice.discretize import (OBSERVABLES, ConstantObservable,
                                      DiagonalObservable, IndicatorObservable,
                                      Observable, TrigObservable,
                                      crossing_time, dediscretize_array,
                                      dediscretize_aw, discretize_aw,
                                      egorov_defect, egorov_profile,
                                      egorov_sweep, kernel, kernel_array,
                                      prop41_defect,
                                      verify_dynamical_localization,
                                      verify_orbit_shadowing)
from toral_lattice.exceptions import ThresholdUnmet
from toral_lattice.geometry import Rectangle
from toral_lattice.lattice import (LatticeConfig, build_permutation,
                                   round_array, step_array)
from toral_lattice.maps import ToralMatrix, classify
from toral_lattice.tests.utils import SettingsTestCase

CAT = ToralMatrix(2, 1, 1, 1)
SHEAR = ToralMatrix(1, 1, 0, 1)
ROTATION = ToralMatrix(0, 1, -1, 0)


def first_coordinate(points):
    return points[..., 0]


class TestObservables(SimpleTestCase):
    def test_bound_is_enforced(self):
        f = Observable(lambda points: 2 * points[..., 0], bound=1.0, name="2x1")
        f(np.array([[0.25, 0.0]]))
        self.assertRaises(ValueError, f, np.array([[0.75, 0.0]]))
        self.assertEqual(str(f), "2x1")

    def test_presets(self):
        for name, factory in OBSERVABLES.items():
            f = factory()
            self.assertIsInstance(f, Observable, name)
            self.assertLessEqual(float(np.max(np.abs(f(np.random.default_rng(0).random((100, 2)))))), f.bound)
        self.assertRaises(ValueError, TrigObservable, kind="tan")

    def test_linear_cell_average(self):
        f = Observable(first_coordinate, bound=1.0)
        averages = f.cell_averages(np.array([[1, 0], [2, 3]]), 4, quadrature=4)
        self.assertAlmostEqual(averages[0], 0.25, places=12)
        self.assertAlmostEqual(averages[1], 0.5, places=12)
        self.assertRaises(ValueError, f.cell_averages, np.array([[0, 0]]), 4, 0)


class TestDiscretization(SimpleTestCase):
    def test_constant(self):
        cfg = LatticeConfig(6)
        X = discretize_aw(ConstantObservable(1.0), cfg)
        self.assertEqual(X.entries.tolist(), [1.0] * 36)
        self.assertEqual(X.mean(), 1.0)
        self.assertEqual(DiagonalObservable.identity(cfg).entries.tolist(), X.entries.tolist())

    def test_indicator_is_exact(self):
        X = discretize_aw(IndicatorObservable(Rectangle((0, "1/2"), (0, 1))), LatticeConfig(4))
        self.assertEqual(sorted(set(X.entries.tolist())), [0.0, 0.5, 1.0])
        self.assertEqual(X.at_cells(np.array([[0, 3], [1, 0], [2, 2], [3, 1]])).tolist(), [0.5, 1.0, 0.5, 0.0])
        self.assertEqual(X.mean(), 0.5)

    def test_mean_matches_integral(self):
        cfg = LatticeConfig(16)
        for name, factory in OBSERVABLES.items():
            f = factory()
            self.assertAlmostEqual(discretize_aw(f, cfg, quadrature=2).mean(), f.integral, places=12, msg=name)

    def test_dediscretize(self):
        cfg = LatticeConfig(10)
        X = DiagonalObservable(cfg, np.arange(100.0))
        self.assertEqual(dediscretize_aw(X, (0.3, 0.7)), 37.0)
        self.assertEqual(dediscretize_aw(X, (0.96, 0.04)), 0.0)
        self.assertRaises(ValueError, DiagonalObservable, cfg, np.arange(99.0))

    def test_dediscretize_array(self):
        cfg = LatticeConfig(13)
        X = discretize_aw(TrigObservable(1, 1), cfg)
        points = np.random.default_rng(4).random((200, 2))
        values = dediscretize_array(X, points)
        for x, value in zip(points, values):
            self.assertEqual(dediscretize_aw(X, x), value)
        # evolving the table moves the step function like the lattice states
        U = build_permutation(CAT, cfg)
        for j in range(4):
            cells = step_array(CAT, round_array(points, 13), 13, j)
            self.assertEqual(dediscretize_array(X.evolve(U.power(j)), points).tolist(), X.at_cells(cells).tolist())

    def test_evolution_follows_the_permutation(self):
        cfg = LatticeConfig(5)
        X = DiagonalObservable(cfg, np.arange(25.0))
        U = build_permutation(CAT, cfg)
        # (Theta X) at (1, 1) reads X at U(1, 1) = (3, 2)
        self.assertEqual(X.evolve(U).at_cells(np.array([1, 1])), 17.0)
        self.assertEqual(X.evolve(U).mean(), X.mean())


class TestKernel(SimpleTestCase):
    def test_examples(self):
        cfg = LatticeConfig(5)
        self.assertEqual(kernel(CAT, cfg, 1, (0.2, 0.2), (0.6, 0.4)), 1)
        self.assertEqual(kernel(CAT, cfg, 1, (0.2, 0.2), (0.0, 0.0)), 0)
        self.assertEqual(kernel(CAT, cfg, 0, (0.2, 0.2), (0.21, 0.19)), 1)

    def test_completeness(self):
        rng = np.random.default_rng(3)
        for N in (7, 64, 1000):
            cfg = LatticeConfig(N)
            cells = np.stack(np.meshgrid(np.arange(N), np.arange(N), indexing="ij"), axis=-1).reshape(-1, 2) / N
            for x in rng.random((3, 2)):
                for n in (0, 3):
                    values = kernel_array(CAT, cfg, n, np.broadcast_to(x, cells.shape), cells)
                    self.assertEqual(int(values.sum()), 1, (N, n))
                    self.assertEqual(int(values.max()), 1)
                    self.assertEqual(int(values.min()), 0)


class TestEgorov(SettingsTestCase):
    def test_constant_has_no_defect(self):
        profile = egorov_profile(CAT, LatticeConfig(16), ConstantObservable(1.0), 5, 32)
        self.assertEqual(profile, [0.0] * 6)

    def test_discretization_error(self):
        defect = egorov_defect(CAT, LatticeConfig(100), TrigObservable(1, 0), 0, 200)
        self.assertGreater(defect, 0)
        self.assertLess(defect, 0.015)

    def test_discretization_error_shrinks_with_N(self):
        defects = [egorov_defect(CAT, LatticeConfig(N), TrigObservable(1, 0), 0, 2 * N) for N in (16, 32, 64, 128)]
        for coarse, fine in zip(defects, defects[1:]):
            self.assertLess(fine, 0.6 * coarse)

    def test_breaking(self):
        profile = egorov_profile(CAT, LatticeConfig(1024), TrigObservable(1, 0), 12, 1024)
        for j in range(3):
            self.assertLess(profile[j], 0.05)
        self.assertGreater(profile[12], 0.1)
        self.assertEqual(len(profile), 13)

    def test_plateau_after_breaking(self):
        # decorrelated: |f|^2 + |table|^2 = 1/2 + 1/2
        profile = egorov_profile(CAT, LatticeConfig(1024), TrigObservable(1, 0), 16, 1024)
        for j in range(10, 17):
            self.assertLess(abs(profile[j] - 1.0), 0.1, j)

    def test_seeded_mesh(self):
        cfg = LatticeConfig(64)
        f = TrigObservable(1, 0)
        self.settings_manager.set(TORAL_LATTICE_CHUNK_SIZE=1000, TORAL_LATTICE_THREADS=1)
        single = egorov_profile(CAT, cfg, f, 6, 128, seed=3)
        self.settings_manager.set(TORAL_LATTICE_THREADS=4)
        self.assertEqual(egorov_profile(CAT, cfg, f, 6, 128, seed=3), single)
        other = egorov_profile(CAT, cfg, f, 6, 128, seed=4)
        self.assertNotEqual(other, single)
        for a, b in zip(single, other):
            self.assertLess(abs(a - b), 0.1 * max(a, b))

    def test_grid_must_resolve_cells(self):
        self.assertRaises(ValueError, egorov_profile, CAT, LatticeConfig(16), TrigObservable(), 1, 8)
        self.assertRaises(ValueError, egorov_profile, CAT, LatticeConfig(16), TrigObservable(), 1, 16, 0)

    def test_negative_times_use_the_inverse(self):
        cfg = LatticeConfig(64)
        f = TrigObservable(1, 0)
        self.assertEqual(
            egorov_profile(CAT, cfg, f, -3, 64), egorov_profile(CAT.inverse(), cfg, f, 3, 64)
        )

    def test_kernel_integral_matches_table(self):
        cfg = LatticeConfig(32)
        f = TrigObservable(1, 1)
        for quadrature in (1, 2):
            for n in (0, 2, 5, 9):
                self.assertAlmostEqual(
                    prop41_defect(CAT, cfg, f, n, 64, quadrature=quadrature),
                    prop41_defect(CAT, cfg, f, n, 64, quadrature=quadrature, direct=True),
                    places=12,
                )
        shear = prop41_defect(SHEAR, LatticeConfig(16), f, 3, 16, quadrature=3, direct=True)
        self.assertAlmostEqual(shear, prop41_defect(SHEAR, LatticeConfig(16), f, 3, 16, quadrature=3), places=12)

    def test_crossing_time(self):
        self.assertEqual(crossing_time([0.01, 0.1, 1.0], 0.1), 1.0)
        self.assertAlmostEqual(crossing_time([0.01, 0.05, 0.2], 0.1), 1.5, places=12)
        self.assertAlmostEqual(crossing_time([0.01, 0.02, 0.2, 1.0], 0.1), 1 + math.log(5) / math.log(10), places=12)
        self.assertEqual(crossing_time([0.0, 0.5], 0.1), 1.0)
        self.assertEqual(crossing_time([0.5], 0.1), 0.0)
        self.assertIsNone(crossing_time([0.01, 0.02], 0.1))

    def test_sweep(self):
        self.settings_manager.set(TORAL_LATTICE_CHUNK_SIZE=2 ** 16)
        result = egorov_sweep(CAT, TrigObservable(1, 0), [64, 256, 1024], 8)
        self.assertEqual(len(result["rows"]), 27)
        self.assertEqual(result["transitions"], {64: 2, 256: 4, 1024: 5})
        for N, j in result["transitions"].items():
            self.assertGreater(result["crossings"][N], j - 1)
            self.assertLessEqual(result["crossings"][N], j)
        self.assertGreater(result["slope"], 0)
        self.assertAlmostEqual(result["expected_slope"], 1 / classify(CAT).xi, places=12)
        rotation = egorov_sweep(ROTATION, TrigObservable(1, 0), [16], 2)
        self.assertIsNone(rotation["expected_slope"])
        self.assertIsNone(rotation["slope"])

    def test_breaking_time_grows_like_log_N(self):
        self.settings_manager.set(TORAL_LATTICE_CHUNK_SIZE=2 ** 16)
        result = egorov_sweep(CAT, TrigObservable(1, 0), [256, 1024, 4096], 8)
        self.assertEqual(result["transitions"], {256: 4, 1024: 5, 4096: 7})
        xi = classify(CAT).xi
        self.assertLess(abs(result["slope"] * xi - 1), 0.3)
        for j, N, defect in result["rows"]:
            if j <= 0.4 * math.log(N) / xi:
                self.assertLess(defect, 0.05, (j, N))


class TestLocalization(SettingsTestCase):
    def test_above_threshold(self):
        for T, N, n in ((CAT, 64, 2), (ROTATION, 16, 7), (SHEAR, 40, 3)):
            report = verify_dynamical_localization(T, LatticeConfig(N), n, 2.0, 0.1, 20000, 11)
            self.assertTrue(report["premise_holds"], T)
            self.assertGreater(report["counts"]["tested"], 15000)
            self.assertEqual(report["counts"]["violations"], 0, T)

    def test_below_threshold(self):
        report = verify_dynamical_localization(CAT, LatticeConfig(8), 4, 2.0, 0.1, 20000, 11)
        self.assertFalse(report["premise_holds"])
        self.assertFalse(report["within_breaking_time"])
        self.assertGreater(report["counts"]["violations"], 0)

    def test_report(self):
        report = verify_dynamical_localization(CAT, LatticeConfig(64), 2, 2.0, 0.1, 1000, 5)
        self.assertEqual(report["operation"], "verify_dynamical_localization")
        self.assertEqual(report["seed"], 5)
        self.assertEqual(report["family"], "hyperbolic")
        self.assertTrue(report["within_breaking_time"])
        self.assertEqual(report["parameters"]["matrix"], [2, 1, 1, 1])

    def test_threads_do_not_change_counts(self):
        self.settings_manager.set(TORAL_LATTICE_CHUNK_SIZE=1000, TORAL_LATTICE_THREADS=1)
        single = verify_dynamical_localization(CAT, LatticeConfig(8), 4, 2.0, 0.1, 5000, 2)
        self.settings_manager.set(TORAL_LATTICE_THREADS=3)
        self.assertEqual(verify_dynamical_localization(CAT, LatticeConfig(8), 4, 2.0, 0.1, 5000, 2), single)


class TestShadowing(SimpleTestCase):
    def test_shadowing(self):
        for T, N, n in ((CAT, 10000, 3), (SHEAR, 1000, 10), (ROTATION, 16, 10)):
            report = verify_orbit_shadowing(T, LatticeConfig(N), n, 5000, 17)
            self.assertLessEqual(report["max_ratio"], 1.0, T)
            self.assertEqual(report["counts"]["exceeding"], 0)
            self.assertEqual(report["counts"]["samples"], 5000)

    def test_below_threshold(self):
        self.assertRaises(ThresholdUnmet, verify_orbit_shadowing, CAT, LatticeConfig(20), 3, 100, 1)
