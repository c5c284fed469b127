# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.

import math
import unittest

import numpy as np

from oblearn import benchfn
from oblearn.benchfn import Dataset, DomainBox
from oblearn.exceptions import DomainError, UnknownFunctionError, UsageError


class RegistryTests(unittest.TestCase):

    def test_ids(self):
        self.assertEqual(len(benchfn.FUNCTION_IDS), 11)
        self.assertEqual(len(benchfn.MONOTONE_IDS), 8)
        self.assertEqual(list(benchfn.OPTIMIZATION_IDS), ["ackley", "bulkin", "booth"])

    def test_unknown(self):
        with self.assertRaises(UnknownFunctionError) as ctx:
            benchfn.get("nope")
        self.assertIn("square", ctx.exception.known)
        self.assertIn("booth", str(ctx.exception))

    def test_domains(self):
        self.assertEqual(benchfn.get_domain("bulkin"), DomainBox((-15, -3), (-5, 3)))
        self.assertEqual(benchfn.get_domain("ackley"), DomainBox((-35, -35), (35, 35)))
        self.assertEqual(benchfn.get_domain("square"), DomainBox([0], [10]))


class EvaluateTests(unittest.TestCase):

    def test_known_values(self):
        self.assertEqual(benchfn.evaluate("cubic_shift", 1), 1000.0)
        self.assertEqual(benchfn.evaluate("linear2x", (2,)), 4.0)
        self.assertEqual(benchfn.evaluate("cubic_poly", 2), 13.0)
        self.assertAlmostEqual(benchfn.evaluate("log_shift", 0), math.log(3))
        self.assertAlmostEqual(benchfn.evaluate("sqrt_shift_third", 8), 1.0)
        self.assertAlmostEqual(benchfn.evaluate("pow32", 4), 8.0)

    def test_optima_are_zero(self):
        for name in benchfn.OPTIMIZATION_IDS:
            self.assertEqual(benchfn.evaluate(name, benchfn.minimizer(name)), 0.0)

    def test_optimization_functions_nonnegative(self):
        for name in benchfn.OPTIMIZATION_IDS:
            data = benchfn.sample(name, 2500, mode=benchfn.UNIFORM, seed=1)
            self.assertTrue(np.all(data.ys >= 0))

    def test_outside_domain(self):
        self.assertRaises(DomainError, benchfn.evaluate, "square", 11)
        self.assertRaises(DomainError, benchfn.evaluate, "bulkin", (0, 0))

    def test_arity_mismatch(self):
        self.assertRaises(UsageError, benchfn.evaluate, "booth", 1)
        self.assertRaises(UsageError, benchfn.evaluate, "square", (1, 2))

    def test_minimizer_1d(self):
        self.assertRaises(UsageError, benchfn.minimizer, "square")


class SampleTests(unittest.TestCase):

    def test_grid(self):
        data = benchfn.sample("square", 11)
        np.testing.assert_array_equal(data.xs[:, 0], np.arange(11.0))
        np.testing.assert_array_equal(data.ys, np.arange(11.0) ** 2)
        self.assertEqual(data.box, benchfn.get_domain("square"))

    def test_grid_endpoints(self):
        data = benchfn.sample("sqrt", 1000)
        self.assertEqual(len(data), 1000)
        self.assertEqual(data.xs[0, 0], 0.0)
        self.assertEqual(data.xs[-1, 0], 10.0)

    def test_grid_2d(self):
        data = benchfn.sample("booth", 9)
        self.assertEqual(data.xs.shape, (9, 2))
        np.testing.assert_array_equal(data.xs[1], [-10.0, 0.0])
        self.assertRaises(UsageError, benchfn.sample, "booth", 10)

    def test_uniform_deterministic(self):
        a = benchfn.sample("ackley", 100, mode=benchfn.UNIFORM, seed=5)
        b = benchfn.sample("ackley", 100, mode=benchfn.UNIFORM, seed=5)
        c = benchfn.sample("ackley", 100, mode=benchfn.UNIFORM, seed=6)
        self.assertEqual(a, b)
        self.assertNotEqual(a, c)
        self.assertTrue(a.box.contains_all(a.xs))

    def test_too_few(self):
        self.assertRaises(UsageError, benchfn.sample, "square", 1)

    def test_bad_mode(self):
        self.assertRaises(UsageError, benchfn.sample, "square", 10, mode="random")

    def test_box_override(self):
        data = benchfn.sample("square", 3, box=DomainBox([2], [4]))
        np.testing.assert_array_equal(data.ys, [4.0, 9.0, 16.0])


class MonotoneTests(unittest.TestCase):

    def test_registry_flags(self):
        for name in benchfn.MONOTONE_IDS:
            self.assertTrue(benchfn.is_strictly_monotone(name), name)
        for name in benchfn.OPTIMIZATION_IDS:
            self.assertFalse(benchfn.is_strictly_monotone(name), name)


class DomainTests(unittest.TestCase):

    def tearDown(self):
        benchfn.reset_domains()

    def test_set_and_reset(self):
        benchfn.set_domain("square", ([1], [2]))
        self.assertEqual(benchfn.get_domain("square"), DomainBox([1], [2]))
        benchfn.reset_domains()
        self.assertEqual(benchfn.get_domain("square"), DomainBox([0], [10]))

    def test_temp_domain(self):
        with benchfn.temp_domain("square", DomainBox([0], [20])) as box:
            self.assertEqual(box.upper, (20.0,))
            self.assertEqual(benchfn.evaluate("square", 15), 225.0)
        self.assertRaises(DomainError, benchfn.evaluate, "square", 15)

    def test_arity_checked(self):
        self.assertRaises(UsageError, benchfn.set_domain, "booth", ([0], [1]))


class DomainBoxTests(unittest.TestCase):

    def test_invalid(self):
        self.assertRaises(UsageError, DomainBox, [1], [1])
        self.assertRaises(UsageError, DomainBox, [0, 0], [1])

    def test_bounding_widens_flat(self):
        box = DomainBox.bounding([[1.0, 2.0], [3.0, 2.0]])
        self.assertEqual(box, DomainBox((1, 1.5), (3, 2.5)))

    def test_clip(self):
        box = DomainBox((0, 0), (1, 1))
        np.testing.assert_array_equal(box.clip([[2, -1]]), [[1, 0]])


class DatasetTests(unittest.TestCase):

    def test_mismatch(self):
        self.assertRaises(UsageError, Dataset, [1, 2, 3], [1, 2])

    def test_too_small(self):
        self.assertRaises(UsageError, Dataset, [1], [1])

    def test_outside_box(self):
        self.assertRaises(DomainError, Dataset, [1, 5], [1, 2], DomainBox([0], [4]))

    def test_copies_input(self):
        xs = np.array([[1.0], [2.0]])
        data = Dataset(xs, [1, 2])
        xs[0, 0] = 99
        self.assertEqual(data.xs[0, 0], 1.0)
        self.assertFalse(data.xs.flags.writeable)


if __name__ == "__main__":
    unittest.main()
