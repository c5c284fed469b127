# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.

import unittest

import numpy as np

from oblearn import benchfn, opposition, signals
from oblearn.benchfn import Dataset, DomainBox
from oblearn.exceptions import DomainError, InvalidSchemeError, UsageError
from oblearn.opposition import T1, T2, T3, MinedSet, OutputStats


def _random_stats(rng):
    lo, hi = np.sort(rng.uniform(-50, 50, size=2))
    return OutputStats(lo, hi, rng.uniform(lo, hi))


class SchemeTests(unittest.TestCase):

    def test_parse(self):
        self.assertEqual(opposition.parse_scheme("T2"), T2)
        self.assertEqual(opposition.parse_scheme(" t3 "), T3)
        self.assertEqual(opposition.parse_scheme(0), T1)
        self.assertRaises(InvalidSchemeError, opposition.parse_scheme, "t4")
        self.assertRaises(InvalidSchemeError, opposition.parse_scheme, 3)
        self.assertRaises(InvalidSchemeError, opposition.parse_scheme, True)


class OutputStatsTests(unittest.TestCase):

    def test_simple(self):
        self.assertEqual(opposition.output_stats([0, 10, 20]), (0, 20, 10))

    def test_constant(self):
        self.assertEqual(opposition.output_stats([3.5, 3.5]), (3.5, 3.5, 3.5))

    def test_linear_grid(self):
        stats = opposition.output_stats(benchfn.sample("linear2x", 1000))
        self.assertEqual((stats.y_min, stats.y_max), (0.0, 20.0))
        self.assertAlmostEqual(stats.y_mean, 10.0, places=12)

    def test_empty(self):
        self.assertRaises(UsageError, opposition.output_stats, [])

    def test_order_enforced(self):
        self.assertRaises(UsageError, OutputStats, 0, 10, 11)


class OppositeValueTests(unittest.TestCase):

    def test_t1(self):
        self.assertEqual(opposition.opposite_value(4, OutputStats(0, 20, 10), T1), 16)

    def test_t1_midpoint(self):
        stats = OutputStats(-3, 7, 0)
        self.assertEqual(opposition.opposite_value(2, stats, T1), 2)

    def test_t2(self):
        self.assertEqual(opposition.opposite_value(4, OutputStats(0, 10, 5), T2), 9)

    def test_t2_wraps(self):
        # (8 + 5) mod 10
        self.assertEqual(opposition.opposite_value(8, OutputStats(0, 10, 5), T2), 3)

    def test_t2_nonpositive_max(self):
        stats = OutputStats(-10, -2, -5)
        values, fallback = opposition.opposite_values([-4.0], stats, T2)
        self.assertEqual(values[0], -8.0)
        self.assertTrue(fallback[0])

    def test_t3_mean(self):
        stats = OutputStats(0, 10, 3.7)
        self.assertEqual(opposition.opposite_value(3.7, stats, T3), 3.7)

    def test_t3_fallback(self):
        stats = OutputStats(0, 10, 2)
        values, fallback = opposition.opposite_values([8.0, 1.0], stats, T3)
        np.testing.assert_array_equal(values, [2.0, 3.0])
        np.testing.assert_array_equal(fallback, [True, False])


class SchemeAlgebraTests(unittest.TestCase):
    """Randomized properties over 10^4 (stats, value) cases each."""

    def setUp(self):
        rng = np.random.default_rng(2024)
        self.cases = []
        for _ in range(100):
            stats = _random_stats(rng)
            values = rng.uniform(stats.y_min, stats.y_max, size=100)
            self.cases.append((stats, values))

    def test_t1_involution(self):
        for stats, values in self.cases:
            once, _ = opposition.opposite_values(values, stats, T1)
            twice, _ = opposition.opposite_values(once, stats, T1)
            np.testing.assert_allclose(twice, values, rtol=0, atol=1e-12)

    def test_t1_order_reversal(self):
        for stats, values in self.cases:
            ordered = np.unique(values)
            opposites, _ = opposition.opposite_values(ordered, stats, T1)
            self.assertTrue(np.all(np.diff(opposites) < 0))

    def test_t3_mean_fixed_point(self):
        for stats, _ in self.cases:
            self.assertEqual(opposition.opposite_value(stats.y_mean, stats, T3),
                             stats.y_mean)

    def test_t3_involution_in_range(self):
        for stats, values in self.cases:
            once, fallback = opposition.opposite_values(values, stats, T3)
            twice, _ = opposition.opposite_values(once, stats, T3)
            np.testing.assert_allclose(twice[~fallback], values[~fallback],
                                       rtol=0, atol=1e-12)

    def test_type1_input_involution(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            lower = rng.uniform(-50, 0, size=2)
            box = DomainBox(lower, lower + rng.uniform(0.1, 50, size=2))
            for x in rng.uniform(box.lower_array, box.upper_array, size=(100, 2)):
                once = opposition.type1_opposite_input(x, box)
                self.assertTrue(box.contains(once))
                twice = opposition.type1_opposite_input(once, box)
                np.testing.assert_allclose(twice, x, rtol=0, atol=1e-12)

    def test_fallback_range_safety(self):
        for stats, values in self.cases:
            for scheme in opposition.SCHEMES:
                result, _ = opposition.opposite_values(values, stats, scheme)
                self.assertTrue(np.all(result >= stats.y_min))
                self.assertTrue(np.all(result <= stats.y_max))


class TypeOneInputTests(unittest.TestCase):

    def test_reflect(self):
        box = DomainBox([0], [10])
        np.testing.assert_array_equal(opposition.type1_opposite_input(3, box), [7])
        np.testing.assert_array_equal(opposition.type1_opposite_input(5, box), [5])
        once = opposition.type1_opposite_input(3, box)
        np.testing.assert_array_equal(opposition.type1_opposite_input(once, box), [3])

    def test_outside(self):
        self.assertRaises(DomainError, opposition.type1_opposite_input, 11,
                          DomainBox([0], [10]))


class NearestTests(unittest.TestCase):

    def test_nearest(self):
        self.assertEqual(opposition.nearest_index([0, 10, 20], 16), 2)
        self.assertEqual(opposition.nearest_index([0, 10, 20], 10), 1)

    def test_tie_break(self):
        self.assertEqual(opposition.nearest_index([5, 5], 5), 0)
        self.assertEqual(opposition.nearest_index([0, 10], 5), 0)

    def test_empty(self):
        self.assertRaises(UsageError, opposition.nearest_index, [], 1)

    def test_blocks_match_brute_force(self):
        rng = np.random.default_rng(3)
        ys = rng.integers(0, 50, size=300).astype(float)
        targets = rng.uniform(0, 50, size=1000)
        expected = [int(np.argmin(np.abs(ys - t))) for t in targets]
        np.testing.assert_array_equal(opposition.nearest_indices(ys, targets), expected)


class MineTests(unittest.TestCase):

    def test_linear_grid(self):
        data = benchfn.sample("linear2x", 11)
        mined = opposition.mine(data, T1)
        self.assertEqual(len(mined), 11)
        np.testing.assert_array_equal(mined.inputs, data.xs)
        self.assertEqual(mined.targets[2], 16.0)
        self.assertEqual(mined.opposites[2, 0], 8.0)
        np.testing.assert_array_equal(mined.opposites[:, 0], 10 - data.xs[:, 0])

    def test_midpoint_fixed(self):
        mined = opposition.mine(benchfn.sample("linear2x", 11), T1)
        self.assertEqual(mined.opposites[5, 0], 5.0)

    def test_square_endpoint(self):
        mined = opposition.mine(benchfn.sample("square", 1001), T1)
        self.assertEqual(mined.targets[0], 100.0)
        self.assertEqual(mined.opposites[0, 0], 10.0)

    def test_nearest_match_and_selection(self):
        rng = np.random.default_rng(11)
        xs = rng.uniform(0, 10, size=(60, 1))
        data = Dataset(xs, np.sin(xs[:, 0]) * xs[:, 0])
        for scheme in opposition.SCHEMES:
            mined = opposition.mine(data, scheme)
            for i in range(len(mined)):
                best = np.min(np.abs(data.ys - mined.targets[i]))
                self.assertEqual(abs(mined.achieved[i] - mined.targets[i]), best)
                self.assertTrue(np.any(np.all(data.xs == mined.opposites[i], axis=1)))
            self.assertGreaterEqual(mined.mean_mismatch(), 0.0)

    def test_two_dimensional(self):
        data = benchfn.sample("booth", 100, mode=benchfn.UNIFORM, seed=1)
        mined = opposition.mine(data, T1)
        self.assertEqual(mined.opposites.shape, (100, 2))
        self.assertEqual(mined.box, data.box)

    def test_fallback_signal(self):
        seen = []

        def on_fallback(index, scheme, value):
            seen.append(index)

        signals.connect(signals.FALLBACK, on_fallback)
        try:
            data = Dataset([0, 1, 2, 3], [0.0, 1.0, 2.0, 10.0])
            mined = opposition.mine(data, T3)
        finally:
            signals.disconnect(signals.FALLBACK, on_fallback)

        # y_mean = 3.25: 6.5 - v leaves [0, 10] only for v = 10.
        np.testing.assert_array_equal(mined.fallback, [False, False, False, True])
        self.assertEqual(seen, [3])
        self.assertEqual(mined.targets[3], 0.0)

    def test_empty_mined_set(self):
        self.assertRaises(UsageError, MinedSet, np.zeros((0, 1)), np.zeros((0, 1)),
                          [], [], [], T1, OutputStats(0, 1, 0.5))


if __name__ == "__main__":
    unittest.main()
