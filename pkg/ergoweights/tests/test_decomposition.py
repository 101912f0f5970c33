# -*- coding: utf-8 -*-
# Author: ergoweights developers

import unittest
import numpy as np
from ergoweights.base.errors import ThresholdError
from ergoweights.harness.oracles import reference_decomposition
from ergoweights.model.decomposition import CZSelection, SelectedInterval, \
    decompose, verify_selection
from ergoweights.model.dyadic import IDENTITY, IntegerInterval, \
    build_prefix_sums, weighted_average
from ergoweights.tests.testing_data import CreateTestingData


class Test(unittest.TestCase):

    def setUp(self):
        self.data = CreateTestingData()

    def test_decompose_constant(self):
        """Tests that a constant weight selects nothing
        """
        ps = build_prefix_sums(self.data.constant)
        window = IntegerInterval(3, 9)
        selection = decompose(ps, window, 3.)
        self.assertEqual(selection.selected, ())
        self.assertEqual(selection.residual, tuple(range(3, 12)))

    def test_decompose_spike(self):
        """Tests the decomposition of a single spike
        """
        ps = build_prefix_sums(self.data.spike)
        selection = decompose(ps, IntegerInterval(0, 4), 3.)
        self.assertEqual(len(selection.selected), 1)
        selected = selection.selected[0]
        self.assertEqual(selected.interval, IntegerInterval(0, 2))
        self.assertAlmostEqual(selected.average, 4.5)
        self.assertAlmostEqual(selected.expansion, 2.)
        self.assertEqual(selection.residual, (2, 3))
        self.assertEqual(selection.to_dict(),
                         {"lambda": 3., "window": [0, 4],
                          "selected": [{"interval": [0, 2], "avg": 4.5,
                                        "expansion": 2.}],
                          "residual": [2, 3]})
        self.assertTrue(verify_selection(ps, selection).passed)

    def test_threshold_errors(self):
        """Tests the preconditions of the decomposition
        """
        ps = build_prefix_sums(self.data.spike)
        with self.assertRaises(ThresholdError):
            decompose(ps, IntegerInterval(0, 4), 2.75)
        with self.assertRaises(ThresholdError):
            decompose(ps, IntegerInterval(0, 1), 10.)

    def test_verify_forced_failures(self):
        """Tests that broken selections are detected
        """
        ps = build_prefix_sums(self.data.spike)
        window = IntegerInterval(0, 4)
        residual_only = CZSelection(3., window, (), (0, 1, 2, 3))
        check = verify_selection(ps, residual_only)
        self.assertFalse(check.checks["residual_bound"].passed)
        self.assertEqual(check.checks["residual_bound"].location, 0)

        low = CZSelection(3., window,
                          (SelectedInterval(IntegerInterval(2, 2), 1., 2.),),
                          (0, 1))
        check = verify_selection(ps, low)
        self.assertFalse(check.passed)
        self.assertIn("lower_bound", check.failed())
        self.assertEqual(check.checks["lower_bound"].location, [2, 2])

    def test_verify_out_of_sample(self):
        """Tests that intervals and indices beyond the sample fail checks
        instead of raising
        """
        ps = build_prefix_sums(self.data.spike)
        beyond = SelectedInterval(IntegerInterval(3, 2), 5., 2.)
        outside = CZSelection(3., IntegerInterval(0, 4), (beyond,), (1, 2, 7))
        check = verify_selection(ps, outside)
        self.assertFalse(check.passed)
        self.assertEqual(check.checks["disjoint"].location, [3, 2])
        self.assertFalse(check.checks["residual_complement"].passed)
        self.assertEqual(check.checks["residual_bound"].location, 7)
        self.assertEqual(check.checks["residual_bound"].message,
                         "index outside the sample")

        wide = CZSelection(3., IntegerInterval(2, 4), (), (2, 3))
        check = verify_selection(ps, wide)
        self.assertEqual(check.checks["disjoint"].message,
                         "window outside the sample")

    def test_random_selections(self):
        """Tests the selection invariants on random weighted samples
        """
        rng = np.random.default_rng(3)
        for _ in range(40):
            n = int(rng.integers(2, 60))
            sample = CreateTestingData.random_sample(rng, n, weighted=True)
            ps = build_prefix_sums(sample)
            k = int(rng.integers(2, n + 1))
            window = IntegerInterval(int(rng.integers(0, n - k + 1)), k)
            lam = weighted_average(ps.with_transforms([IDENTITY]), window) \
                * rng.uniform(1.01, 3.)
            selection = decompose(ps, window, lam)
            check = verify_selection(ps, selection)
            self.assertTrue(check.passed, check.to_dict())
            for s in selection.selected:
                self.assertLessEqual(s.expansion, 3. * (1 + 1e-12)
                                     * max(sample.g) / min(sample.g))

    def test_reference_decomposition(self):
        """Tests the decomposition against the plain list implementation
        """
        rng = np.random.default_rng(4)
        for _ in range(40):
            n = int(rng.integers(2, 50))
            sample = CreateTestingData.random_sample(rng, n)
            ps = build_prefix_sums(sample)
            window = IntegerInterval(0, n)
            lam = float(np.mean(sample.omega)) * rng.uniform(1.01, 4.)
            selection = decompose(ps, window, lam)
            selected, residual = reference_decomposition(sample.omega,
                                                         window, lam)
            self.assertEqual([tuple(s.interval.to_list())
                              for s in selection.selected], selected)
            self.assertEqual(list(selection.residual), residual)


if __name__ == "main":
    unittest.main()
