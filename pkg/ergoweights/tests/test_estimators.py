# -*- coding: utf-8 -*-
# Author: ergoweights developers

import unittest
import numpy as np
from ergoweights.analysis import ClassAnalyzer, ALL_CLASSES
from ergoweights.base.errors import ParameterError, UnsupportedModeError
from ergoweights.base.sample import OrbitSample
from ergoweights.harness.oracles import brute_force_oracle
from ergoweights.model.dyadic import IntegerInterval, build_prefix_sums
from ergoweights.model.estimators import ClassConstantReport, \
    am_curve, amhat_curve, ap_constant, avg_delta_curve, cf_check, \
    cf_exponent, count_le, doubling_constant, exp_constant, lambda_constant, \
    log_constant, med_constant, median, power_mean_curve, rh_constant, \
    sw_constant, window_value
from ergoweights.model.windows import WindowFamily
from ergoweights.tests.testing_data import CreateTestingData


class Test(unittest.TestCase):

    def setUp(self):
        self.data = CreateTestingData()
        self.family = WindowFamily()

    def test_ap_constant(self):
        """Tests the A_p constant
        """
        ps = build_prefix_sums(self.data.constant)
        for p in [1.5, 2., 3.]:
            self.assertAlmostEqual(ap_constant(ps, self.family, p).value, 1.)
        report = ap_constant(build_prefix_sums(self.data.pair), self.family,
                             2.)
        self.assertAlmostEqual(report.value, 1.5625)
        self.assertEqual(report.witness, IntegerInterval(0, 2))
        self.assertEqual(report.params["mode"], "weighted")
        with self.assertRaises(ParameterError):
            ap_constant(ps, self.family, 1.)

    def test_rh_constant(self):
        """Tests the reverse Hölder constant in both modes
        """
        ps = build_prefix_sums(self.data.constant)
        self.assertAlmostEqual(rh_constant(ps, self.family, 2.).value, 1.)
        ps = build_prefix_sums(self.data.pair_13)
        self.assertAlmostEqual(rh_constant(ps, self.family, 2.).value,
                               np.sqrt(5.) / 2.)
        ps = build_prefix_sums(self.data.weighted_pair)
        self.assertAlmostEqual(rh_constant(ps, self.family, 2.).value,
                               np.sqrt(7.) / 2.5)
        self.assertAlmostEqual(
            rh_constant(ps, self.family, 2., weighted=False).value,
            np.sqrt(5.) / 2.)

    def test_exp_sw_constants(self):
        """Tests the arithmetic/geometric and SW constants
        """
        ps = build_prefix_sums(self.data.pair)
        self.assertAlmostEqual(exp_constant(ps, self.family).value, 1.25)
        report = sw_constant(ps, self.family, s_grid=(.5,))
        self.assertAlmostEqual(report.value, 2.5 / 2.25)
        self.assertEqual(report.curve["s"], [.5])
        ps = build_prefix_sums(self.data.constant)
        self.assertAlmostEqual(exp_constant(ps, self.family).value, 1.)
        report = sw_constant(ps, self.family)
        np.testing.assert_almost_equal(report.curve["value"], np.ones(5))

        rng = np.random.default_rng(5)
        sample = CreateTestingData.random_sample(rng, 30)
        ps = build_prefix_sums(sample)
        exp = exp_constant(ps, self.family).value
        self.assertGreaterEqual(exp, 1.)
        # power means decrease to the geometric mean as s -> 0
        means, geometric = power_mean_curve(ps, IntegerInterval(0, 30),
                                            (.5, .1, 1e-3))
        self.assertTrue(np.all(np.diff(means) < 0))
        self.assertAlmostEqual(means[-1], geometric, places=2)
        self.assertLessEqual(sw_constant(ps, self.family).value,
                             exp * (1. + 1e-9))

        ps = build_prefix_sums(self.data.weighted_pair)
        for estimator in [exp_constant, sw_constant, med_constant]:
            with self.assertRaises(UnsupportedModeError):
                estimator(ps, self.family, weighted=True)

    def test_avg_delta_curve(self):
        """Tests the delta(gamma) curve
        """
        ps = build_prefix_sums(OrbitSample([1., 100.], [1., 1.]))
        report = avg_delta_curve(ps, self.family, gamma_grid=(.1,))
        np.testing.assert_almost_equal(report.value.v, [.5])
        self.assertEqual(report.witness, [IntegerInterval(0, 2)])
        report = avg_delta_curve(build_prefix_sums(self.data.constant),
                                 self.family)
        np.testing.assert_almost_equal(report.value.v, np.zeros(19))
        self.assertEqual(report.value.kind, "avg-delta-curve")

    def test_lambda_constant(self):
        """Tests the lambda constant
        """
        ps = build_prefix_sums(self.data.lambda_case)
        report = lambda_constant(ps, self.family, .5)
        self.assertAlmostEqual(report.value, 2.)
        self.assertEqual(report.witness, IntegerInterval(0, 3))
        ps = build_prefix_sums(self.data.constant)
        self.assertAlmostEqual(lambda_constant(ps, self.family, .5).value, 0.)
        for beta in [0., 1.]:
            with self.assertRaises(ParameterError):
                lambda_constant(ps, self.family, beta)

    def test_lambda_constant_non_dyadic_beta(self):
        """Tests the lambda constant against the oracle when beta * (x /
        beta) rounds below x
        """
        sample = OrbitSample([3., 5.], [1., 1.])
        report = lambda_constant(build_prefix_sums(sample), self.family, .7)
        self.assertAlmostEqual(report.value, 7. / 6.)
        self.assertEqual(report.witness, IntegerInterval(0, 2))

        rng = np.random.default_rng(12)
        samples = [sample] + [
            CreateTestingData.random_sample(rng, int(rng.integers(2, 10)),
                                            weighted=i % 2 == 1)
            for i in range(8)]
        for sample in samples:
            ps = build_prefix_sums(sample)
            for beta in [.35, .7, .3]:
                oracle = max(
                    brute_force_oracle(sample, IntegerInterval(j, k),
                                       "lambda", beta=beta).value
                    for k in range(1, sample.N + 1)
                    for j in range(sample.N - k + 1))
                value = lambda_constant(ps, self.family, beta).value
                self.assertAlmostEqual(value, oracle, delta=1e-9 * oracle)

    def test_count_le(self):
        """Tests the row-wise counts of sorted entries below queries
        """
        S = np.array([[1., 2., 2., 3.], [0., 0., 1., 5.]])
        Q = np.array([[2., 0., 5.], [0., 4., -1.]])
        np.testing.assert_array_equal(count_le(S, Q), [[3, 0, 4], [2, 3, 0]])

    def test_log_constant(self):
        """Tests the L log L constant
        """
        ps = build_prefix_sums(self.data.pair_13)
        self.assertAlmostEqual(log_constant(ps, self.family).value,
                               1.5 * np.log(1.5) / 2.)
        ps = build_prefix_sums(self.data.constant)
        self.assertAlmostEqual(log_constant(ps, self.family).value, 0.)

    def test_median(self):
        """Tests the lower median and the median constant
        """
        sample = OrbitSample([5., 1., 3.], np.ones(3))
        self.assertEqual(median(sample, IntegerInterval(0, 3)), 3.)
        self.assertEqual(median(OrbitSample([1., 2., 3., 4.], np.ones(4)),
                                IntegerInterval(0, 4)), 2.)
        ps = build_prefix_sums(sample)
        report = med_constant(ps, WindowFamily("anchored", 3, 3))
        self.assertAlmostEqual(report.value, 1.)
        self.assertAlmostEqual(med_constant(ps, self.family).value, 3.)
        ps = build_prefix_sums(self.data.constant)
        self.assertAlmostEqual(med_constant(ps, self.family).value, 1.)

    def test_doubling_constant(self):
        """Tests the doubling constants of g and omega
        """
        ps = build_prefix_sums(self.data.constant)
        report = doubling_constant(ps, self.family, "omega")
        self.assertAlmostEqual(report.value, 3.)
        self.assertEqual(report.witness, IntegerInterval(0, 3))
        self.assertEqual(report.params["windows"]["k_min"], 2)
        ps = build_prefix_sums(self.data.doubling_case)
        report = doubling_constant(ps, WindowFamily("anchored", 4, 4), "g")
        self.assertAlmostEqual(report.value, 4.)
        with self.assertRaises(ParameterError):
            doubling_constant(ps, self.family, "h")

    def test_cf(self):
        """Tests the CF exponent frontier and the CF check
        """
        ps = build_prefix_sums(self.data.decreasing)
        report = cf_exponent(ps, self.family, 1.)
        self.assertAlmostEqual(report.value, np.log(7. / 6.) / np.log(1.5))
        self.assertEqual(report.witness, IntegerInterval(0, 3))
        check = cf_check(ps, self.family, 1., .5)
        self.assertFalse(check.passed)
        self.assertEqual(check.witness, IntegerInterval(0, 3))
        np.testing.assert_almost_equal(check.breakpoint, (2. / 3., 6. / 7.))
        self.assertAlmostEqual(check.worst_ratio, 6. / 7. / np.sqrt(2. / 3.))
        self.assertTrue(cf_check(ps, self.family, 1., .3).passed)

        ps = build_prefix_sums(self.data.constant)
        self.assertTrue(cf_check(ps, self.family, 1.5, .5).passed)
        self.assertAlmostEqual(cf_exponent(ps, self.family, 1.).value, 1.)
        with self.assertRaises(ParameterError):
            cf_check(ps, self.family, .5, .5)

    def test_am_curves(self):
        """Tests the subset curves against the single window envelopes
        """
        ps = build_prefix_sums(self.data.decreasing)
        family = WindowFamily("anchored", 3, 3)
        report = am_curve(ps, family, alpha_grid=(.5,))
        np.testing.assert_almost_equal(report.value.v, [5. / 7.])
        report = amhat_curve(ps, family, alpha_grid=(3. / 7.,))
        np.testing.assert_almost_equal(report.value.v, [2. / 3.])
        ps = build_prefix_sums(self.data.constant)
        report = am_curve(ps, self.family)
        np.testing.assert_almost_equal(report.value.v, report.value.t)

    def test_report(self):
        """Tests report serialization and floor assertions
        """
        ps = build_prefix_sums(self.data.pair)
        out = ap_constant(ps, self.family, 2.).to_dict()
        self.assertEqual(out["class"], "ap")
        self.assertEqual(out["witness"], [0, 2])
        self.assertTrue(out["finite"])
        self.assertEqual(out["params"]["windows"],
                         {"mode": "all", "k_min": 1, "k_max": None})
        out = am_curve(ps, self.family, alpha_grid=(.5,)).to_dict()
        self.assertEqual(out["curve"]["alpha"], [.5])
        with self.assertRaises(AssertionError):
            ClassConstantReport("ap", {}, .5, IntegerInterval(0, 1))
        value = window_value(ps, "rh", {"q": 2.}, IntegerInterval(0, 2))
        self.assertAlmostEqual(value[0], np.sqrt(8.5) / 2.5)

    def test_ClassAnalyzer(self):
        """Tests the analyzer and its independence from the thread count
        """
        rng = np.random.default_rng(6)
        sample = CreateTestingData.random_sample(rng, 40, weighted=True)
        single = ClassAnalyzer(verbose=False, n_jobs=1).run(sample)
        multi = ClassAnalyzer(verbose=False, n_jobs=4).run(sample)
        self.assertEqual(tuple(single), ALL_CLASSES)
        for name in ALL_CLASSES:
            self.assertEqual(single[name].to_dict(), multi[name].to_dict())
        self.assertEqual(single["ap"].params["mode"], "unweighted")
        self.assertEqual(single["rh"].params["mode"], "weighted")

        analyzer = ClassAnalyzer(classes=["rh", "ap"], verbose=False)
        reports = analyzer.run(sample)
        self.assertEqual(list(reports), ["ap", "rh"])
        self.assertEqual(analyzer.get_history("name"), ["ap", "rh"])
        with self.assertRaises(ValueError):
            ClassAnalyzer(classes=["bmo"])
        with self.assertRaises(ValueError):
            ClassAnalyzer(n_jobs=0)


if __name__ == "main":
    unittest.main()
