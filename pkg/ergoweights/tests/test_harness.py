# -*- coding: utf-8 -*-
# Author: ergoweights developers

import unittest
import numpy as np
from ergoweights.analysis import ClassAnalyzer
from ergoweights.base.errors import DependencyError, OracleSizeError
from ergoweights.base.sample import OrbitSample
from ergoweights.harness.oracles import brute_force_oracle, duality_check, \
    oracle_discrepancies
from ergoweights.harness.transfers import EDGES
from ergoweights.harness.verification import ImplicationHarness, \
    required_classes, verify_edges
from ergoweights.model.dyadic import IntegerInterval, build_prefix_sums
from ergoweights.model.estimators import window_value
from ergoweights.model.windows import WindowFamily
from ergoweights.simulation import SimuLogNormalWeights
from ergoweights.tests.testing_data import CreateTestingData


class Test(unittest.TestCase):

    def setUp(self):
        self.data = CreateTestingData()

    def test_subset_oracle(self):
        """Tests exhaustive subset enumeration
        """
        window = IntegerInterval(0, 3)
        oracle = brute_force_oracle(self.data.decreasing, window, "cf")
        self.assertEqual(oracle.t.size, 8)
        np.testing.assert_almost_equal(oracle.extremal_at([1. / 3]),
                                       [4. / 7])
        oracle = brute_force_oracle(self.data.constant, IntegerInterval(0, 6),
                                    "am")
        np.testing.assert_almost_equal(oracle.t, oracle.v)
        with self.assertRaises(OracleSizeError):
            brute_force_oracle(self.data.constant, IntegerInterval(0, 15),
                               "cf")

    def test_oracle_agreement(self):
        """Tests the frontier and lambda estimators against the oracles
        """
        rng = np.random.default_rng(8)
        for i in range(30):
            n = int(rng.integers(1, 13))
            sample = CreateTestingData.random_sample(rng, n,
                                                     weighted=i % 2 == 1)
            k = int(rng.integers(1, n + 1))
            window = IntegerInterval(int(rng.integers(0, n - k + 1)), k)
            gaps = oracle_discrepancies(sample, window, beta=.3)
            for kind in ["cf", "am", "amhat"]:
                self.assertLess(gaps[kind], 1e-9)
            self.assertLess(gaps["lambda"], 1e-6)

        ps = build_prefix_sums(self.data.lambda_case)
        oracle = brute_force_oracle(self.data.lambda_case,
                                    IntegerInterval(0, 3), "lambda")
        self.assertAlmostEqual(oracle.value, 2.)
        self.assertAlmostEqual(
            window_value(ps, "lambda", {"beta": .5},
                         IntegerInterval(0, 3))[0], 2.)

    def test_lambda_oracle_right_limits(self):
        """Tests the lambda oracle at jumps lambda -> (omega_i / beta)+
        """
        sample = OrbitSample([3., 5.], [1., 1.])
        window = IntegerInterval(0, 2)
        oracle = brute_force_oracle(sample, window, "lambda", beta=.7)
        self.assertAlmostEqual(oracle.value, 7. / 6.)
        oracle = brute_force_oracle(sample, window, "lambda", beta=.35)
        self.assertAlmostEqual(oracle.value, .625)
        for beta in [.35, .7, .3]:
            gaps = oracle_discrepancies(sample, window, beta=beta)
            self.assertLess(gaps["lambda"], 1e-9)

    def test_duality(self):
        """Tests that both sides of the subset duality agree
        """
        sample = OrbitSample([1., 9.], [1., 1.])
        p1, p2 = duality_check(sample, .5, .4)
        self.assertEqual(p1, p2)
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(1, 16))
            sample = CreateTestingData.random_sample(rng, n, weighted=True)
            alpha, beta = rng.uniform(.01, .99, size=2)
            self.assertEqual(*duality_check(sample, alpha, beta))
        self.assertEqual(duality_check(self.data.constant, .3, .5),
                         (True, True))
        self.assertEqual(duality_check(self.data.constant, .5, .3),
                         (False, False))

    def test_constant_sample(self):
        """Tests that every edge passes on a constant weight
        """
        sample = self.data.constant
        reports = ClassAnalyzer(verbose=False).run(sample)
        verdicts = verify_edges(sample, reports)
        self.assertEqual([v.edge for v in verdicts], list(EDGES))
        for verdict in verdicts:
            self.assertEqual(verdict.status, "pass", verdict.to_dict())

    def test_T14(self):
        """Tests the duality transfer from reverse Hölder to A_p
        """
        sample = self.data.pair
        reports = ClassAnalyzer(classes=["ap"], verbose=False).run(sample)
        verdict, = verify_edges(sample, reports, edges=["T14"])
        self.assertAlmostEqual(verdict.source["C"], 1.25)
        self.assertAlmostEqual(verdict.bound["C"], 1.5625)
        self.assertAlmostEqual(verdict.target["value"], 1.5625)
        self.assertEqual(verdict.status, "pass")
        self.assertAlmostEqual(verdict.slack, 0.)

    def test_dependencies(self):
        """Tests missing prerequisite reports
        """
        with self.assertRaises(DependencyError) as ctx:
            verify_edges(self.data.pair, {}, edges=["T3", "T1"])
        self.assertEqual(ctx.exception.missing,
                         ["avg", "doubling_g", "lambda", "rh"])
        self.assertEqual(required_classes(["T1"]),
                         {"avg", "lambda", "doubling_g"})

    def test_T1_requires_closed_family(self):
        """Tests that T1 is infeasible on anchored windows
        """
        sample = self.data.spike
        family = WindowFamily("anchored")
        reports = ClassAnalyzer(classes=required_classes(["T1"]),
                                family=family, verbose=False).run(sample)
        verdict, = verify_edges(sample, reports, family, ["T1"])
        self.assertEqual(verdict.status, "infeasible")

    def test_random_cases(self):
        """Tests every edge on random samples
        """
        samples = [simu.simulate() for simu in
                   [SimuLogNormalWeights(seed=10, n_range=(2, 20)),
                    SimuLogNormalWeights(seed=11, n_range=(2, 20),
                                         weighted_g=True)]
                   for _ in range(3)]
        harness = ImplicationHarness(verbose=False, n_jobs=2)
        verdicts = harness.run(samples)
        self.assertEqual(len(verdicts), 6)
        for case in verdicts:
            self.assertEqual(len(case), len(EDGES))
            for verdict in case:
                self.assertFalse(verdict.failed, verdict.to_dict())
        self.assertEqual(len(harness.get_history("edge")), 6 * len(EDGES))


if __name__ == "main":
    unittest.main()
