# -*- coding: utf-8 -*-
# Author: ergoweights developers

import json
import os
import tempfile
import unittest
import numpy as np
from ergoweights.base.errors import SampleValidationError
from ergoweights.base.sample import OrbitSample, load_sample, save_sample, \
    normalize_g


class Test(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, name, text):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def test_load_csv(self):
        """Tests reading a CSV sample
        """
        path = self._write("s.csv", "index,omega,g\n0,1,1\n1,2,1\n")
        sample = load_sample(path)
        np.testing.assert_almost_equal(sample.omega, [1., 2.])
        np.testing.assert_almost_equal(sample.g, [1., 1.])
        self.assertEqual(sample.meta["source"], path)

    def test_load_json(self):
        """Tests reading a JSON sample
        """
        path = self._write("s.json", json.dumps({"omega": [1], "g": [1]}))
        sample = load_sample(path)
        self.assertEqual(sample.N, 1)

    def test_invalid_rows(self):
        """Tests that invalid values are reported with their row
        """
        path = self._write("bad.csv", "index,omega,g\n0,1,1\n1,1,1\n2,1,1\n"
                                      "3,0,1\n")
        with self.assertRaises(SampleValidationError) as ctx:
            load_sample(path)
        self.assertEqual(ctx.exception.row, 3)
        self.assertIn("row 3", str(ctx.exception))

        path = self._write("missing.csv", "index,omega\n0,1\n")
        with self.assertRaises(SampleValidationError):
            load_sample(path)
        path = self._write("lengths.json", json.dumps({"omega": [1, 2],
                                                       "g": [1]}))
        with self.assertRaises(SampleValidationError):
            load_sample(path)
        with self.assertRaises(SampleValidationError):
            OrbitSample([1., np.inf], [1., 1.])

    def test_normalize_g(self):
        """Tests normalizing g to unit mean
        """
        for g, expected in [((2., 2., 2.), (1., 1., 1.)),
                            ((1., 3.), (.5, 1.5)),
                            ((1., 1., 4.), (.5, .5, 2.))]:
            sample = normalize_g(OrbitSample(np.ones(len(g)), g))
            np.testing.assert_almost_equal(sample.g, expected)

    def test_save_load(self):
        """Tests that saved samples load back with identical values
        """
        rng = np.random.default_rng(0)
        sample = OrbitSample(np.exp(rng.standard_normal(20)),
                             np.exp(rng.standard_normal(20)), {"x0": .1})
        for name in ["s.json", "s.csv"]:
            path = os.path.join(self.tmp.name, name)
            save_sample(sample, path)
            loaded = load_sample(path)
            np.testing.assert_array_equal(loaded.omega, sample.omega)
            np.testing.assert_array_equal(loaded.g, sample.g)
        self.assertEqual(loaded.meta["source"], path)
        self.assertEqual(load_sample(os.path.join(self.tmp.name, "s.json"))
                         .meta["x0"], .1)
        self.assertEqual(sorted(os.listdir(self.tmp.name)),
                         ["s.csv", "s.json"])

    def test_digest(self):
        """Tests the sample digest
        """
        digest = OrbitSample([1., 3.], [1., 1.]).digest()
        self.assertEqual(digest["N"], 2)
        self.assertEqual(digest["omega"], {"min": 1., "max": 3., "mean": 2.})


if __name__ == "main":
    unittest.main()
