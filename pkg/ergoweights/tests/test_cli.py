# -*- coding: utf-8 -*-
# Author: ergoweights developers

import json
import os
import tempfile
import unittest
from ergoweights.base.sample import load_sample
from ergoweights.cli import RunConfig, UsageError, main
from ergoweights.report import AnalysisReport, emit_curves

GENERATOR = ["--alpha", "0.6180339887", "--omega-spec", "power:0.5:-0.5",
             "--x0", "0.1", "--n", "40"]


class Test(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def _path(self, name):
        return os.path.join(self.dir, name)

    def _read(self, name):
        with open(self._path(name)) as f:
            return f.read()

    def _spike(self):
        path = self._path("spike.csv")
        with open(path, "w") as f:
            f.write("index,omega,g\n0,8,1\n1,1,1\n2,1,1\n3,1,1\n")
        return path

    def test_gen(self):
        """Tests writing a generated sample
        """
        code = main(["gen"] + GENERATOR + ["--format", "csv",
                                           "--out", self._path("s.csv")])
        self.assertEqual(code, 0)
        sample = load_sample(self._path("s.csv"))
        self.assertEqual(sample.N, 40)

    def test_gen_format_from_extension(self):
        """Tests that the extension of --out picks the written format
        """
        for name in ["s.csv", "s.json"]:
            code = main(["gen"] + GENERATOR + ["--n", "16",
                                               "--out", self._path(name)])
            self.assertEqual(code, 0)
            self.assertEqual(load_sample(self._path(name)).N, 16)
        self.assertTrue(self._read("s.csv").startswith("index,omega,g"))
        self.assertTrue(self._read("s.json").startswith("{"))
        code = main(["analyze", "--in", self._path("s.csv"), "--classes",
                     "avg", "--threads", "1"])
        self.assertEqual(code, 0)

    def test_czd(self):
        """Tests the decomposition subcommand
        """
        code = main(["czd", "--in", self._spike(), "--lambda", "3",
                     "--out", self._path("czd.json")])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(self._read("czd.json")),
                         {"lambda": 3, "window": [0, 4],
                          "selected": [{"interval": [0, 2], "avg": 4.5,
                                        "expansion": 2}],
                          "residual": [2, 3]})
        self.assertEqual(main(["czd", "--in", self._spike(), "--lambda",
                               "2"]), 1)

    def test_analyze_deterministic(self):
        """Tests that reports do not depend on the thread count
        """
        for threads in ["1", "8"]:
            code = main(["analyze"] + GENERATOR +
                        ["--threads", threads,
                         "--out", self._path("r%s.json" % threads)])
            self.assertEqual(code, 0)
        text = self._read("r1.json")
        self.assertEqual(text, self._read("r8.json"))
        report = json.loads(text)
        self.assertEqual(report["tool"], "ergoweights")
        self.assertEqual(report["command"], "analyze")
        self.assertEqual(report["sample"]["N"], 40)
        self.assertNotIn("timing", report)
        self.assertNotIn("threads", report["config"])
        self.assertEqual(report["classes"]["ap"]["class"], "ap")

    def test_curves(self):
        """Tests the curve export
        """
        code = main(["analyze"] + GENERATOR +
                    ["--classes", "sw,am,avg", "--frontier-window", "0,8",
                     "--curves-dir", self._path("curves"),
                     "--record-timing", "--out", self._path("r.json")])
        self.assertEqual(code, 0)
        index = json.loads(self._read(os.path.join("curves", "curves.json")))
        self.assertEqual(sorted(index), ["am", "amhat_frontier", "avg",
                                         "cf_frontier", "sw"])
        header = self._read(os.path.join("curves", "avg.csv")).splitlines()[0]
        self.assertEqual(header, "gamma,delta")
        self.assertIn("timing", json.loads(self._read("r.json")))

        with self.assertWarns(UserWarning):
            self.assertEqual(emit_curves(AnalysisReport("analyze", {}),
                                         self._path("empty")), {})

    def test_verify(self):
        """Tests verification on random cases
        """
        code = main(["verify", "--cases", "2", "--weighted-cases", "1",
                     "--seed", "3", "--case-n-max", "12", "--threads", "1",
                     "--out", self._path("v.json")])
        self.assertEqual(code, 0)
        verdicts = json.loads(self._read("v.json"))["verdicts"]
        self.assertEqual({v["case"] for v in verdicts}, {0, 1, 2})
        self.assertTrue(all(v["status"] != "fail" for v in verdicts))
        checks = {v.get("check") for v in verdicts}
        self.assertTrue({"oracle", "duality"} <= checks)

    def test_oracle(self):
        """Tests the oracle subcommand
        """
        for target in ["cf", "amhat", "lambda"]:
            code = main(["oracle", "--in", self._spike(), "--target", target,
                         "--out", self._path("o.json")])
            self.assertEqual(code, 0)
        results = json.loads(self._read("o.json"))["results"]
        self.assertEqual(results["target"], "lambda")
        self.assertLess(results["gap"], 1e-6)

    def test_usage_errors(self):
        """Tests that invalid invocations exit with code 1
        """
        spike = self._spike()
        self.assertEqual(main(["analyze"]), 1)
        self.assertEqual(main(["analyze", "--in", spike] + GENERATOR), 1)
        self.assertEqual(main(["bogus"]), 1)
        self.assertEqual(main(["verify", "--cases", "2"]), 1)
        self.assertEqual(main(["czd", "--in", spike]), 1)
        self.assertEqual(main(["analyze", "--in", spike, "--p", "1"]), 1)
        self.assertEqual(main(["analyze", "--in", spike, "--classes", "bmo"]),
                         1)
        self.assertEqual(main(["gen", "--in", spike]), 1)
        self.assertEqual(main(["analyze", "--in", self._path("missing.csv")]),
                         1)
        self.assertEqual(main(["czd", "--in", spike, "--lambda", "3",
                               "--out", os.path.join(spike, "czd.json")]), 1)
        with self.assertRaises(UsageError):
            RunConfig("analyze", in_path=spike, seed=-1)


if __name__ == "main":
    unittest.main()
