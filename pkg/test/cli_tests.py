# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.

import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest

from oblearn import benchfn, cli, parser
from oblearn.version import __version__


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def path(self, name):
        return os.path.join(self.tmpdir, name)

    def run_cli(self, *argv):
        """Run the CLI and return ``(exit status, stdout)``."""
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            status = cli.main(["-q"] + list(argv))
        return status, out.getvalue()

    def sample_and_mine(self, fn="square", n="100"):
        data, mined = self.path("data.csv"), self.path("mined.csv")
        self.assertEqual(self.run_cli("sample", "--fn", fn, "--n", n, "--out", data)[0], 0)
        self.assertEqual(self.run_cli("mine", "--in", data, "--out", mined)[0], 0)
        return mined

    def train(self, mined, *extra):
        model = self.path("model.json")
        status, _ = self.run_cli("train", "--in", mined, "--out", model,
                                 "--hidden", "4", "--epochs", "20", *extra)
        self.assertEqual(status, 0)
        return model


class SampleTests(CliTestCase):

    def test_sample(self):
        out = self.path("data.csv")
        status, stdout = self.run_cli("sample", "--fn", "sqrt", "--n", "11", "--out", out)
        self.assertEqual(status, cli.EXIT_OK)
        self.assertIn("wrote 11 samples", stdout)
        self.assertEqual(len(parser.read_dataset(out)), 11)

        with open(out) as f:
            first = f.readline()
        self.assertTrue(first.startswith("# config: "))
        config = json.loads(first[len("# config: "):])
        self.assertEqual(config["command"], "sample")
        self.assertNotIn("output", config)

    def test_domain_override(self):
        out = self.path("data.csv")
        self.run_cli("sample", "--fn", "linear2x", "--n", "3", "--lower", "2",
                     "--upper", "4", "--out", out)
        self.assertEqual(list(parser.read_dataset(out).xs[:, 0]), [2.0, 3.0, 4.0])

    def test_two_dimensional(self):
        out = self.path("data.csv")
        self.assertEqual(self.run_cli("sample", "--fn", "booth", "--n", "10", "--out", out)[0], 0)
        self.assertEqual(parser.read_dataset(out).arity, 2)
        status, _ = self.run_cli("sample", "--fn", "booth", "--n", "10", "--mode", "grid",
                                 "--out", out)
        self.assertEqual(status, cli.EXIT_USAGE)

    def test_usage_errors(self):
        out = self.path("data.csv")
        self.assertEqual(self.run_cli("sample", "--fn", "rosenbrock", "--out", out)[0],
                         cli.EXIT_USAGE)
        self.assertEqual(self.run_cli("sample", "--fn", "sqrt")[0], cli.EXIT_USAGE)
        self.assertEqual(self.run_cli("sample", "--out", out)[0], cli.EXIT_USAGE)


class MineTests(CliTestCase):

    def test_stats(self):
        data, mined = self.path("data.csv"), self.path("mined.csv")
        self.run_cli("sample", "--fn", "linear2x", "--n", "11", "--out", data)
        status, stdout = self.run_cli("mine", "--in", data, "--out", mined, "--scheme", "T2")
        self.assertEqual(status, 0)
        self.assertIn("y_min=0 y_max=20 y_mean=10", stdout)
        self.assertEqual(parser.read_mined(mined).scheme, "t2")

    def test_missing_input(self):
        status, _ = self.run_cli("mine", "--in", self.path("nope.csv"),
                                 "--out", self.path("mined.csv"))
        self.assertEqual(status, cli.EXIT_USAGE)

    def test_malformed_input(self):
        data = self.path("data.csv")
        with open(data, "w") as f:
            f.write("x1,y\n1,2\n2,abc\n")
        status, _ = self.run_cli("mine", "--in", data, "--out", self.path("mined.csv"))
        self.assertEqual(status, cli.EXIT_USAGE)

    def test_bad_scheme(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                cli.main(["mine", "--scheme", "t9"])
        self.assertEqual(ctx.exception.code, 2)


class TrainTests(CliTestCase):

    def test_train(self):
        model = self.train(self.sample_and_mine())
        self.assertTrue(os.path.exists(model))
        epochs, _, _ = parser.read_history(self.path("model_history.csv"))
        self.assertEqual(epochs[0], 1)

    def test_rerun_identical(self):
        mined = self.sample_and_mine()
        first = self.train(mined, "--seed", "7")
        with open(first, "rb") as f:
            expected = f.read()
        with open(self.train(mined, "--seed", "7"), "rb") as f:
            self.assertEqual(f.read(), expected)

    def test_history_path(self):
        history = self.path("loss.csv")
        self.train(self.sample_and_mine(), "--history", history)
        self.assertTrue(os.path.exists(history))

    def test_no_hidden_units(self):
        status, _ = self.run_cli("train", "--in", self.sample_and_mine(), "--out",
                                 self.path("model.json"), "--hidden", "0")
        self.assertEqual(status, cli.EXIT_USAGE)

    def test_divergence(self):
        status, _ = self.run_cli("train", "--in", self.sample_and_mine(), "--out",
                                 self.path("model.json"), "--hidden", "8",
                                 "--optimizer", "gd", "--lr", "1e6",
                                 "--epochs", "500", "--patience", "1000")
        self.assertEqual(status, cli.EXIT_FAILURE)


class EvalTests(CliTestCase):

    def setUp(self):
        super(EvalTests, self).setUp()
        self.model = self.train(self.sample_and_mine())

    def test_json(self):
        out = self.path("eval.json")
        status, _ = self.run_cli("eval", "--fn", "square", "--model", self.model,
                                 "--n-test", "20", "--out", out)
        self.assertEqual(status, 0)
        with open(out) as f:
            doc = json.load(f)
        self.assertEqual(doc["function"], "square")
        self.assertEqual(doc["n_test"], 20)
        self.assertEqual(doc["reference_fuzzy"], {"mean": 3.04, "std": 1.72})
        self.assertEqual(doc["config"]["command"], "eval")
        self.assertNotIn("model", doc["config"])

    def test_csv_stdout(self):
        status, stdout = self.run_cli("eval", "--fn", "square", "--model", self.model,
                                      "--n-test", "20", "--format", "csv")
        self.assertEqual(status, 0)
        lines = stdout.splitlines()
        self.assertTrue(lines[0].startswith("# config: "))
        self.assertEqual(lines[1].split(",")[:3], ["function", "scheme", "n_test"])
        self.assertEqual(lines[2].split(",")[:3], ["square", "t1", "20"])

    def test_missing_model(self):
        status, _ = self.run_cli("eval", "--fn", "square", "--model", self.path("x.json"))
        self.assertEqual(status, cli.EXIT_USAGE)

    def test_unsupported_oracle(self):
        status, _ = self.run_cli("eval", "--fn", "booth", "--model", self.model, "--oracle")
        self.assertEqual(status, cli.EXIT_FAILURE)


class TableTests(CliTestCase):

    def test_table(self):
        out = self.path("table.csv")
        status, _ = self.run_cli("table", "--n", "20", "--epochs", "2",
                                 "--n-test", "5", "--out", out)
        self.assertEqual(status, 0)
        with open(out, encoding="utf-8") as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 2 + 24)
        self.assertTrue(lines[2].startswith("cubic_shift,t1,5,"))


class PipelineTests(CliTestCase):

    FILES_1D = ("data.csv", "mined.csv", "model.json", "history.csv", "eval.json")
    FILES_2D = ("data.csv", "mined.csv", "model.json", "history.csv", "optimize.csv")

    def _pipeline(self, outdir, fn, *extra):
        status, _ = self.run_cli("pipeline", "--fn", fn, "--out", outdir, *extra)
        self.assertEqual(status, 0)

    def _read(self, path):
        with open(path, "rb") as f:
            return f.read()

    def test_deterministic(self):
        args = ("--n", "50", "--epochs", "20", "--hidden", "4", "--n-test", "10",
                "--seed", "3")
        a, b = self.path("a"), self.path("b")
        self._pipeline(a, "sqrt", *args)
        self._pipeline(b, "sqrt", *args)
        for name in self.FILES_1D:
            self.assertEqual(self._read(os.path.join(a, name)),
                             self._read(os.path.join(b, name)), name)

    def test_optimize(self):
        outdir = self.path("booth")
        self._pipeline(outdir, "booth", "--n", "100", "--epochs", "10",
                       "--hidden", "4", "--runs", "3")
        with open(os.path.join(outdir, "optimize.csv"), encoding="utf-8") as f:
            lines = f.read().splitlines()
        self.assertTrue(lines[0].startswith("# config: "))
        self.assertEqual(lines[1], "run,random,type2_ann,type1")
        self.assertEqual([line.split(",")[0] for line in lines[2:]], ["1", "2", "3"])
        self.assertFalse(os.path.exists(os.path.join(outdir, "eval.json")))

    def test_optimize_deterministic(self):
        args = ("--n", "100", "--epochs", "10", "--hidden", "4", "--runs", "2",
                "--seed", "5")
        a, b = self.path("a"), self.path("b")
        self._pipeline(a, "booth", *args)
        self._pipeline(b, "booth", *args)
        for name in self.FILES_2D:
            self.assertEqual(self._read(os.path.join(a, name)),
                             self._read(os.path.join(b, name)), name)

    def test_domain_override(self):
        outdir = self.path("wide")
        self._pipeline(outdir, "square", "--lower", "0", "--upper", "20", "--n", "50",
                       "--epochs", "10", "--hidden", "4", "--n-test", "10")
        data = parser.read_dataset(os.path.join(outdir, "data.csv"))
        self.assertEqual(data.xs[-1, 0], 20.0)
        self.assertTrue(os.path.exists(os.path.join(outdir, "eval.json")))


class DomainOverrideTests(CliTestCase):

    OVERRIDE = ("--lower", "0", "--upper", "20")

    def test_sample_to_eval(self):
        data, mined = self.path("data.csv"), self.path("mined.csv")
        model, report = self.path("model.json"), self.path("eval.json")
        statuses = [
            self.run_cli("sample", "--fn", "square", "--n", "100", *self.OVERRIDE,
                         "--out", data)[0],
            self.run_cli("mine", "--in", data, "--out", mined)[0],
            self.run_cli("train", "--in", mined, "--out", model, "--hidden", "4",
                         "--epochs", "20")[0],
            self.run_cli("eval", "--fn", "square", *self.OVERRIDE, "--model", model,
                         "--n-test", "20", "--oracle", "--out", report)[0],
        ]
        self.assertEqual(statuses, [0, 0, 0, 0])
        with open(report, encoding="utf-8") as f:
            doc = json.load(f)
        self.assertEqual(doc["ann"]["n"], 20)
        self.assertIn("oracle_gap", doc)

    def test_override_is_scoped(self):
        self.test_sample_to_eval()
        self.assertEqual(benchfn.get_domain("square"), benchfn.get("square").box)

    def test_model_outside_default_domain(self):
        data, mined = self.path("data.csv"), self.path("mined.csv")
        model = self.path("model.json")
        self.run_cli("sample", "--fn", "square", "--n", "100", *self.OVERRIDE, "--out", data)
        self.run_cli("mine", "--in", data, "--out", mined)
        self.run_cli("train", "--in", mined, "--out", model, "--hidden", "4", "--epochs", "5")
        status, _ = self.run_cli("eval", "--fn", "square", "--model", model)
        self.assertEqual(status, cli.EXIT_USAGE)


class VersionTests(unittest.TestCase):

    def test_version(self):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            with self.assertRaises(SystemExit) as ctx:
                cli.main(["--version"])
        self.assertEqual(ctx.exception.code, 0)
        self.assertEqual(out.getvalue().strip(), __version__)


if __name__ == "__main__":
    unittest.main()
