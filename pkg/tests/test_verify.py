"""
Tests for the acceptance-suite orchestrator
"""

import io
import os
import sys
import unittest
from unittest import mock

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ellk3_stab.profiles import Config
from ellk3_stab.verify import SUITES, CheckResult, VerificationReport, VerificationRunner


def small_config() -> Config:
    return Config(fuzz_samples=6, pair_samples=20, seed=7)


class TestVerificationRunner(unittest.TestCase):
    """Test suite selection, reporting and progress callbacks"""

    def setUp(self):
        self.stream = io.StringIO()
        self.calls = []
        self.runner = VerificationRunner(
            small_config(),
            progress_callback=lambda step, total, msg, err: self.calls.append((step, total, msg, err)),
            stream=self.stream,
        )

    def test_checks_for_all_covers_every_suite(self):
        checks = self.runner.checks_for("all")
        self.assertEqual(tuple(dict.fromkeys(suite for suite, _, _ in checks)), SUITES)
        self.assertEqual(len(checks), 3 * len(SUITES))

    def test_checks_for_unknown_suite(self):
        with self.assertRaises(ValueError):
            self.runner.checks_for("bogus")

    def test_fmt_suite_passes(self):
        report = self.runner.run("fmt")
        self.assertTrue(report.passed, [r.detail for r in report.failures])
        self.assertEqual(len(report.results), 3)
        self.assertTrue(all(r.suite == "fmt" for r in report.results))

    def test_cce_suite_passes(self):
        report = self.runner.run("cce")
        self.assertTrue(report.passed, [r.detail for r in report.failures])

    def test_charges_suite_passes(self):
        report = self.runner.run("charges")
        self.assertTrue(report.passed, [r.detail for r in report.failures])

    def test_regions_suite_passes(self):
        report = self.runner.run("regions")
        self.assertTrue(report.passed, [r.detail for r in report.failures])

    def test_progress_callback_sequence(self):
        self.runner.run("cce")
        self.assertEqual(len(self.calls), 5)
        self.assertEqual(self.calls[0], (0, 3, "Starting verification...", None))
        self.assertEqual(self.calls[-1], (3, 3, "Verification complete!", None))
        self.assertEqual([c[0] for c in self.calls[1:4]], [1, 2, 3])
        self.assertTrue(all(c[1] == 3 for c in self.calls))
        self.assertTrue(self.calls[1][2].startswith("cce: "))

    def test_status_lines(self):
        self.runner.run("fmt")
        text = self.stream.getvalue()
        self.assertIn("ELLK3-STAB VERIFY - suite: fmt", text)
        self.assertIn("Suite: fmt", text)
        self.assertIn("✓ quasi-inverse", text)
        self.assertIn("VERIFY COMPLETE: 3/3 checks passed", text)

    def test_raising_check_counts_as_failed(self):
        with mock.patch.object(self.runner, "check_g_and_h", side_effect=RuntimeError("boom")):
            report = self.runner.run("cce")
        self.assertFalse(report.passed)
        self.assertEqual([r.name for r in report.failures], ["g and h identities"])
        self.assertEqual(report.failures[0].detail, "RuntimeError: boom")
        self.assertEqual(self.calls[3][3], "boom")
        self.assertIn("✗ g and h identities", self.stream.getvalue())
        self.assertIn("VERIFY COMPLETE: 2/3 checks passed", self.stream.getvalue())

    def test_failed_check_reports_detail(self):
        with mock.patch.object(self.runner, "check_special_point", return_value=(False, "off by one")):
            report = self.runner.run("cce")
        self.assertEqual(report.failures[0].detail, "off by one")
        self.assertEqual(self.calls[1][3], "off by one")

    def test_default_stream_and_config(self):
        runner = VerificationRunner()
        self.assertIs(runner.stream, sys.stderr)
        self.assertEqual(runner.config.fuzz_samples, 100)


class TestVerificationReport(unittest.TestCase):
    """Test report aggregation"""

    def test_to_json(self):
        report = VerificationReport("walls", [
            CheckResult("a", True, "fine", "walls"),
            CheckResult("b", False, "broken", "walls"),
        ])
        data = report.to_json()
        self.assertFalse(data["passed"])
        self.assertEqual(data["total"], 2)
        self.assertEqual(data["failed"], 1)
        self.assertEqual(data["checks"][1],
                         {"suite": "walls", "name": "b", "passed": False, "detail": "broken"})

    def test_empty_report_passes(self):
        self.assertTrue(VerificationReport("fmt").passed)


if __name__ == '__main__':
    unittest.main(verbosity=2)
