"""Tests for the report renderers."""

import json
import tempfile
import unittest
from pathlib import Path

from cuf.base import CheckReport, CheckStatus
from cuf.output import DataFrameOutput, JSONOutputRenderer, ReportRenderer, get_renderer, load_reports
from cuf.output.dataframe_output import SUMMARY_COLUMNS


def sample_reports():
    passing = CheckReport(
        check="check_pure", status=CheckStatus.PASS, depth=4, exact=True, elapsed_ms=12.5, instances=30,
        details=[
            CheckReport(check="check_almost_unperforated", status=CheckStatus.PASS, elapsed_ms=4.0, instances=10),
            CheckReport(check="check_almost_divisible", status=CheckStatus.PASS, elapsed_ms=8.5, instances=20),
        ],
    )
    control = CheckReport(
        check="check_axioms", status=CheckStatus.FAIL, depth=3, exact=True, elapsed_ms=1.0, instances=7,
        counterexample={"x": "x", "y": "y", "m": "2"}, expected=CheckStatus.FAIL,
    )
    failing = CheckReport(
        check="compute_alpha", status=CheckStatus.FAIL, depth=6, elapsed_ms=2.0, instances=1,
        value="compact:6", counterexample={"value": "compact:6", "expected": "compact:5"},
    )
    return [passing, control, failing]


class TestJSONOutput(unittest.TestCase):
    """Test the machine format."""

    def test_render_and_load(self):
        """Test records keep their order and stable fields."""
        text = JSONOutputRenderer().render_list(sample_reports())
        records = load_reports(text)
        self.assertEqual([r["check"] for r in records], ["check_pure", "check_axioms", "compute_alpha"])
        self.assertEqual(records[1]["status"], "fail")
        self.assertEqual(records[1]["expected"], "fail")
        self.assertEqual(records[2]["value"], "compact:6")
        self.assertNotIn("value", records[0])
        self.assertEqual(len(records[0]["details"]), 2)

    def test_unexpected_count(self):
        """Test only the unexpected failure is counted."""
        document = json.loads(JSONOutputRenderer().render_list(sample_reports()))
        self.assertEqual(document["unexpected"], 1)

    def test_timing_dropped(self):
        """Test elapsed times are zeroed in reports and sub-reports."""
        records = load_reports(JSONOutputRenderer(include_timing=False).render_list(sample_reports()))
        self.assertEqual(records[0]["elapsed_ms"], 0.0)
        self.assertTrue(all(d["elapsed_ms"] == 0.0 for d in records[0]["details"]))

    def test_save_creates_directory(self):
        """Test save_list creates missing parent directories."""
        with tempfile.TemporaryDirectory() as tmp:
            path = JSONOutputRenderer().save_list(sample_reports(), Path(tmp) / "nested" / "run.json")
            self.assertTrue(path.exists())
            self.assertEqual(len(load_reports(path.read_text(encoding="utf-8"))), 3)


class TestTextOutput(unittest.TestCase):
    """Test the human-readable format."""

    def test_blocks_and_summary(self):
        """Test one block per command and the closing summary line."""
        text = ReportRenderer(include_timing=False).render_list(sample_reports())
        self.assertTrue(text.startswith("# cu-factor report\n"))
        self.assertIn("1. check_pure: PASS", text)
        self.assertIn("2. check_axioms: FAIL (expected fail)", text)
        self.assertIn("3. compute_alpha: FAIL !", text)
        self.assertIn("counterexample: x=x, y=y, m=2", text)
        self.assertIn("- check_almost_divisible: PASS", text)
        self.assertIn("## Summary", text)
        self.assertTrue(text.endswith("3 commands, 1 unexpected\n"))
        self.assertNotIn("elapsed_ms=12.500", text)

    def test_empty_run(self):
        """Test a run without commands still renders a summary."""
        text = ReportRenderer().render_list([])
        self.assertIn("0 commands, 0 unexpected", text)

    def test_get_renderer(self):
        """Test format names map to renderers."""
        self.assertIsInstance(get_renderer("text"), ReportRenderer)
        self.assertEqual(get_renderer("machine", include_timing=False).extension, ".json")
        with self.assertRaises(ValueError):
            get_renderer("yaml")


class TestDataFrameOutput(unittest.TestCase):
    """Test the tabular summary."""

    def test_columns(self):
        """Test one row per command with the summary columns."""
        df = DataFrameOutput().render(sample_reports())
        self.assertEqual(list(df.columns), SUMMARY_COLUMNS)
        self.assertEqual(len(df), 3)
        self.assertEqual(df["unexpected"].tolist(), [False, False, True])

    def test_details(self):
        """Test sub-reports become rows pointing at their command."""
        df = DataFrameOutput(include_details=True).render(sample_reports())
        self.assertEqual(len(df), 5)
        children = df[df["parent"] == "check_pure"]
        self.assertEqual(children["check"].tolist(), ["check_almost_unperforated", "check_almost_divisible"])
        self.assertEqual(set(children["command"]), {0})

    def test_status_counts(self):
        """Test counts per status and expectation."""
        counts = DataFrameOutput().status_counts(sample_reports())
        table = {(row.status, row.expected): row.count for row in counts.itertuples()}
        self.assertEqual(table, {("fail", "fail"): 1, ("fail", "pass"): 1, ("pass", "pass"): 1})
        self.assertTrue(DataFrameOutput().status_counts([]).empty)


if __name__ == '__main__':
    unittest.main()
