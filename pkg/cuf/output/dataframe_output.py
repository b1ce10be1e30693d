"""
Tabular summaries of a run.
"""
from typing import List

import pandas as pd

from cuf.base import CheckReport

SUMMARY_COLUMNS = ["check", "status", "expected", "unexpected", "depth", "exact", "instances", "elapsed_ms"]


class DataFrameOutput:
    """Render reports as a pandas DataFrame, one row per report."""

    def __init__(self, include_details: bool = False):
        self.include_details = include_details

    def render(self, reports: List[CheckReport]) -> pd.DataFrame:
        """
        Args:
            reports: Command reports in run order
        Returns:
            DataFrame with SUMMARY_COLUMNS (plus "command" and "parent" when sub-reports
            are included)
        """
        rows = []
        for index, report in enumerate(reports):
            rows.append(self._row(report, index, None))
            if self.include_details:
                rows.extend(self._row(d, index, report.check) for d in report.details)
        columns = SUMMARY_COLUMNS + (["command", "parent"] if self.include_details else [])
        return pd.DataFrame(rows, columns=columns)

    def _row(self, report: CheckReport, index: int, parent) -> dict:
        row = {
            "check": report.check,
            "status": report.status.value,
            "expected": report.expected.value,
            "unexpected": report.unexpected,
            "depth": report.depth,
            "exact": report.exact,
            "instances": report.instances,
            "elapsed_ms": report.elapsed_ms,
        }
        if self.include_details:
            row.update(command=index, parent=parent)
        return row

    def status_counts(self, reports: List[CheckReport]) -> pd.DataFrame:
        """Number of reports per (status, expected) combination."""
        df = self.render(reports)
        if df.empty:
            return pd.DataFrame(columns=["status", "expected", "count"])
        return df.groupby(["status", "expected"]).size().reset_index(name="count")
