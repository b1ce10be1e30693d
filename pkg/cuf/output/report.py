"""
Human-readable report format.
"""
from typing import List

from cuf.base import CheckReport, CheckStatus
from cuf.output.base import OutputRenderer
from cuf.output.dataframe_output import DataFrameOutput


class ReportRenderer(OutputRenderer):
    """Render reports as a plain-text document: one block per command, then a summary table."""

    format_name = "text"
    extension = ".txt"

    def render_list(self, reports: List[CheckReport]) -> str:
        reports = [self.prepare(r) for r in reports]
        text = "# cu-factor report\n\n"
        for index, report in enumerate(reports, 1):
            text += self._block(report, f"{index}. ")
            text += "\n"
        text += "## Summary\n"
        if reports:
            table = DataFrameOutput().render(reports)
            text += table.to_string(index=False) + "\n"
        unexpected = sum(1 for r in reports if r.unexpected)
        text += f"\n{len(reports)} commands, {unexpected} unexpected\n"
        return text

    def _block(self, report: CheckReport, prefix: str = "", indent: str = "") -> str:
        marker = report.status.value.upper()
        if report.expected == CheckStatus.FAIL:
            marker += " (expected fail)"
        if report.unexpected:
            marker += " !"
        text = f"{indent}{prefix}{report.check}: {marker}\n"
        if report.message:
            text += f"{indent}   {report.message}\n"
        if report.value is not None:
            text += f"{indent}   value: {report.value}\n"
        if report.counterexample:
            roles = ", ".join(f"{k}={v}" for k, v in report.counterexample.items())
            text += f"{indent}   counterexample: {roles}\n"
        facts = [f"instances={report.instances}", f"exact={str(report.exact).lower()}"]
        if report.depth is not None:
            facts.insert(0, f"depth={report.depth}")
        facts.append(f"elapsed_ms={report.elapsed_ms:.3f}")
        text += f"{indent}   {' '.join(facts)}\n"
        for detail in report.details:
            text += self._block(detail, "- ", indent + "   ")
        return text
