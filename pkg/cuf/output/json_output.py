"""Machine-readable report format."""
import json
from typing import Any, Dict, List

from cuf.base import CheckReport
from cuf.output.base import OutputRenderer


class JSONOutputRenderer(OutputRenderer):
    """Render reports as a JSON document with stable key order."""

    format_name = "machine"
    extension = ".json"

    def __init__(self, include_timing: bool = True, indent: int = 2, sort_keys: bool = True):
        """
        Args:
            include_timing: Keep measured elapsed times
            indent: Number of spaces for indentation in JSON output
            sort_keys: Whether to sort keys alphabetically in output
        """
        super().__init__(include_timing)
        self.indent = indent
        self.sort_keys = sort_keys

    def render_list(self, reports: List[CheckReport]) -> str:
        data = {
            "reports": [self._convert_to_dict(self.prepare(r)) for r in reports],
            "unexpected": sum(1 for r in reports if r.unexpected),
        }
        return json.dumps(data, indent=self.indent, sort_keys=self.sort_keys, ensure_ascii=False,
                          default=str) + "\n"

    def _convert_to_dict(self, report: CheckReport) -> Dict[str, Any]:
        """
        Convert a CheckReport to plain JSON values.

        The first six keys are the stable record consumed by CI tooling; the
        rest are informational.
        """
        record = {
            "check": report.check,
            "status": report.status.value,
            "counterexample": report.counterexample,
            "depth": report.depth,
            "exact": report.exact,
            "elapsed_ms": report.elapsed_ms,
            "expected": report.expected.value,
            "instances": report.instances,
            "message": report.message,
        }
        if report.value is not None:
            record["value"] = report.value
        if report.bounds:
            record["bounds"] = report.bounds
        if report.witnesses:
            record["witnesses"] = report.witnesses
        if report.metadata:
            record["metadata"] = report.metadata
        if report.details:
            record["details"] = [self._convert_to_dict(d) for d in report.details]
        return record


def load_reports(text: str) -> List[Dict[str, Any]]:
    """Parse a machine-format document back into report records."""
    return json.loads(text)["reports"]
