"""
Base module for report renderers.

A renderer turns the ordered list of command reports of one scenario run
into a single document and persists it next to the other run artifacts.
"""
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Union

from cuf.base import CheckReport

logger = logging.getLogger(__name__)


class OutputRenderer(ABC):
    """
    Abstract base class for report renderers.

    Extension approach:
        Subclass, set format_name and extension, implement render_list().
        Register the class in cuf.output.RENDERERS to expose it as a
        --format choice.
    """

    format_name: str = "base"
    extension: str = ".txt"

    def __init__(self, include_timing: bool = True):
        """
        Args:
            include_timing: When False every elapsed_ms is written as 0, so
                identical runs produce byte-identical files
        """
        self.include_timing = include_timing

    def prepare(self, report: CheckReport) -> CheckReport:
        """Apply the timing policy to a report and all of its sub-reports."""
        if self.include_timing:
            return report
        return report.model_copy(update={
            "elapsed_ms": 0.0,
            "details": [self.prepare(d) for d in report.details],
        })

    @abstractmethod
    def render_list(self, reports: List[CheckReport]) -> str:
        """Render the reports of one run, in order."""
        pass

    def render(self, report: CheckReport) -> str:
        return self.render_list([report])

    def save_list(self, reports: List[CheckReport], filepath: Union[str, Path]) -> Path:
        """
        Write the rendered reports to filepath, creating parent directories.

        Raises:
            OSError: if the destination is not writable
        """
        path = Path(filepath)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.render_list(reports))
        logger.info(f"wrote {len(reports)} reports to {path}")
        return path
