"""Report renderers for scenario runs."""
from cuf.output.base import OutputRenderer
from cuf.output.dataframe_output import DataFrameOutput
from cuf.output.json_output import JSONOutputRenderer, load_reports
from cuf.output.report import ReportRenderer

RENDERERS = {
    JSONOutputRenderer.format_name: JSONOutputRenderer,
    ReportRenderer.format_name: ReportRenderer,
}


def get_renderer(format_name: str, include_timing: bool = True) -> OutputRenderer:
    if format_name not in RENDERERS:
        raise ValueError(f"unknown report format: {format_name}")
    return RENDERERS[format_name](include_timing=include_timing)


__all__ = [
    "OutputRenderer", "JSONOutputRenderer", "ReportRenderer", "DataFrameOutput",
    "RENDERERS", "get_renderer", "load_reports",
]
