"""Scenario files, the command runner and the cu-factor entry point."""
from cuf.cli.runner import RunOutcome, ReportWriteError, run_command, run_scenario, write_reports
from cuf.cli.scenario import (
    Command,
    CommandKind,
    CyclicComposition,
    Scenario,
    ScenarioError,
    ScenarioSyntaxError,
    UndeclaredName,
    UnknownModelKind,
    UnknownMorphismKind,
    load_scenario,
    parse_scenario,
    serialize_scenario,
)

__all__ = [
    "Scenario", "Command", "CommandKind", "parse_scenario", "serialize_scenario", "load_scenario",
    "ScenarioError", "ScenarioSyntaxError", "UnknownModelKind", "UnknownMorphismKind", "UndeclaredName",
    "CyclicComposition", "run_scenario", "run_command", "write_reports", "RunOutcome", "ReportWriteError",
]
