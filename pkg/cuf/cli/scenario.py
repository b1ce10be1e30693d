"""
Scenario documents: parsing, validation and serialization.

A scenario is a line-oriented text file of blocks. A block header starts
in column 1 and ends with a colon; its body lines are indented
``key = value`` pairs; ``#`` starts a comment::

    settings:
      depth = 6

    model Z:
      kind = Z

    morphism id:
      kind = identity
      domain = Z

    check-pure:
      morphism = id
      k-max = 4

Headers are ``settings``, ``model NAME``, ``morphism NAME`` or a command
name. Elements use the model's own syntax: ``compact:3``, ``soft:1/2``,
``inf``, bracketed tuples for products.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel

from cuf.base import CuError
from cuf.catalog import (
    CatalogError,
    UnknownKind,
    build_model,
    build_morphism,
    model_kind,
    morphism_kind,
    parse_flag,
    parse_primes,
    split_list,
)
from cuf.factorization.alpha import Z_PARAMETER
from cuf.morphisms.base import Morphism, MorphismKind
from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.elements import Element
from cuf.semigroup.scalar import HalfLineModel, KqModel

logger = logging.getLogger(__name__)


class ScenarioError(CuError):
    """Diagnostic for a malformed scenario, located by line and column (1-based)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ScenarioSyntaxError(ScenarioError):
    pass


class UnknownModelKind(ScenarioError):
    pass


class UnknownMorphismKind(ScenarioError):
    pass


class UndeclaredName(ScenarioError):
    """A command or declaration names a model or morphism that is not declared."""

    def __init__(self, name: str, line: int = 0, column: int = 0):
        super().__init__(f"undeclared name {name!r}", line, column)
        self.name = name


class CyclicComposition(ScenarioError):
    pass


class CommandKind(str, Enum):
    """Commands a scenario can run."""
    CHECK_AXIOMS = "check-axioms"
    CHECK_MORPHISM = "check-morphism"
    CHECK_PURE = "check-pure"
    CHECK_Q_RATIONAL = "check-q-rational"
    CHECK_SOFT = "check-soft"
    COMPUTE_ALPHA = "compute-alpha"
    COMPUTE_ALPHA_Q = "compute-alpha-q"
    COMPUTE_ALPHA_SOFT = "compute-alpha-soft"
    VERIFY_BIMORPHISM = "verify-bimorphism"
    LEMMA_SUITE = "lemma-suite"
    CHECK_EXTENSION = "check-extension"
    CHECK_MU = "check-mu"


COMMON_KEYS = {"depth", "expect"}

COMMAND_KEYS: Dict[CommandKind, set] = {
    CommandKind.CHECK_AXIOMS: {"model"},
    CommandKind.CHECK_MORPHISM: {"morphism", "cu"},
    CommandKind.CHECK_PURE: {"morphism", "k-max", "m-max"},
    CommandKind.CHECK_Q_RATIONAL: {"morphism", "primes"},
    CommandKind.CHECK_SOFT: {"morphism", "w-multiplication", "k-max", "m-max"},
    CommandKind.COMPUTE_ALPHA: {"phi1", "phi2", "x", "t", "oracle", "equals"},
    CommandKind.COMPUTE_ALPHA_Q: {"phi1", "phi2", "x", "t", "primes", "equals"},
    CommandKind.COMPUTE_ALPHA_SOFT: {"phi1", "phi2", "x", "t", "equals"},
    CommandKind.VERIFY_BIMORPHISM: {"phi1", "phi2", "morphism", "through", "variant", "primes", "pair-depth",
                                    "k-max", "m-max"},
    CommandKind.LEMMA_SUITE: {"models", "pairs", "samples", "seed", "frac-bound"},
    CommandKind.CHECK_EXTENSION: {"gamma", "compact-image"},
    CommandKind.CHECK_MU: {"morphism", "model", "k", "n", "x-prime", "x", "k1", "n1", "k2", "n2", "x1", "x2",
                           "interpolant"},
}

REQUIRED_KEYS: Dict[CommandKind, set] = {
    CommandKind.CHECK_AXIOMS: {"model"},
    CommandKind.CHECK_MORPHISM: {"morphism"},
    CommandKind.CHECK_PURE: {"morphism"},
    CommandKind.CHECK_Q_RATIONAL: {"morphism", "primes"},
    CommandKind.CHECK_SOFT: {"morphism"},
    CommandKind.COMPUTE_ALPHA: {"phi1", "phi2", "x", "t"},
    CommandKind.COMPUTE_ALPHA_Q: {"phi1", "phi2", "x", "t", "primes"},
    CommandKind.COMPUTE_ALPHA_SOFT: {"phi1", "phi2", "x", "t"},
    CommandKind.CHECK_EXTENSION: {"gamma", "compact-image"},
}

MODEL_REFS = {"model"}
MORPHISM_REFS = {"morphism", "phi1", "phi2", "gamma"}
INT_KEYS = {"depth", "k-max", "m-max", "pair-depth", "k", "n", "k1", "n1", "k2", "n2", "samples", "seed",
            "frac-bound"}
FLAG_KEYS = {"cu", "oracle", "w-multiplication"}
CHOICES = {
    "expect": ("pass", "fail"),
    "variant": ("z", "q", "soft"),
    "through": ("domain", "codomain"),
}
ELEMENT_KEYS = {"x", "t", "equals", "compact-image", "x-prime", "x1", "x2", "interpolant"}

# scenario setting -> Config attribute
SETTING_KEYS = {
    "depth": "depth",
    "frac-bound": "frac_bound",
    "seed": "seed",
    "format": "report_format",
    "jobs": "jobs",
    "chain-depth": "chain_depth",
    "timing": "include_timing",
}

NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


class ModelDecl(BaseModel):
    name: str
    kind: ModelKind
    params: Dict[str, str] = {}
    line: int = 0


class MorphismDecl(BaseModel):
    name: str
    kind: MorphismKind
    params: Dict[str, str] = {}
    line: int = 0


class Command(BaseModel):
    kind: CommandKind
    args: Dict[str, str] = {}
    line: int = 0


class Scenario(BaseModel):
    """Validated scenario: declarations and commands in document order."""
    name: str = "scenario"
    settings: Dict[str, str] = {}
    models: List[ModelDecl] = []
    morphisms: List[MorphismDecl] = []
    commands: List[Command] = []

    def structure(self) -> dict:
        """Content without source positions, for structural comparison."""
        no_line = {"__all__": {"line"}}
        return self.model_dump(exclude={"name": True, "models": no_line, "morphisms": no_line,
                                        "commands": no_line})


@dataclass
class Workspace:
    """Objects built from a scenario's declarations."""
    models: Dict[str, SemigroupModel] = field(default_factory=dict)
    morphisms: Dict[str, Morphism] = field(default_factory=dict)

    def element(self, command: Command, key: str) -> Element:
        """
        Parse an element argument in the model it belongs to.

        x, x-prime, x1, x2 and interpolant live in the source of the map;
        t in the parameter model of the command; equals in the target;
        compact-image in the codomain of gamma.
        """
        args = command.args
        text = args[key]
        kind = command.kind
        if key == "t":
            if kind == CommandKind.COMPUTE_ALPHA_Q:
                return KqModel(parse_primes(args.get("primes", ""))).parse(text)
            if kind == CommandKind.COMPUTE_ALPHA_SOFT:
                return HalfLineModel().parse(text)
            return Z_PARAMETER.parse(text)
        if key == "equals":
            return self.morphisms[args["phi2"]].codomain.parse(text)
        if key == "compact-image":
            return self.morphisms[args["gamma"]].codomain.parse(text)
        if "phi1" in args:
            return self.morphisms[args["phi1"]].domain.parse(text)
        if "morphism" in args:
            return self.morphisms[args["morphism"]].domain.parse(text)
        return self.models[args["model"]].parse(text)


@dataclass
class _Entry:
    value: str
    line: int
    column: int


@dataclass
class _Block:
    head: str
    line: int
    entries: Dict[str, _Entry] = field(default_factory=dict)


def _blocks(text: str) -> List[_Block]:
    blocks: List[_Block] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        content = raw.split("#", 1)[0].rstrip()
        if not content.strip():
            continue
        if not content[0].isspace():
            if not content.endswith(":"):
                raise ScenarioSyntaxError("expected a block header ending in ':'", lineno, 1)
            blocks.append(_Block(content[:-1].strip(), lineno))
            continue
        indent = len(content) - len(content.lstrip())
        if not blocks:
            raise ScenarioSyntaxError("indented line outside any block", lineno, indent + 1)
        key, sep, value = content.strip().partition("=")
        key = key.strip()
        if not sep or not key:
            raise ScenarioSyntaxError("expected 'key = value'", lineno, indent + 1)
        block = blocks[-1]
        if key in block.entries:
            raise ScenarioSyntaxError(f"duplicate key {key!r}", lineno, indent + 1)
        value_column = raw.index("=", indent) + 2 + (len(value) - len(value.lstrip()))
        block.entries[key] = _Entry(value.strip(), lineno, value_column)
    return blocks


def _declared_name(block: _Block, word: str) -> str:
    parts = block.head.split()
    if len(parts) != 2:
        raise ScenarioSyntaxError(f"a {word} header reads '{word} NAME:'", block.line, 1)
    name = parts[1]
    if not NAME_PATTERN.match(name):
        raise ScenarioSyntaxError(f"invalid name {name!r}", block.line, len(word) + 2)
    return name


def _params(block: _Block) -> Dict[str, str]:
    return {k: e.value for k, e in block.entries.items() if k != "kind"}


def _kind_entry(block: _Block) -> _Entry:
    if "kind" not in block.entries:
        raise ScenarioSyntaxError("declaration needs 'kind'", block.line, 1)
    return block.entries["kind"]


def _check_settings(block: _Block) -> Dict[str, str]:
    settings = {}
    for key, entry in block.entries.items():
        if key not in SETTING_KEYS:
            raise ScenarioSyntaxError(f"unknown setting {key!r}", entry.line, 3)
        try:
            if key == "format":
                if entry.value not in ("text", "machine"):
                    raise ValueError("format is text or machine")
            elif key == "timing":
                parse_flag(entry.value)
            elif int(entry.value) < (0 if key == "seed" else 1):
                raise ValueError(f"{key} is too small")
        except ValueError as exc:
            raise ScenarioSyntaxError(str(exc), entry.line, entry.column) from exc
        settings[key] = entry.value
    return settings


def _check_arguments(kind: CommandKind, block: _Block) -> None:
    allowed = COMMAND_KEYS[kind] | COMMON_KEYS
    for key, entry in block.entries.items():
        if key not in allowed:
            raise ScenarioSyntaxError(f"{kind.value} does not take {key!r}", entry.line, 3)
        try:
            if key in INT_KEYS and int(entry.value) < (0 if key == "seed" else 1):
                raise ValueError(f"{key} must be positive")
            if key in FLAG_KEYS:
                parse_flag(entry.value)
            if key in CHOICES and entry.value not in CHOICES[key]:
                raise ValueError(f"{key} is one of {', '.join(CHOICES[key])}")
            if key == "primes":
                parse_primes(entry.value)
        except ValueError as exc:
            raise ScenarioSyntaxError(str(exc), entry.line, entry.column) from exc
    missing = sorted(REQUIRED_KEYS.get(kind, set()) - set(block.entries))
    if kind == CommandKind.VERIFY_BIMORPHISM and not ({"phi1", "phi2"} <= set(block.entries)
                                                       or {"morphism", "through"} <= set(block.entries)):
        missing = ["phi1/phi2 or morphism/through"]
    if kind == CommandKind.CHECK_MU and not ({"morphism", "k1", "n1", "k2", "n2", "x1", "x2"} <= set(block.entries)
                                              or {"k", "n", "x"} <= set(block.entries)):
        missing = ["k1, n1, k2, n2, x1, x2 (lemma) or k, n, x (sample)"]
    if missing:
        raise ScenarioSyntaxError(f"{kind.value} needs {missing[0]}", block.line, 1)


def _morphism_order(decls: List[MorphismDecl], positions: Dict[str, _Block]) -> List[MorphismDecl]:
    """Declarations ordered so every referenced morphism is built first."""
    by_name = {d.name: d for d in decls}

    def refs(d: MorphismDecl) -> List[str]:
        names = split_list(d.params.get("maps", ""))
        if "soft" in d.params:
            names.append(d.params["soft"])
        return names

    for d in decls:
        for ref in refs(d):
            if ref not in by_name:
                entry = positions[d.name].entries.get("maps") or positions[d.name].entries.get("soft")
                raise UndeclaredName(ref, entry.line, entry.column)
    ordered: List[MorphismDecl] = []
    state: Dict[str, str] = {}

    def visit(d: MorphismDecl, path: List[str]) -> None:
        if state.get(d.name) == "done":
            return
        if state.get(d.name) == "active":
            cycle = path[path.index(d.name):] + [d.name]
            raise CyclicComposition(f"composition cycle {' -> '.join(cycle)}", positions[d.name].line, 1)
        state[d.name] = "active"
        for ref in refs(d):
            visit(by_name[ref], path + [d.name])
        state[d.name] = "done"
        ordered.append(d)

    for d in decls:
        visit(d, [])
    return ordered


def _build(models: List[ModelDecl], morphisms: List[MorphismDecl], positions: Dict[str, _Block]) -> Workspace:
    ws = Workspace()
    for decl in models:
        for ref in split_list(decl.params.get("factors", "")):
            if ref not in ws.models:
                entry = positions[decl.name].entries["factors"]
                raise UndeclaredName(ref, entry.line, entry.column)
        try:
            ws.models[decl.name] = build_model(decl.kind, decl.params, ws.models, decl.name)
        except (CatalogError, CuError, ValueError) as exc:
            raise ScenarioSyntaxError(f"model {decl.name}: {exc}", decl.line, 1) from exc
    for decl in morphisms:
        block = positions[decl.name]
        for key in ("domain", "codomain"):
            if key in decl.params and decl.params[key] not in ws.models:
                entry = block.entries[key]
                raise UndeclaredName(decl.params[key], entry.line, entry.column)
    for decl in _morphism_order(morphisms, positions):
        try:
            ws.morphisms[decl.name] = build_morphism(decl.kind, decl.params, ws.models, ws.morphisms, decl.name)
        except (CatalogError, CuError, ValueError) as exc:
            raise ScenarioSyntaxError(f"morphism {decl.name}: {exc}", decl.line, 1) from exc
    return ws


def build_workspace(scenario: Scenario) -> Workspace:
    """Build the declared models and morphisms of a validated scenario."""
    positions = {d.name: _Block("", d.line) for d in scenario.models + scenario.morphisms}
    for d in scenario.models + scenario.morphisms:
        positions[d.name].entries = {k: _Entry(v, d.line, 1) for k, v in d.params.items()}
    return _build(scenario.models, scenario.morphisms, positions)


def _check_references(command: Command, block: _Block, ws: Workspace) -> None:
    for key, entry in block.entries.items():
        if key in MODEL_REFS and entry.value not in ws.models:
            raise UndeclaredName(entry.value, entry.line, entry.column)
        if key in MORPHISM_REFS and entry.value not in ws.morphisms:
            raise UndeclaredName(entry.value, entry.line, entry.column)
    for key, entry in block.entries.items():
        if key in ELEMENT_KEYS:
            try:
                ws.element(command, key)
            except (CatalogError, CuError, ValueError, KeyError) as exc:
                raise ScenarioSyntaxError(f"cannot read {key} = {entry.value}: {exc}", entry.line,
                                          entry.column) from exc


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    """
    Parse and validate a scenario document.

    Args:
        text: Scenario source
        name: Scenario name, used for report file names
    Returns:
        Scenario whose names all resolve and whose compositions are acyclic
    Raises:
        ScenarioError: (or a subclass) with the offending line and column
    """
    settings: Dict[str, str] = {}
    models: List[ModelDecl] = []
    morphisms: List[MorphismDecl] = []
    commands: List[Tuple[Command, _Block]] = []
    positions: Dict[str, _Block] = {}
    seen_settings = False
    for block in _blocks(text):
        word = block.head.split()[0] if block.head else ""
        if word == "settings":
            if block.head != "settings":
                raise ScenarioSyntaxError("the settings header takes no name", block.line, 1)
            if seen_settings:
                raise ScenarioSyntaxError("settings may appear once", block.line, 1)
            seen_settings = True
            settings = _check_settings(block)
        elif word in ("model", "morphism"):
            decl_name = _declared_name(block, word)
            if decl_name in positions:
                raise ScenarioSyntaxError(f"{decl_name!r} is declared twice", block.line, len(word) + 2)
            positions[decl_name] = block
            entry = _kind_entry(block)
            try:
                if word == "model":
                    models.append(ModelDecl(name=decl_name, kind=model_kind(entry.value), params=_params(block),
                                            line=block.line))
                else:
                    morphisms.append(MorphismDecl(name=decl_name, kind=morphism_kind(entry.value),
                                                  params=_params(block), line=block.line))
            except UnknownKind as exc:
                error = UnknownModelKind if word == "model" else UnknownMorphismKind
                raise error(str(exc), entry.line, entry.column) from exc
        else:
            try:
                kind = CommandKind(block.head)
            except ValueError:
                raise ScenarioSyntaxError(f"unknown block {block.head!r}", block.line, 1) from None
            _check_arguments(kind, block)
            args = {k: e.value for k, e in block.entries.items()}
            commands.append((Command(kind=kind, args=args, line=block.line), block))
    ws = _build(models, morphisms, positions)
    for command, block in commands:
        _check_references(command, block, ws)
    logger.debug(f"parsed scenario {name}: {len(models)} models, {len(morphisms)} morphisms, "
                 f"{len(commands)} commands")
    return Scenario(name=name, settings=settings, models=models, morphisms=morphisms,
                    commands=[c for c, _ in commands])


def serialize_scenario(scenario: Scenario) -> str:
    """Render a scenario in the document syntax; parsing the result gives an equivalent scenario."""
    def body(pairs: Dict[str, str]) -> str:
        return "".join(f"  {k} = {v}\n" for k, v in pairs.items())

    blocks = []
    if scenario.settings:
        blocks.append("settings:\n" + body(scenario.settings))
    for m in scenario.models:
        blocks.append(f"model {m.name}:\n" + body({"kind": m.kind.value, **m.params}))
    for f in scenario.morphisms:
        blocks.append(f"morphism {f.name}:\n" + body({"kind": f.kind.value, **f.params}))
    for c in scenario.commands:
        blocks.append(f"{c.kind.value}:\n" + body(c.args))
    return "\n".join(blocks)


def load_scenario(path) -> Scenario:
    """Read and parse a scenario file; the file stem names the scenario."""
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), name=path.stem)


def counterexample_scenario(scenario: Scenario, command: Command, overrides: Optional[Dict[str, str]] = None
                            ) -> Scenario:
    """A scenario with the same declarations and a single, possibly adjusted, command."""
    args = dict(command.args, **(overrides or {}))
    return scenario.model_copy(update={"commands": [Command(kind=command.kind, args=args, line=command.line)]})
