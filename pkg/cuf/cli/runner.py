"""
Scenario runner: executes commands in declaration order and persists reports.

Each command is isolated: an exception inside a checker becomes a failing
report and the run continues. The exit status counts only unexpected
outcomes, so a command declared ``expect = fail`` passes the run when it fails.
"""
import logging
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, NamedTuple, Optional

from cuf.base import CheckReport, CheckStatus, CuError, Stopwatch
from cuf.catalog import parse_flag, parse_primes, split_list
from cuf.cli.scenario import SETTING_KEYS, Command, CommandKind, Scenario, Workspace, build_workspace
from cuf.config import Config, DEFAULT_CONFIG
from cuf.factorization.alpha import (
    FactorPair,
    alpha_eval,
    alpha_eval_oracle,
    single_map_pair,
    verify_alpha_bimorphism,
)
from cuf.factorization.extension import check_z_extension, lemma_almunpf_check
from cuf.factorization.mu import MuSpec, mu_sample
from cuf.factorization.rational import alpha_q_eval, verify_alpha_q
from cuf.factorization.soft import alpha_soft_eval, verify_soft_identity
from cuf.morphisms.checks import (
    check_cu_morphism,
    check_generalized_cu_morphism,
    check_pure,
    check_q_rational,
    check_soft_morphism,
    check_w_multiplication,
)
from cuf.oracle.suite import DEFAULT_MODELS, LemmaSuiteConfig, lemma_suite
from cuf.output import DataFrameOutput, get_renderer
from cuf.semigroup.axioms import check_axioms

logger = logging.getLogger(__name__)


class ReportWriteError(CuError):
    """Raised when reports cannot be written to the output directory."""
    pass


class RunOutcome(NamedTuple):
    reports: List[CheckReport]
    exit_status: int


def effective_config(config: Config, scenario: Scenario, overrides: Optional[Dict] = None) -> Config:
    """
    Merge configuration layers: Config, then scenario settings, then CLI flags.

    Args:
        overrides: Config attribute -> value; None values are ignored
    """
    updates = {}
    for key, text in scenario.settings.items():
        attribute = SETTING_KEYS[key]
        if attribute == "report_format":
            updates[attribute] = text
        elif attribute == "include_timing":
            updates[attribute] = parse_flag(text)
        else:
            updates[attribute] = int(text)
    updates.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return replace(config, **updates)


class _Context:
    """Per-command view of the arguments, defaults filled from the config."""

    def __init__(self, command: Command, ws: Workspace, config: Config):
        self.command = command
        self.args = command.args
        self.ws = ws
        self.config = config

    @property
    def depth(self) -> int:
        return self.number("depth", self.config.depth)

    def number(self, key: str, default: int) -> int:
        return int(self.args[key]) if key in self.args else default

    def flag(self, key: str, default: bool = False) -> bool:
        return parse_flag(self.args[key]) if key in self.args else default

    def morphism(self, key: str = "morphism"):
        return self.ws.morphisms[self.args[key]]

    def element(self, key: str):
        return self.ws.element(self.command, key)

    def pair(self) -> FactorPair:
        if "phi1" in self.args:
            return FactorPair(self.morphism("phi1"), self.morphism("phi2"))
        return single_map_pair(self.morphism(), self.args["through"], self.depth,
                               self.number("k-max", 4), self.number("m-max", 4), self.config.witness_depth_factor)


def _compare(ctx: _Context, check: str, value, exact: bool, sw: Stopwatch, pair: FactorPair,
             message: str) -> CheckReport:
    """Report for a compute-* command, checking an ``equals`` expectation when given."""
    T = pair.target
    text = T.format(value)
    status = CheckStatus.PASS if exact else CheckStatus.INCONCLUSIVE
    counterexample = None
    if "equals" in ctx.args:
        expected = ctx.element("equals")
        if exact and value != expected:
            status = CheckStatus.FAIL
            counterexample = {"x": ctx.args["x"], "t": ctx.args["t"], "value": text, "expected": T.format(expected)}
            message = f"{check} gave {text}, expected {T.format(expected)}"
    return CheckReport(
        check=check, status=status, depth=ctx.depth, exact=exact, elapsed_ms=sw.elapsed_ms, instances=1,
        value=text, counterexample=counterexample, message=message, metadata={"pair": pair.name},
    )


def run_check_axioms(ctx: _Context) -> CheckReport:
    return check_axioms(ctx.ws.models[ctx.args["model"]], ctx.depth, ctx.config.chain_depth)


def run_check_morphism(ctx: _Context) -> CheckReport:
    f = ctx.morphism()
    if ctx.flag("cu", f.declared_cu_morphism):
        return check_cu_morphism(f, ctx.depth, ctx.config.chain_depth, ctx.config.jobs)
    return check_generalized_cu_morphism(f, ctx.depth, ctx.config.chain_depth, ctx.config.jobs)


def run_check_pure(ctx: _Context) -> CheckReport:
    return check_pure(ctx.morphism(), ctx.depth, ctx.number("k-max", 4), ctx.number("m-max", 4),
                      ctx.config.witness_depth_factor, ctx.config.jobs)


def run_check_q_rational(ctx: _Context) -> CheckReport:
    return check_q_rational(ctx.morphism(), parse_primes(ctx.args["primes"]), ctx.depth,
                            ctx.config.witness_depth_factor)


def run_check_soft(ctx: _Context) -> CheckReport:
    if ctx.flag("w-multiplication"):
        return check_w_multiplication(ctx.morphism(), ctx.depth, ctx.number("k-max", 4), ctx.number("m-max", 4),
                                      ctx.config.witness_depth_factor, ctx.config.jobs)
    return check_soft_morphism(ctx.morphism(), ctx.depth)


def run_compute_alpha(ctx: _Context) -> CheckReport:
    p = ctx.pair()
    x, t = ctx.element("x"), ctx.element("t")
    with Stopwatch() as sw:
        if ctx.flag("oracle"):
            value, exact = alpha_eval_oracle(p, x, t, ctx.depth)
            how = "oracle" if exact else "oracle, lower bound only"
        else:
            value, exact = alpha_eval(p, x, t, ctx.depth, ctx.config.chain_depth,
                                      ctx.config.witness_depth_factor), True
            how = "witness chain"
    return _compare(ctx, "compute_alpha", value, exact, sw, p, f"alpha({ctx.args['x']}, {ctx.args['t']}) by {how}")


def run_compute_alpha_q(ctx: _Context) -> CheckReport:
    p = ctx.pair()
    with Stopwatch() as sw:
        value = alpha_q_eval(p, ctx.element("x"), ctx.element("t"), parse_primes(ctx.args["primes"]), ctx.depth,
                             ctx.config.chain_depth, ctx.config.witness_depth_factor)
    return _compare(ctx, "compute_alpha_q", value, True, sw, p,
                    f"alpha_q({ctx.args['x']}, {ctx.args['t']})")


def run_compute_alpha_soft(ctx: _Context) -> CheckReport:
    p = ctx.pair()
    with Stopwatch() as sw:
        value = alpha_soft_eval(p, ctx.element("x"), ctx.element("t"), ctx.depth, ctx.config.chain_depth,
                                ctx.config.witness_depth_factor)
    return _compare(ctx, "compute_alpha_soft", value, True, sw, p,
                    f"alpha({ctx.args['x']}, soft:{ctx.args['t']})")


def run_verify_bimorphism(ctx: _Context) -> CheckReport:
    p = ctx.pair()
    variant = ctx.args.get("variant", "z")
    cfg = ctx.config
    if variant == "q":
        return verify_alpha_q(p, parse_primes(ctx.args.get("primes", "")), ctx.depth, cfg.chain_depth,
                              cfg.witness_depth_factor)
    if variant == "soft":
        return verify_soft_identity(p, ctx.depth, cfg.chain_depth, cfg.witness_depth_factor)
    pair_depth = ctx.number("pair-depth", 0) or None
    return verify_alpha_bimorphism(p, ctx.depth, ctx.number("k-max", 4), ctx.number("m-max", 4), pair_depth,
                                   cfg.chain_depth, cfg.witness_depth_factor, cfg.jobs)


def run_lemma_suite(ctx: _Context) -> CheckReport:
    cfg = LemmaSuiteConfig(
        depth=ctx.depth,
        frac_bound=ctx.number("frac-bound", ctx.config.frac_bound),
        models=split_list(ctx.args["models"]) if "models" in ctx.args else list(DEFAULT_MODELS),
        pairs=split_list(ctx.args["pairs"]) if "pairs" in ctx.args else None,
        seed=ctx.number("seed", ctx.config.seed),
        samples=ctx.number("samples", 20),
        jobs=ctx.config.jobs,
    )
    return lemma_suite(cfg)


def run_check_extension(ctx: _Context) -> CheckReport:
    return check_z_extension(ctx.element("compact-image"), ctx.morphism("gamma"), ctx.depth,
                             ctx.config.chain_depth)


def run_check_mu(ctx: _Context) -> CheckReport:
    if "k1" in ctx.args:
        interpolant = ctx.element("interpolant") if "interpolant" in ctx.args else None
        return lemma_almunpf_check(
            ctx.morphism(), ctx.number("k1", 1), ctx.number("n1", 1), ctx.number("k2", 1), ctx.number("n2", 1),
            ctx.element("x1"), ctx.element("x2"), ctx.depth, interpolant,
        )
    S = ctx.morphism().domain if "morphism" in ctx.args else ctx.ws.models[ctx.args["model"]]
    x = ctx.element("x")
    x_prime = ctx.element("x-prime") if "x-prime" in ctx.args else S.zero
    spec = MuSpec(ctx.number("k", 1), ctx.number("n", 1), x_prime, x)
    with Stopwatch() as sw:
        sample = mu_sample(S, spec, ctx.depth)
    return CheckReport(
        check="mu_sample", status=CheckStatus.PASS, depth=ctx.depth, elapsed_ms=sw.elapsed_ms,
        instances=len(S.grid(ctx.depth)), value="{" + ", ".join(S.format(y) for y in sample) + "}",
        message=f"{len(sample)} grid elements in the witness set", exact=S.search_is_exhaustive(
            S.multiply(spec.k, spec.x), ctx.depth),
    )


HANDLERS: Dict[CommandKind, Callable[[_Context], CheckReport]] = {
    CommandKind.CHECK_AXIOMS: run_check_axioms,
    CommandKind.CHECK_MORPHISM: run_check_morphism,
    CommandKind.CHECK_PURE: run_check_pure,
    CommandKind.CHECK_Q_RATIONAL: run_check_q_rational,
    CommandKind.CHECK_SOFT: run_check_soft,
    CommandKind.COMPUTE_ALPHA: run_compute_alpha,
    CommandKind.COMPUTE_ALPHA_Q: run_compute_alpha_q,
    CommandKind.COMPUTE_ALPHA_SOFT: run_compute_alpha_soft,
    CommandKind.VERIFY_BIMORPHISM: run_verify_bimorphism,
    CommandKind.LEMMA_SUITE: run_lemma_suite,
    CommandKind.CHECK_EXTENSION: run_check_extension,
    CommandKind.CHECK_MU: run_check_mu,
}


def run_command(command: Command, ws: Workspace, config: Config) -> CheckReport:
    """Run one command; exceptions become failing reports."""
    logger.info(f"line {command.line}: {command.kind.value}")
    try:
        report = HANDLERS[command.kind](_Context(command, ws, config))
    except Exception as e:
        logger.error(f"{command.kind.value} at line {command.line} failed: {e}")
        report = CheckReport(
            check=command.kind.value.replace("-", "_"), status=CheckStatus.FAIL,
            depth=_Context(command, ws, config).depth, message=f"{type(e).__name__}: {e}",
            metadata={"error": type(e).__name__},
        )
    if command.args.get("expect") == "fail" and "error" not in report.metadata:
        report = report.model_copy(update={"expected": CheckStatus.FAIL})
    return report.model_copy(update={"metadata": dict(report.metadata, line=command.line)})


def exit_status(reports: List[CheckReport]) -> int:
    return 1 if any(r.unexpected for r in reports) else 0


def write_reports(reports: List[CheckReport], name: str, config: Config) -> Path:
    """
    Persist the reports of one scenario under config.out_dir.

    Writes ``<name>.txt`` or ``<name>.json`` in the configured format and a
    ``<name>.summary.csv`` table.

    Raises:
        ReportWriteError: if the output directory is not writable
    """
    renderer = get_renderer(config.report_format, config.include_timing)
    out = Path(config.out_dir)
    path = out / f"{name}{renderer.extension}"
    try:
        renderer.save_list(reports, path)
        table = DataFrameOutput().render([renderer.prepare(r) for r in reports])
        table.to_csv(out / f"{name}.summary.csv", index=False)
    except OSError as e:
        raise ReportWriteError(f"cannot write reports to {out}: {e}") from e
    return path


def run_scenario(scenario: Scenario, config: Optional[Config] = None, overrides: Optional[Dict] = None,
                 persist: bool = True) -> RunOutcome:
    """
    Execute every command of a validated scenario in order.

    Args:
        scenario: Output of parse_scenario
        config: Base configuration (DEFAULT_CONFIG when None)
        overrides: CLI-level Config overrides
        persist: Write reports to the configured output directory
    Returns:
        RunOutcome(reports, exit_status); exit status 0 iff no outcome is unexpected
    Raises:
        ReportWriteError: if persisting fails
    """
    cfg = effective_config(config or DEFAULT_CONFIG, scenario, overrides)
    ws = build_workspace(scenario)
    reports = [run_command(c, ws, cfg) for c in scenario.commands]
    status = exit_status(reports)
    logger.info(f"{scenario.name}: {len(reports)} commands, exit status {status}")
    if persist:
        write_reports(reports, scenario.name, cfg)
    return RunOutcome(reports, status)
