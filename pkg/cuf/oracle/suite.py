"""
The lemma suite: permanence and comparison properties swept across the
built-in catalog, plus the negative controls that must keep failing.

Every section is a sub-report; the suite passes when no section has an
unexpected outcome. Sampled sweeps draw from random.Random(seed), so a
fixed configuration always yields the same report.
"""
import itertools
import logging
import random
from fractions import Fraction
from typing import Callable, List, Optional

from pydantic import BaseModel

from cuf.base import CheckReport, CheckStatus, CuError, PreconditionViolated, Stopwatch
from cuf.catalog import builtin_models, builtin_pairs
from cuf.factorization.alpha import Z_PARAMETER, AlphaTable, FactorPair, ceiling_bound
from cuf.factorization.extension import lemma_almunpf_check
from cuf.factorization.mu import MuSpec, mu_sample
from cuf.morphisms.base import Morphism
from cuf.morphisms.catalog import Composed, Identity, MultiplyBy, NatToSoft, Sigma, SoftEmbedding
from cuf.morphisms.checks import check_almost_divisible, check_almost_unperforated, check_cu_morphism, check_pure
from cuf.semigroup.axioms import (
    check_axioms,
    check_semigroup_almost_divisible,
    check_semigroup_almost_unperforated,
    check_strong_divisibility,
)
from cuf.semigroup.chains import DEFAULT_CHAIN_DEPTH
from cuf.semigroup.elements import INF, Compact, Soft

logger = logging.getLogger(__name__)

DEFAULT_MODELS = ["Z", "Nbar", "HalfLine", "Kq2", "T4", "Faulty", "ZxZ", "Lsc2"]


class LemmaSuiteConfig(BaseModel):
    """Settings of one lemma-suite run."""
    depth: int = 6
    frac_bound: int = 8
    models: List[str] = DEFAULT_MODELS
    pairs: Optional[List[str]] = None    # None: every built-in pair over the listed models
    seed: int = 0
    samples: int = 20                    # sampled lemma instances per factor pair
    k_max: int = 3
    m_max: int = 3
    jobs: int = 1


def _section(check: str, instances: int, elapsed: float, failure: Optional[dict] = None, message: str = "",
             undecided: Optional[str] = None, details: Optional[list] = None) -> CheckReport:
    if failure is not None:
        status = CheckStatus.FAIL
    elif undecided is not None:
        status = CheckStatus.INCONCLUSIVE
        message = undecided
    else:
        status = CheckStatus.PASS
    return CheckReport(check=check, status=status, counterexample=failure, instances=instances,
                       elapsed_ms=elapsed, message=message, details=details or [])


def _fractions(bound: int) -> list:
    return sorted({Fraction(p, q) for p in range(1, bound + 1) for q in range(1, bound + 1)})


def witness_comparison_section(pairs: List[FactorPair], cfg: LemmaSuiteConfig, rng: random.Random) -> CheckReport:
    """Sampled two-fraction comparisons through every φ₂."""
    count, failure, undecided = 0, None, None
    with Stopwatch() as sw:
        for p in pairs:
            S = p.phi2.domain
            grid = S.grid(3)
            ordered = [(a, b) for a in grid for b in grid if S.leq(a, b)]
            between = {(a, b): [c for c in grid if S.way_below(a, c) and S.way_below(c, b)] for a, b in ordered}
            for _ in range(cfg.samples):
                while True:
                    k1, n1, k2, n2 = (rng.randint(1, cfg.frac_bound) for _ in range(4))
                    if Fraction(k1, n1) < Fraction(k2, n2 + 1):
                        break
                x1, x2 = rng.choice(ordered)
                interpolant = rng.choice(between[(x1, x2)]) if between[(x1, x2)] else None
                try:
                    report = lemma_almunpf_check(p.phi2, k1, n1, k2, n2, x1, x2, 3, interpolant)
                except PreconditionViolated as exc:
                    undecided = undecided or str(exc)
                    continue
                count += 1
                if report.status == CheckStatus.FAIL:
                    failure = dict(report.counterexample or {}, pair=p.name,
                                   fractions=f"{k1}/{n1} {k2}/{n2}", x1=S.format(x1), x2=S.format(x2))
                    break
            if failure:
                break
    return _section("witness_comparison", count, sw.elapsed_ms, failure, "witness sets compare through phi2", undecided)


def ceiling_bound_section(pairs: List[FactorPair], cfg: LemmaSuiteConfig) -> CheckReport:
    """alpha(x, Soft(t)) ≤ ⌈t⌉·φ₂φ₁(x) over soft t with bounded denominators."""
    ts = [Soft(f) for f in _fractions(cfg.frac_bound)] + [Soft(INF)]
    count, failure, undecided = 0, None, None
    with Stopwatch() as sw:
        for p in pairs:
            alpha = AlphaTable(p, cfg.depth, DEFAULT_CHAIN_DEPTH, 2)
            for x, t in itertools.product(p.source.grid(2), ts):
                count += 1
                try:
                    value = alpha(x, t)
                except CuError as exc:
                    undecided = undecided or f"{p.name}: {exc}"
                    continue
                bound = ceiling_bound(p, x, t)
                if not p.target.leq(value, bound):
                    failure = {"pair": p.name, "x": p.source.format(x), "t": Z_PARAMETER.format(t),
                               "alpha": p.target.format(value), "bound": p.target.format(bound)}
                    break
            if failure:
                break
    return _section("ceiling_bound", count, sw.elapsed_ms, failure, "alpha stays below the ceiling bound",
                    undecided)


def anchor_section(pairs: List[FactorPair], cfg: LemmaSuiteConfig) -> CheckReport:
    """alpha(x, Soft(1)) ≤ φ₂φ₁(x) = alpha(x, Compact(1)) ≤ alpha(x, Soft(1 + 1/q))."""
    steps = [Fraction(1, q) for q in range(1, cfg.frac_bound + 1)]
    count, failure, undecided = 0, None, None
    with Stopwatch() as sw:
        for p in pairs:
            T = p.target
            alpha = AlphaTable(p, cfg.depth, DEFAULT_CHAIN_DEPTH, 2)
            for x in p.source.grid(2):
                count += 1
                try:
                    composite = p.phi2.apply(p.phi1.apply(x))
                    at_one = alpha(x, Compact(1))
                    below = alpha(x, Soft(1))
                    above = [alpha(x, Soft(1 + e)) for e in steps]
                except CuError as exc:
                    undecided = undecided or f"{p.name}: {exc}"
                    continue
                if at_one != composite or not T.leq(below, at_one) or not all(T.leq(at_one, v) for v in above):
                    failure = {"pair": p.name, "x": p.source.format(x), "alpha": T.format(at_one),
                               "soft_one": T.format(below), "expected": T.format(composite)}
                    break
            if failure:
                break
    return _section("compact_anchor", count, sw.elapsed_ms, failure, "alpha(x, 1) equals the composite", undecided)


def nesting_section(models: list, cfg: LemmaSuiteConfig) -> CheckReport:
    """μ(x″,x) ⊆ μ(x′,x) ⊆ μ(0,x) for grid x′ ≤ x″ ≤ x and small k, n."""
    depth = min(cfg.depth, 3)
    count, failure = 0, None
    with Stopwatch() as sw:
        for S in models:
            grid = S.grid(depth)
            for x1, x2, x in itertools.product(grid, repeat=3):
                if not (S._leq(x1, x2) and S._leq(x2, x)):
                    continue
                for k, n in itertools.product(range(1, 4), repeat=2):
                    count += 1
                    inner = set(mu_sample(S, MuSpec(k, n, x2, x), depth))
                    middle = set(mu_sample(S, MuSpec(k, n, x1, x), depth))
                    outer = set(mu_sample(S, MuSpec(k, n, S.zero, x), depth))
                    if not (inner <= middle <= outer):
                        failure = {"model": S.name, "x'": S.format(x1), "x''": S.format(x2), "x": S.format(x),
                                   "k": str(k), "n": str(n)}
                        break
                if failure:
                    break
            if failure:
                break
    return _section("mu_nesting", count, sw.elapsed_ms, failure, "witness sets are nested")


def _composable(models: dict) -> List[tuple]:
    """Morphism pairs (f1, f2) for the permanence sweeps, over the listed models."""
    Z, N, H = models.get("Z"), models.get("Nbar"), models.get("HalfLine")
    out = []
    if Z is not None:
        out += [(Identity(Z), Identity(Z)), (Sigma(Z), Identity(Z)), (MultiplyBy(Z, 2), Sigma(Z))]
    if Z is not None and N is not None:
        to_soft = NatToSoft(N, Z)
        out += [(to_soft, Identity(Z)), (to_soft, Sigma(Z)), (Identity(N), to_soft)]
    if Z is not None and H is not None:
        out += [(SoftEmbedding(H, Z), Identity(Z)), (Identity(H), SoftEmbedding(H, Z))]
    return out


def _implication(check: str, cases: List[tuple], probe: Callable) -> CheckReport:
    count, failure, undecided = 0, None, None
    with Stopwatch() as sw:
        for f1, f2 in cases:
            premise, conclusions = probe(f1, f2)
            if premise is None:
                continue
            if premise.status == CheckStatus.INCONCLUSIVE:
                undecided = undecided or premise.message
                continue
            if premise.status != CheckStatus.PASS:
                continue
            for report in conclusions():
                count += 1
                if report.status == CheckStatus.FAIL:
                    failure = {"f1": f1.name, "f2": f2.name, "conclusion": report.check, "reason": report.message}
                    break
                if report.status == CheckStatus.INCONCLUSIVE:
                    undecided = undecided or report.message
            if failure:
                break
    return _section(check, count, sw.elapsed_ms, failure, "permanence holds on every tested pair", undecided)


def composition_sections(models: dict, cfg: LemmaSuiteConfig) -> List[CheckReport]:
    """Pureness passes to composites and through pure middle semigroups."""
    depth, k, m = min(cfg.depth, 4), cfg.k_max, cfg.m_max
    cases = _composable(models)
    pure_cache: dict = {}

    def pure(f: Morphism) -> CheckReport:
        if f.name not in pure_cache:
            pure_cache[f.name] = check_pure(f, depth, k, m, jobs=cfg.jobs)
        return pure_cache[f.name]

    def first(f1, f2):
        return pure(f1), lambda: [pure(Composed([f1, f2]))]

    def second(f1, f2):
        if not f1.declared_cu_morphism:
            return None, None
        cu = check_cu_morphism(f1, depth)
        premise = cu if cu.status != CheckStatus.PASS else pure(f2)
        return premise, lambda: [pure(Composed([f1, f2]))]

    def third(f1, f2):
        S2 = f1.codomain
        parts = [check_semigroup_almost_unperforated(S2, depth, m), check_semigroup_almost_divisible(S2, depth, k),
                 check_strong_divisibility(S2, depth, k)]
        failing = next((r for r in parts if r.status != CheckStatus.PASS), None)
        return failing or parts[0], lambda: [pure(f1), pure(f2)]

    return [
        _implication("composition_1", cases, first),
        _implication("composition_2", cases, second),
        _implication("composition_3", cases, third),
    ]


def identity_pureness_section(models: dict, cfg: LemmaSuiteConfig) -> CheckReport:
    """id_S is pure exactly when S is almost unperforated and almost divisible."""
    depth = min(cfg.depth, 4)
    count, failure = 0, None
    details = []
    with Stopwatch() as sw:
        for S in models.values():
            count += 1
            by_map = check_pure(Identity(S), depth, cfg.k_max, cfg.m_max, jobs=cfg.jobs)
            semigroup = [check_semigroup_almost_unperforated(S, depth, cfg.m_max),
                         check_semigroup_almost_divisible(S, depth, cfg.k_max)]
            statuses = [r.status for r in semigroup]
            if CheckStatus.FAIL in statuses:
                by_semigroup = CheckStatus.FAIL
            elif CheckStatus.INCONCLUSIVE in statuses:
                by_semigroup = CheckStatus.INCONCLUSIVE
            else:
                by_semigroup = CheckStatus.PASS
            details.append(by_map)
            if by_map.status != by_semigroup:
                failure = {"model": S.name, "identity": by_map.status.value, "semigroup": by_semigroup.value}
                break
    return _section("identity_pureness", count, sw.elapsed_ms, failure, "identity and semigroup pureness agree",
                    details=details)


def negative_controls(models: dict, cfg: LemmaSuiteConfig) -> List[CheckReport]:
    """Checks that must fail; each carries expected = fail."""
    depth = min(cfg.depth, 4)
    controls = []
    if "Nbar" in models:
        controls.append(check_almost_divisible(Identity(models["Nbar"]), depth, 2))
    if "T4" in models:
        controls.append(check_almost_unperforated(Identity(models["T4"]), depth, 2))
    if "Nbar" in models and "Z" in models:
        controls.append(check_cu_morphism(NatToSoft(models["Nbar"], models["Z"]), depth))
    if "Faulty" in models:
        controls.append(check_axioms(models["Faulty"], depth))
    return [r.model_copy(update={"expected": CheckStatus.FAIL}) for r in controls]


def _selected(cfg: LemmaSuiteConfig) -> tuple:
    known = builtin_models()
    unknown = [name for name in cfg.models if name not in known]
    if unknown:
        raise ValueError(f"unknown built-in model {unknown[0]!r}")
    models = {name: known[name] for name in cfg.models}
    available = builtin_pairs(known)
    signatures = {S.signature for S in models.values()}
    if cfg.pairs is None:
        pairs = [p for p in available.values()
                 if {p.source.signature, p.middle.signature, p.target.signature} <= signatures]
    else:
        missing = [name for name in cfg.pairs if name not in available]
        if missing:
            raise ValueError(f"unknown built-in pair {missing[0]!r}")
        pairs = [available[name] for name in cfg.pairs]
    return models, pairs


def lemma_suite(cfg: LemmaSuiteConfig) -> CheckReport:
    """
    Run every lemma sweep over the configured catalog.

    Returns:
        CheckReport with one sub-report per section and per negative control;
        PASS when nothing is unexpected, vacuously so for an empty catalog
    """
    models, pairs = _selected(cfg)
    rng = random.Random(cfg.seed)
    logger.info(f"lemma suite over {len(models)} models and {len(pairs)} pairs, seed {cfg.seed}")
    sections = [
        witness_comparison_section(pairs, cfg, rng),
        ceiling_bound_section(pairs, cfg),
        nesting_section(list(models.values()), cfg),
        *composition_sections(models, cfg),
        identity_pureness_section(models, cfg),
        anchor_section(pairs, cfg),
        *negative_controls(models, cfg),
    ]
    unexpected = [s for s in sections if s.unexpected]
    undecided = [s for s in sections if s.status == CheckStatus.INCONCLUSIVE and not s.unexpected]
    if unexpected:
        status = CheckStatus.FAIL
        message = "unexpected outcome in " + ", ".join(s.check for s in unexpected)
    elif undecided:
        status = CheckStatus.INCONCLUSIVE
        message = "undecided: " + ", ".join(s.check for s in undecided)
    else:
        status = CheckStatus.PASS
        message = f"{len(sections)} sections as expected"
    return CheckReport(
        check="lemma_suite", status=status, depth=cfg.depth,
        counterexample=unexpected[0].counterexample if unexpected else None,
        bounds={"frac_bound": cfg.frac_bound, "seed": cfg.seed, "samples": cfg.samples},
        elapsed_ms=round(sum(s.elapsed_ms for s in sections), 3), instances=sum(s.instances for s in sections),
        message=message, details=sections, metadata={"models": list(models), "pairs": [p.name for p in pairs]},
    )
