"""
The bimorphism α: S × Z → T attached to a factor pair (φ₁, φ₂).

α(x, m) = m·φ₂φ₁(x) on compacts. On a soft t, α(x, t) is the supremum of
the φ₂-images of the witness sets μ((k,n), 0, φ₁(x)) over fractions
k/n < t. It is computed from a witness chain: fractions k_d/n_d increasing
to t, a ≪-increasing chain x_d with supremum x, and witnesses
y_d ∈ μ((k_d,n_d), φ₁(x_{d-1}), φ₁(x_d)). When the witnesses come from soft
division the image chain has a closed form and its supremum is exact;
otherwise alpha_eval_oracle enumerates the witness sets directly.
"""
import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, NamedTuple, Optional

from cuf.base import (
    CheckReport,
    CheckStatus,
    CuError,
    InvariantViolated,
    ModelMismatch,
    NoWitnessFound,
    PreconditionViolated,
    Stopwatch,
    UnsupportedChainForm,
)
from cuf.factorization.mu import MuSpec, mu_contains
from cuf.morphisms.base import Morphism
from cuf.morphisms.catalog import Composed, Identity
from cuf.morphisms.checks import (
    check_almost_divisible,
    check_almost_unperforated,
    combine,
    find_witness,
)
from cuf.semigroup.chains import (
    DEFAULT_CHAIN_DEPTH,
    Mobius,
    SoftRescaledChain,
    default_horizon,
    is_probe_supremum,
    probe_indices,
    sup_chain,
)
from cuf.semigroup.elements import (
    INF,
    SCALAR_TYPES,
    Compact,
    Element,
    Real,
    Soft,
    Value,
    Vector,
    ceil_value,
    payload,
)
from cuf.semigroup.scalar import ZModel

logger = logging.getLogger(__name__)

# the second variable of α ranges over Z
Z_PARAMETER = ZModel()


@dataclass(frozen=True)
class FactorPair:
    """φ₁: S₁ → S₂ (candidate almost divisible) and φ₂: S₂ → T (candidate almost unperforated)."""
    phi1: Morphism
    phi2: Morphism
    name: str = ""

    def __post_init__(self):
        if self.phi1.codomain != self.phi2.domain:
            raise ModelMismatch(
                f"{self.phi1.name} lands in {self.phi1.codomain.name}, "
                f"{self.phi2.name} starts from {self.phi2.domain.name}"
            )
        if not self.name:
            object.__setattr__(self, "name", f"({self.phi1.name}, {self.phi2.name})")

    @property
    def source(self):
        return self.phi1.domain

    @property
    def middle(self):
        return self.phi1.codomain

    @property
    def target(self):
        return self.phi2.codomain

    def composite(self) -> Morphism:
        return Composed([self.phi1, self.phi2])

    def validate(self, depth: int, k_max: int = 4, m_max: int = 4, factor: int = 2, jobs: int = 1) -> CheckReport:
        """Role check: φ₁ almost divisible and φ₂ almost unperforated."""
        parts = [
            check_almost_divisible(self.phi1, depth, k_max, factor, jobs),
            check_almost_unperforated(self.phi2, depth, m_max, jobs),
        ]
        return combine("factor_pair_roles", self.composite(), depth, parts)


@dataclass
class WitnessChain:
    """Fractions k_d/n_d ↗ t, domain chain x_d ↗ x and witnesses y_d."""
    target: Value
    fractions: list = field(default_factory=list)   # (k_d, n_d)
    xs: list = field(default_factory=list)          # x_1, x_2, ...
    ys: list = field(default_factory=list)
    sources: list = field(default_factory=list)     # how each y_d was found

    @property
    def from_soft_division(self) -> bool:
        return bool(self.sources) and all(s == "soft-division" for s in self.sources)


def schedule(target: Value, length: int) -> list:
    """
    Fractions (k_d, n_d) with k_d/n_d = r_d ↗ target and
    k_d/n_d < k_{d+1}/(n_{d+1}+1).

    r_d is target·d/(d+1) (d itself for ∞); numerator and denominator of
    r_{d+1} are inflated by a common factor until the gap condition holds.
    """
    rate = Mobius.approaching(target)
    out = []
    for d in range(1, length + 1):
        r = rate.at(d)
        k, n = r.numerator, r.denominator
        if out:
            prev = Fraction(*out[-1])
            c = 1
            while Fraction(k * c, n * c + 1) <= prev:
                c += 1
            k, n = k * c, n * c
        out.append((k, n))
    return out


def build_witness_chain(p: FactorPair, x: Element, target: Value, depth: int = 6,
                        chain_depth: int = DEFAULT_CHAIN_DEPTH, factor: int = 2) -> WitnessChain:
    """
    Witness chain for α(x, Soft(target)).

    Raises:
        NoWitnessFound: if φ₁ yields no divisibility witness within the search grid
        InvariantViolated: if a constructed term breaks a chain invariant
    """
    S1, S2 = p.source, p.middle
    x_chain = S1.approximating_chain(x)
    chain = WitnessChain(target)
    previous = S1.zero
    fractions = schedule(target, chain_depth)
    for d, (k, n) in enumerate(fractions, start=1):
        x_d = S1.canonical(x_chain.term(d))
        if not S1.way_below(previous, x_d):
            raise InvariantViolated(f"x_{d - 1} is not way below x_{d}")
        z, source = find_witness(p.phi1, n, previous, x_d, depth, factor)
        if z is None:
            raise NoWitnessFound(
                f"{p.phi1.name} has no divisibility witness for n={n} at "
                f"{S1.format(previous)} << {S1.format(x_d)}"
            )
        y = S2.multiply(k, z)
        spec = MuSpec(k, n, p.phi1.apply(previous), p.phi1.apply(x_d))
        if not mu_contains(S2, spec, y):
            raise InvariantViolated(f"y_{d} = {S2.format(y)} is outside its witness set")
        chain.fractions.append((k, n))
        chain.xs.append(x_d)
        chain.ys.append(y)
        chain.sources.append(source)
        previous = x_d
    for (k1, n1), (k2, n2) in zip(fractions, fractions[1:]):
        if not Fraction(k1, n1) < Fraction(k2, n2 + 1):
            raise InvariantViolated(f"fractions {k1}/{n1} and {k2}/{n2} are too close")
    return chain


def _degenerate(p: FactorPair, x: Element, t: Element) -> Optional[Element]:
    if x == p.source.zero or t == Z_PARAMETER.zero or p.phi1.apply(x) == p.middle.zero:
        return p.target.zero
    if isinstance(t, Compact):
        return p.target.multiply(int(t.value), p.phi2.apply(p.phi1.apply(x)))
    return None


def alpha_eval(p: FactorPair, x: Element, t: Element, depth: int = 6,
               chain_depth: int = DEFAULT_CHAIN_DEPTH, factor: int = 2) -> Element:
    """
    α(x, t) for x in the source and t in Z.

    Raises:
        NoWitnessFound: propagated from the witness search
        UnsupportedChainForm: if the image chain has no closed form
    """
    x = p.source.canonical(x)
    t = Z_PARAMETER.canonical(t)
    shortcut = _degenerate(p, x, t)
    if shortcut is not None:
        return shortcut
    chain = build_witness_chain(p, x, t.value, depth, chain_depth, factor)
    if not chain.from_soft_division:
        raise UnsupportedChainForm("witnesses did not come from soft division; use the oracle")
    rate = Mobius.approaching(t.value)
    y_chain = SoftRescaledChain(p.phi1.map_chain(p.source.approximating_chain(x)), rate)
    for d, y in enumerate(chain.ys, start=1):
        if p.middle.canonical(y_chain.term(d)) != y:
            raise InvariantViolated(f"closed form disagrees with witness y_{d}")
    value = sup_chain(p.target, p.phi2.map_chain(y_chain), chain_depth)
    logger.debug(f"alpha({p.source.format(x)}, {Z_PARAMETER.format(t)}) = {p.target.format(value)}")
    return value


class OracleValue(NamedTuple):
    value: Element
    exact: bool


def _largest_k(target: Value, n: int, density: int) -> int:
    if target is INF:
        return n * density
    return int(ceil_value(target * n)) - 1


def _admissible(p: FactorPair, fx: Element, target: Value, n: int, density: int, ys) -> Iterator[Element]:
    S2 = p.middle
    k = _largest_k(target, n, density)
    if k < 1:
        return
    upper = S2.multiply(k, fx)
    for y in ys:
        if S2._leq(S2.multiply(n, y), upper) and p.phi2.defined(y):
            yield p.phi2.apply(y)


def _grid_images(p: FactorPair, fx: Element, target: Value, density: int) -> set:
    grid = p.middle.grid(density)
    images = {p.target.zero}
    for n in range(1, density + 1):
        images.update(_admissible(p, fx, target, n, density, grid))
    return images


def _scaled_images(p: FactorPair, fx: Element, target: Value, reach: int, width: int) -> set:
    """Images of the soft rescalings σ(φ₁x)·k/n for the last width values of n up to reach."""
    images = set()
    for n in range(max(1, reach - width), reach + 1):
        k = _largest_k(target, n, reach)
        if k < 1:
            continue
        try:
            y = p.middle.soft_scale(fx, Fraction(k, n))
        except UnsupportedChainForm:
            return images
        images.update(_admissible(p, fx, target, n, reach, [y]))
    return images


def _least_bound(T, maxima, depth: int) -> Optional[Element]:
    bounds = [c for c in T.grid(depth) if all(T._leq(m, c) for m in maxima)]
    for c in bounds:
        if all(T._leq(c, b) for b in bounds):
            return c
    return None


def _least_denominator(lo: Fraction, hi: Fraction, limit: int) -> Optional[Fraction]:
    """The fraction in (lo, hi] with the least denominator up to limit, if any."""
    for q in range(1, limit + 1):
        candidate = Fraction(math.floor(lo * q) + 1, q)
        if candidate <= hi:
            return candidate
    return None


def _scalar_pairs(anchor: Element, bound: Element) -> Iterator[tuple]:
    if isinstance(anchor, Vector):
        for a, b in zip(anchor.items, bound.items):
            yield from _scalar_pairs(a, b)
    elif isinstance(anchor, SCALAR_TYPES):
        yield payload(anchor), payload(bound)


def _candidate_denominator(t: Value, anchor: Value) -> int:
    return t.denominator * (1 if anchor is INF else anchor.denominator)


def _reach(t: Value, anchor: Element, bound: Element, width: int) -> int:
    """Smallest reach whose images resolve every candidate below the ceiling bound."""
    if t is INF:
        return width
    needed = [
        4 * _candidate_denominator(t, a) ** 2 * max(1, int(ceil_value(b)))
        for a, b in _scalar_pairs(anchor, bound) if b is not INF and b != 0
    ]
    return width + max(needed, default=width)


@dataclass
class _Resolution:
    value: Element
    exact: bool


def _resolve_scalar(model, tops: list, anchor: Element, bound: Element, t: Value) -> _Resolution:
    if tops[1] == tops[2]:
        return _Resolution(tops[2], True)
    v1, v2, v3 = (payload(a) for a in tops)
    b = payload(bound)
    lower = _Resolution(tops[2], False)
    if not v1 < v2 < v3:
        return lower
    if b is INF:
        # growth without bound in every round
        return _Resolution(bound, True) if t is INF else lower
    limit = _candidate_denominator(t, payload(anchor))
    if 2 * (v2 - v1) * limit * limit >= 1:
        return lower
    candidate = _least_denominator(v2, v2 + 2 * (v2 - v1), limit)
    if candidate is None or candidate > b or not v3 < candidate:
        return lower
    if 4 * (candidate - v3) > 3 * (candidate - v2):
        return lower
    try:
        variant = "real" if isinstance(tops[2], Real) else "soft"
        return _Resolution(model.limit_of(variant, candidate), True)
    except UnsupportedChainForm:
        return lower


def _resolve(model, rounds: list, anchor: Element, bound: Element, t: Value, depth: int) -> _Resolution:
    """Supremum of the image sets of three rounds, exact when attained or a certified limit."""
    if isinstance(anchor, SCALAR_TYPES):
        tops = [functools.reduce(lambda a, b: b if model._leq(a, b) else a, images) for images in rounds]
        return _resolve_scalar(model, tops, anchor, bound, t)
    if isinstance(anchor, Vector):
        parts = [
            _resolve(f, [{a.items[i] for a in images} for images in rounds], anchor.items[i], bound.items[i], t, depth)
            for i, f in enumerate(model.components())
        ]
        return _Resolution(Vector(tuple(r.value for r in parts)), all(r.exact for r in parts))
    grid_depth = 2 * depth
    first, second = (_least_bound(model, images, grid_depth) for images in rounds[1:])
    if second is None:
        return _Resolution(max(rounds[2], key=model.sort_key), False)
    attained = second in rounds[2] or model.search_is_exhaustive(second, grid_depth)
    return _Resolution(second, first == second and attained)


def alpha_eval_oracle(p: FactorPair, x: Element, t: Element, depth: int, density_factor: int = 2) -> OracleValue:
    """
    α(x, t) by enumerating the witness sets.

    Images come from the middle grid at density D = density_factor·depth and
    from the soft rescalings σ(φ₁x)·k/n in three rounds whose reach doubles,
    starting from a reach sized by the ceiling bound. A scalar coordinate is
    exact when its supremum is attained in the last two rounds, or when the
    rounds converge to the unique candidate p/q with q ≤ den(t)·den(φ₂φ₁x)
    inside the remaining gap. Otherwise the value is the best lower bound.
    """
    x = p.source.canonical(x)
    t = Z_PARAMETER.canonical(t)
    shortcut = _degenerate(p, x, t)
    if shortcut is not None:
        return OracleValue(shortcut, True)
    fx = p.phi1.apply(x)
    anchor = p.phi2.apply(fx)
    bound = ceiling_bound(p, x, t)
    density = density_factor * depth
    width = max(density, 2 * t.value.denominator) if t.value is not INF else density
    reach = _reach(t.value, anchor, bound, width)
    images = _grid_images(p, fx, t.value, density)
    rounds = []
    for step in range(3):
        scaled = _scaled_images(p, fx, t.value, reach << step, width)
        if step == 2 and not scaled:
            scaled = _grid_images(p, fx, t.value, 2 * density)
        images = images | scaled
        rounds.append(images)
    result = _resolve(p.target, rounds, anchor, bound, t.value, depth)
    if not result.exact:
        logger.info(f"oracle for {p.name} at t={Z_PARAMETER.format(t)} gives a lower bound only")
    return OracleValue(result.value, result.exact)


def ceiling_bound(p: FactorPair, x: Element, t: Element) -> Element:
    """⌈t⌉·φ₂φ₁(x), with ⌈∞⌉ = ∞."""
    t = Z_PARAMETER.canonical(t)
    image = p.phi2.apply(p.phi1.apply(x))
    ceiling = ceil_value(t.value)
    if ceiling is INF:
        return p.target.infinite_multiple(image)
    return p.target.multiply(int(ceiling), image)


class _Undecided(CuError):
    pass


class AlphaTable:
    """Memoized α values, falling back to the oracle when no closed form applies."""

    def __init__(self, p: FactorPair, depth: int, chain_depth: int, factor: int):
        self.p, self.depth, self.chain_depth, self.factor = p, depth, chain_depth, factor
        self.values: dict = {}
        self.oracle_calls = 0

    def __call__(self, x: Element, t: Element) -> Element:
        key = (x, t)
        if key not in self.values:
            try:
                self.values[key] = alpha_eval(self.p, x, t, self.depth, self.chain_depth, self.factor)
            except UnsupportedChainForm:
                self.oracle_calls += 1
                result = alpha_eval_oracle(self.p, x, t, self.depth)
                if not result.exact:
                    raise _Undecided(f"alpha({x}, {t}) is not settled by the oracle")
                self.values[key] = result.value
        return self.values[key]


def _pair_sweep(xs, ts, law: Callable) -> Optional[dict]:
    for x, t in itertools.product(xs, ts):
        roles = law(x, t)
        if roles is not None:
            return roles
    return None


def verify_alpha_bimorphism(p: FactorPair, depth: int, k_max: int = 4, m_max: int = 4,
                            pair_depth: Optional[int] = None, chain_depth: int = DEFAULT_CHAIN_DEPTH,
                            factor: int = 2, jobs: int = 1) -> CheckReport:
    """
    Bounded verification that α is a generalized Cu-bimorphism.

    Checks the anchor α(x, 1) = φ₂φ₁(x), additivity and monotonicity in
    each variable, preservation of sample-chain suprema in each variable,
    α(x, σ(1)) ≤ α(x, 1) ≤ α(x, 1+ε), and, when both maps are declared
    Cu-morphisms, x′ ≪ x and t′ ≪ t ⇒ α(x′,t′) ≪ α(x,t).

    Args:
        p: Factor pair
        depth: Grid depth for single-point checks
        pair_depth: Grid depth for pair and chain checks (default depth // 2)
    Returns:
        CheckReport; a failed role check is reported as a precondition failure
    """
    check = "verify_alpha_bimorphism"
    pair_depth = pair_depth or max(2, depth // 2)
    bounds = {"pair_depth": pair_depth, "k_max": k_max, "m_max": m_max}
    roles = p.validate(depth, k_max, m_max, factor, jobs)
    if roles.status == CheckStatus.FAIL:
        return CheckReport(
            check=check, status=CheckStatus.FAIL, depth=depth, bounds=bounds,
            counterexample=roles.counterexample, elapsed_ms=roles.elapsed_ms, instances=roles.instances,
            message=f"precondition rejected for {p.name}: {roles.message}", details=[roles],
            metadata={"precondition": True, "pair": p.name},
        )
    S, T, Z = p.source, p.target, Z_PARAMETER
    alpha = AlphaTable(p, depth, chain_depth, factor)
    counter = {"n": 0}

    def fmt(roles: dict) -> dict:
        out = {}
        for key, value in roles.items():
            if isinstance(value, str):
                out[key] = value
            elif key.startswith("t"):
                out[key] = Z.format(value)
            elif key.startswith("x"):
                out[key] = S.format(value)
            else:
                out[key] = T.format(value)
        return out

    def anchor(x, _):
        counter["n"] += 1
        if alpha(x, Compact(1)) != p.phi2.apply(p.phi1.apply(x)):
            return {"law": "anchor", "x": x}
        return None

    def extension(x, eps):
        counter["n"] += 1
        low, mid, high = alpha(x, Soft(1)), alpha(x, Compact(1)), alpha(x, Soft(1 + eps.value))
        if not (T.leq(low, mid) and T.leq(mid, high)):
            return {"law": "extension", "x": x, "t": Soft(1 + eps.value)}
        return None

    def in_t(x, pair):
        t1, t2 = pair
        counter["n"] += 1
        a1, a2 = alpha(x, t1), alpha(x, t2)
        if alpha(x, Z.add(t1, t2)) != T.add(a1, a2):
            return {"law": "additive-in-t", "x": x, "t1": t1, "t2": t2}
        if Z.leq(t1, t2) and not T.leq(a1, a2):
            return {"law": "monotone-in-t", "x": x, "t1": t1, "t2": t2}
        return None

    def in_x(t, pair):
        x1, x2 = pair
        counter["n"] += 1
        a1, a2 = alpha(x1, t), alpha(x2, t)
        if alpha(S.add(x1, x2), t) != T.add(a1, a2):
            return {"law": "additive-in-x", "x1": x1, "x2": x2, "t": t}
        if S.leq(x1, x2) and not T.leq(a1, a2):
            return {"law": "monotone-in-x", "x1": x1, "x2": x2, "t": t}
        return None

    probes = probe_indices(default_horizon(pair_depth))

    def sup_in_t(x, chain):
        counter["n"] += 1
        top = sup_chain(Z, chain, chain_depth)
        terms = [alpha(x, Z.canonical(chain.term(d))) for d in probes]
        if is_probe_supremum(T, terms, alpha(x, top), T.grid(pair_depth)) is not None:
            return {"law": "sup-in-t", "x": x, "t": top, "chain": repr(chain)}
        return None

    def sup_in_x(t, chain):
        counter["n"] += 1
        top = sup_chain(S, chain, chain_depth)
        terms = [alpha(S.canonical(chain.term(d)), t) for d in probes]
        if is_probe_supremum(T, terms, alpha(top, t), T.grid(pair_depth)) is not None:
            return {"law": "sup-in-x", "x": top, "t": t, "chain": repr(chain)}
        return None

    def joint(pair_x, pair_t):
        (xp, x), (tp, t) = pair_x, pair_t
        counter["n"] += 1
        if not T.way_below(alpha(xp, tp), alpha(x, t)):
            return {"law": "joint-way-below", "x'": xp, "x": x, "t'": tp, "t": t}
        return None

    xs, ts = S.grid(depth), Z.grid(depth)
    pxs, pts = S.grid(pair_depth), Z.grid(pair_depth)
    epsilons = [e for e in Z.grid(depth) if isinstance(e, Soft) and e.value is not INF]
    stages = [
        (xs, [None], anchor),
        (xs, epsilons, extension),
        (pxs, list(itertools.combinations_with_replacement(pts, 2)), in_t),
        (pts, list(itertools.combinations_with_replacement(pxs, 2)), in_x),
        (pxs, Z.sample_chains(pair_depth), sup_in_t),
        (pts, S.sample_chains(pair_depth), sup_in_x),
    ]
    joint_checked = p.phi1.declared_cu_morphism and p.phi2.declared_cu_morphism
    if joint_checked:
        wb_x = [(a, b) for a in pxs for b in pxs if S.way_below(a, b)]
        wb_t = [(a, b) for a in pts for b in pts if Z.way_below(a, b)]
        stages.append((wb_x, wb_t, joint))

    failure, undecided = None, None
    with Stopwatch() as sw:
        try:
            for left, right, law in stages:
                failure = _pair_sweep(left, right, law)
                if failure is not None:
                    break
        except (_Undecided, NoWitnessFound, UnsupportedChainForm, InvariantViolated) as exc:
            undecided = str(exc)
    elapsed = round(roles.elapsed_ms + sw.elapsed_ms, 3)
    metadata = {"pair": p.name, "joint_checked": joint_checked, "oracle_calls": alpha.oracle_calls,
                "alpha_values": len(alpha.values)}
    if failure is not None:
        law = failure.pop("law")
        logger.info(f"alpha for {p.name} fails {law}")
        return CheckReport(
            check=check, status=CheckStatus.FAIL, depth=depth, bounds=bounds, counterexample=fmt(failure),
            elapsed_ms=elapsed, instances=counter["n"], message=f"{p.name}: alpha fails {law}",
            details=[roles], metadata=dict(metadata, law=law),
        )
    if undecided is not None or roles.status == CheckStatus.INCONCLUSIVE:
        return CheckReport(
            check=check, status=CheckStatus.INCONCLUSIVE, depth=depth, bounds=bounds, elapsed_ms=elapsed,
            instances=counter["n"], message=f"{p.name}: {undecided or roles.message}",
            details=[roles], metadata=metadata,
        )
    suffix = "" if joint_checked else " (way-below clause skipped)"
    return CheckReport(
        check=check, status=CheckStatus.PASS, depth=depth, bounds=bounds, elapsed_ms=elapsed,
        instances=counter["n"], message=f"{p.name}: alpha is a generalized Cu-bimorphism on the grid{suffix}",
        details=[roles], metadata=metadata,
    )


def single_map_pair(f: Morphism, through: str, depth: int = 6, k_max: int = 4, m_max: int = 4,
                    factor: int = 2) -> FactorPair:
    """
    Factor a single Cu-morphism f: S → T as (id_S, f) or (f, id_T).

    Args:
        f: The morphism
        through: "domain" for (id_S, f), needing S almost divisible and f
            almost unperforated; "codomain" for (f, id_T), needing f almost
            divisible and T almost unperforated
    Raises:
        PreconditionViolated: if the chosen factorization does not validate
    """
    if through == "domain":
        pair = FactorPair(Identity(f.domain), f)
    elif through == "codomain":
        pair = FactorPair(f, Identity(f.codomain))
    else:
        raise ValueError(f"through must be 'domain' or 'codomain', got {through!r}")
    report = pair.validate(depth, k_max, m_max, factor)
    if report.status == CheckStatus.FAIL:
        raise PreconditionViolated(f"{pair.name} does not factor {f.name}: {report.message}")
    return pair
