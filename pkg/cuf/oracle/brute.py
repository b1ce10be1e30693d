"""
Brute-force reference procedures.

The order oracle never calls the closed-form leq/way_below of a model: it
compares raw payload numbers along approximating chains. a ≤ b holds when
every probed term of a's chain is numerically dominated by some probed term
of b's chain, and a ≪ b when a ≤ b_e for some term b_e of b's chain
taken strictly before the horizon.
"""
import itertools
import logging
from typing import Optional

from cuf.base import CheckReport, CheckStatus, CuError, Stopwatch
from cuf.morphisms.catalog import GraphMorphism
from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.chains import default_horizon, is_probe_supremum, probe_indices, sup_chain
from cuf.semigroup.elements import SCALAR_TYPES, Element, LscFn, Vector

logger = logging.getLogger(__name__)

ORDER_MODES = ("leq", "way_below")


def _numbers(a: Element) -> tuple:
    if isinstance(a, SCALAR_TYPES):
        return (a.value,)
    if isinstance(a, Vector):
        return tuple(v for item in a.items for v in _numbers(item))
    if isinstance(a, LscFn):
        return a.values
    raise TypeError(f"{a!r} has no numeric payload")


def _dominated(a: Element, b: Element) -> bool:
    return all(x <= y for x, y in zip(_numbers(a), _numbers(b)))


def _reachable(S: SemigroupModel, start: int, goal: int) -> bool:
    if start in (0, goal):
        return True
    seen, frontier = {start}, [start]
    while frontier:
        i = frontier.pop()
        for lo, hi in S.relations:
            if lo == i and hi not in seen:
                if hi in (0, goal):
                    return True
                seen.add(hi)
                frontier.append(hi)
    return False


class _ChainOracle:
    """Probed approximating chains of one model, cached per element."""

    def __init__(self, S: SemigroupModel, depth: int):
        self.S = S
        horizon = default_horizon(depth)
        self.indices = probe_indices(horizon)
        # witnesses for ≪ stay strictly before the horizon term of a
        self.way_indices = [d for d in self.indices if d != horizon] + [16 * depth ** 2]
        self._terms: dict = {}

    def terms(self, a: Element) -> list:
        if a not in self._terms:
            chain = self.S.approximating_chain(a)
            self._terms[a] = [self.S.canonical(chain.term(d)) for d in self.indices]
        return self._terms[a]

    def leq(self, a: Element, b: Element) -> bool:
        upper = self.terms(b)
        return all(any(_dominated(x, y) for y in upper) for x in self.terms(a))

    def way_below(self, a: Element, b: Element) -> bool:
        chain = self.S.approximating_chain(b)
        return any(self.leq(a, self.S.canonical(chain.term(e))) for e in self.way_indices)


_ORACLES: dict = {}


def _oracle(S: SemigroupModel, depth: int) -> _ChainOracle:
    key = (S, depth)
    if key not in _ORACLES:
        _ORACLES[key] = _ChainOracle(S, depth)
    return _ORACLES[key]


def brute_order_oracle(S: SemigroupModel, a: Element, b: Element, depth: int, mode: str = "leq") -> bool:
    """
    Decide a ≤ b (mode "leq") or a ≪ b (mode "way_below") by chain dominance.

    Tables are decided by a fresh search along their generating relations,
    never through the model's cached closure. Every chain in a finite model
    is eventually constant, so ≪ and ≤ coincide there.
    """
    if mode not in ORDER_MODES:
        raise ValueError(f"mode must be one of {ORDER_MODES}, got {mode!r}")
    a, b = S.canonical(a), S.canonical(b)
    if S.kind == ModelKind.TABLE:
        return _reachable(S, a.index, b.index)
    oracle = _oracle(S, depth)
    return oracle.leq(a, b) if mode == "leq" else oracle.way_below(a, b)


def order_disagreements(S: SemigroupModel, depth: int, limit: Optional[int] = None) -> list:
    """Grid pairs where the closed forms and the oracle disagree."""
    grid = S.grid(depth)
    out = []
    for a, b in itertools.product(grid, repeat=2):
        for mode in ORDER_MODES:
            closed = S._leq(a, b) if mode == "leq" else S._way_below(a, b)
            if closed != brute_order_oracle(S, a, b, depth, mode):
                out.append((mode, a, b))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def check_order_agreement(S: SemigroupModel, depth: int) -> CheckReport:
    """Closed-form leq and way_below against the chain oracle on every grid pair."""
    with Stopwatch() as sw:
        bad = order_disagreements(S, depth, limit=1)
    count = len(S.grid(depth)) ** 2 * len(ORDER_MODES)
    if bad:
        mode, a, b = bad[0]
        return CheckReport(
            check="order_agreement", status=CheckStatus.FAIL, depth=depth,
            counterexample={"mode": mode, "a": S.format(a), "b": S.format(b)},
            elapsed_ms=sw.elapsed_ms, instances=count,
            message=f"{S.name}: closed-form {mode} disagrees with the chain oracle", metadata={"model": S.name},
        )
    return CheckReport(
        check="order_agreement", status=CheckStatus.PASS, depth=depth, exact=True, elapsed_ms=sw.elapsed_ms,
        instances=count, message=f"{S.name}: closed forms agree with the chain oracle",
        metadata={"model": S.name},
    )


def brute_morphism_check(graph: GraphMorphism, depth: int) -> CheckReport:
    """
    Exhaustive zero, monotonicity, additivity and sup checks of a tabulated map.

    Only the graph is consulted: pairs whose sum is off the graph are skipped,
    and a sample chain counts only when its probed terms and supremum are
    all tabulated.
    """
    S, T = graph.domain, graph.codomain
    points = [a for a in S.grid(depth) if graph.defined(a)]
    image = graph.graph
    failure, law, count = None, "", 0
    with Stopwatch() as sw:
        if S.zero in image and image[S.zero] != T.zero:
            failure, law = {"x": S.zero}, "zero-preservation"
        for a, b in itertools.product(points, repeat=2):
            if failure:
                break
            count += 1
            if S._leq(a, b) and not T._leq(image[a], image[b]):
                failure, law = {"x": a, "y": b}, "monotonicity"
                break
            total = S._add(a, b)
            if total in image and image[total] != T._add(image[a], image[b]):
                failure, law = {"x": a, "y": b}, "additivity"
        if failure is None:
            indices = probe_indices(default_horizon(depth))
            bounds = T.grid(depth)
            for chain in S.sample_chains(depth):
                try:
                    top = sup_chain(S, chain)
                except CuError:
                    continue
                terms = [S.canonical(chain.term(d)) for d in indices]
                if top not in image or any(t not in image for t in terms):
                    continue
                count += 1
                if is_probe_supremum(T, [image[t] for t in terms], image[top], bounds) is not None:
                    failure, law = {"chain": repr(chain), "sup": top}, "sup-preservation"
                    break
    if failure is not None:
        text = {k: v if isinstance(v, str) else S.format(v) for k, v in failure.items()}
        logger.debug(f"brute check of {graph.name}: {law} fails at {text}")
        return CheckReport(
            check="brute_morphism_check", status=CheckStatus.FAIL, depth=depth, counterexample=text,
            exact=True, elapsed_ms=sw.elapsed_ms, instances=count, message=f"{graph.name}: {law} fails",
            metadata={"law": law, "morphism": graph.name},
        )
    return CheckReport(
        check="brute_morphism_check", status=CheckStatus.PASS, depth=depth, exact=True, elapsed_ms=sw.elapsed_ms,
        instances=count, message=f"{graph.name}: tabulated map passes", metadata={"morphism": graph.name},
    )
