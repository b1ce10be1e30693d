"""
Bounded verification of the Cu-semigroup axioms and of semigroup-level
pureness properties over depth grids.

Every checker returns a CheckReport; the first violation found in
canonical grid order is reported as the counterexample.
"""
import itertools
import logging
from typing import Callable, Iterator, Optional

from cuf.base import CheckReport, CheckStatus, CuError, Stopwatch
from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.chains import (
    DEFAULT_CHAIN_DEPTH,
    default_horizon,
    is_probe_supremum,
    probe_indices,
    sup_chain,
)
from cuf.semigroup.elements import Element

logger = logging.getLogger(__name__)

# (law, counterexample roles -> elements) or None
Violation = Optional[tuple]


def _fmt(S: SemigroupModel, roles: dict) -> dict:
    return {k: (S.format(v) if not isinstance(v, (int, str)) else str(v)) for k, v in roles.items()}


class _Counter:
    def __init__(self):
        self.count = 0

    def tick(self, n: int = 1):
        self.count += n


def _order_laws(S: SemigroupModel, grid: list, counter: _Counter) -> Violation:
    zero = S.zero
    for a in grid:
        counter.tick()
        if S.canonical(S.canonical(a)) != a:
            return "canonical-idempotence", {"a": a}
        if not S._leq(a, a):
            return "reflexivity", {"a": a}
        if not S._leq(zero, a):
            return "positivity", {"a": a}
        if S._add(zero, a) != a:
            return "zero-neutral", {"a": a}
    ups = {a: frozenset(b for b in grid if S._leq(a, b)) for a in grid}
    for a, b in itertools.product(grid, repeat=2):
        counter.tick()
        if a != b and b in ups[a] and a in ups[b]:
            return "antisymmetry", {"a": a, "b": b}
        if S._add(a, b) != S._add(b, a):
            return "commutativity", {"a": a, "b": b}
        if S._way_below(a, b) and not S._leq(a, b):
            return "way-below-implies-leq", {"a": a, "b": b}
        if S._way_below(b, b) and S._way_below(a, b) != S._leq(a, b):
            return "compact-absorption", {"a": a, "b": b}
    for a in grid:
        for b in ups[a]:
            counter.tick()
            stray = ups[b] - ups[a]
            if stray:
                c = min(stray, key=S.sort_key)
                return "transitivity", {"a": a, "b": b, "c": c}
    return None


def _monoid_laws(S: SemigroupModel, grid: list, counter: _Counter) -> Violation:
    for a, b in itertools.product(grid, repeat=2):
        ab = S._add(a, b)
        below = S._leq(a, b)
        for c in grid:
            counter.tick()
            if S._add(ab, c) != S._add(a, S._add(b, c)):
                return "associativity", {"a": a, "b": b, "c": c}
            if below and not S._leq(S._add(a, c), S._add(b, c)):
                return "add-monotone", {"a": a, "b": b, "c": c}
    return None


def _chain_laws(S: SemigroupModel, grid: list, depth: int, chain_depth: int, counter: _Counter) -> Violation:
    horizon = default_horizon(depth)
    probes = probe_indices(horizon)
    # O1: closed-form suprema of the sample families are least upper bounds.
    for chain in S.sample_chains(depth):
        counter.tick()
        try:
            top = sup_chain(S, chain, chain_depth)
        except CuError as exc:
            return "o1-supremum", {"chain": repr(chain), "error": str(exc)}
        terms = [S.canonical(chain.term(d)) for d in probes]
        if is_probe_supremum(S, terms, top, grid) is not None:
            return "o1-supremum", {"chain": repr(chain), "sup": top}
    # O2: every grid element is the sup of its ≪-increasing factory chain.
    for a in grid:
        counter.tick()
        chain = S.approximating_chain(a)
        terms = [S.canonical(t) for t in chain.terms(chain_depth)]
        for d in range(len(terms) - 1):
            if not S._way_below(terms[d], terms[d + 1]):
                return "o2-way-below-chain", {"a": a, "index": d + 1}
        try:
            top = sup_chain(S, chain, chain_depth)
        except CuError as exc:
            return "o2-supremum", {"a": a, "error": str(exc)}
        if top != a:
            return "o2-supremum", {"a": a}
    # O4: suprema of sums of factory chains.
    for a, b in itertools.product(grid, repeat=2):
        counter.tick()
        ca, cb = S.approximating_chain(a), S.approximating_chain(b)
        sums = [S._add(S.canonical(ca.term(d)), S.canonical(cb.term(d))) for d in probes]
        if is_probe_supremum(S, sums, S._add(a, b), grid) is not None:
            return "o4-sup-additivity", {"a": a, "b": b}
    return None


def _o3(S: SemigroupModel, grid: list, counter: _Counter) -> Violation:
    pairs = [(lo, hi) for hi in grid for lo in grid if S._way_below(lo, hi)]
    for i, (xp, x) in enumerate(pairs):
        for yp, y in pairs[i:]:
            counter.tick()
            if not S._way_below(S._add(xp, yp), S._add(x, y)):
                return "o3-way-below-additivity", {"x'": xp, "x": x, "y'": yp, "y": y}
    return None


def check_axioms(S: SemigroupModel, depth: int, chain_depth: int = DEFAULT_CHAIN_DEPTH) -> CheckReport:
    """
    Bounded verification of the partial order, monoid and O1-O4 laws.

    Args:
        S: Model under test
        depth: Grid depth (ignored for tables, which are checked exhaustively)
        chain_depth: Number of chain terms verified monotone
    Returns:
        CheckReport, failing with the first violated law and its witnesses
    """
    counter = _Counter()
    with Stopwatch() as sw:
        grid = S.grid(depth)
        violation = None
        for stage in (
            lambda: _order_laws(S, grid, counter),
            lambda: _monoid_laws(S, grid, counter),
            lambda: _chain_laws(S, grid, depth, chain_depth, counter),
            lambda: _o3(S, grid, counter),
        ):
            violation = stage()
            if violation is not None:
                break
    exact = S.kind == ModelKind.TABLE
    if violation is None:
        logger.info(f"axioms hold for {S.name} at depth {depth} ({counter.count} instances)")
        return CheckReport(
            check="check_axioms", status=CheckStatus.PASS, depth=depth,
            exact=exact, elapsed_ms=sw.elapsed_ms, instances=counter.count,
            message=f"{S.name}: partial order, monoid and O1-O4 laws hold on {len(grid)} grid elements",
        )
    law, roles = violation
    logger.info(f"axiom {law} fails for {S.name}")
    return CheckReport(
        check="check_axioms", status=CheckStatus.FAIL, depth=depth,
        counterexample=_fmt(S, roles), exact=exact, elapsed_ms=sw.elapsed_ms,
        instances=counter.count, message=f"{S.name}: law {law} fails",
        metadata={"law": law, "model": S.name},
    )


def is_strongly_soft(S: SemigroupModel, a: Element, depth: int, use_closed_form: bool = True) -> bool:
    """
    Decide whether a is strongly soft: every a' ≪ a admits t with a' + t ≤ a ≤ ∞t.

    Args:
        S: Model
        a: Element to test
        depth: Bound of the witness search grid
        use_closed_form: Allow the model's closed form to answer directly
    Returns:
        True iff a witness t exists in grid(depth) for every grid a' ≪ a
    """
    a = S.canonical(a)
    if use_closed_form:
        verdict = S.strongly_soft_closed_form(a)
        if verdict is not None:
            return verdict
    return soft_failure(S, a, depth) is None


def soft_failure(S: SemigroupModel, a: Element, depth: int) -> Optional[Element]:
    """First grid a' ≪ a with no softness witness, or None."""
    a = S.canonical(a)
    grid = S.grid(depth)
    tops = [t for t in grid if S._leq(a, S.infinite_multiple(t))]
    for ap in grid:
        if not S._way_below(ap, a):
            continue
        if not any(S._leq(S._add(ap, t), a) for t in tops):
            return ap
    return None


def _search(
    S: SemigroupModel,
    depth: int,
    closed_form: Optional[Element],
    predicate: Callable[[Element], bool],
    bound: Element,
    factor: int,
) -> tuple:
    """Closed form first, then the enlarged grid. Returns (witness, certain_absent)."""
    if closed_form is not None and predicate(closed_form):
        return closed_form, False
    search_depth = depth * factor
    for z in S.grid(search_depth):
        if predicate(z):
            return z, False
    return None, S.search_is_exhaustive(bound, search_depth)


def _pureness_report(check, S, depth, bounds, failure, instances, elapsed, witnesses, undecided) -> CheckReport:
    if failure is not None:
        return CheckReport(
            check=check, status=CheckStatus.FAIL, depth=depth, bounds=bounds,
            counterexample=_fmt(S, failure), exact=True, elapsed_ms=elapsed,
            instances=instances, message=f"{S.name}: {check} fails",
        )
    if undecided is not None:
        return CheckReport(
            check=check, status=CheckStatus.INCONCLUSIVE, depth=depth, bounds=bounds,
            counterexample=_fmt(S, undecided), elapsed_ms=elapsed, instances=instances,
            message=f"{S.name}: search bound hit without certainty",
        )
    return CheckReport(
        check=check, status=CheckStatus.PASS, depth=depth, bounds=bounds,
        exact=S.kind == ModelKind.TABLE, elapsed_ms=elapsed, instances=instances,
        witnesses=witnesses[:20], message=f"{S.name}: {check} holds on the grid",
    )


def check_semigroup_almost_unperforated(S: SemigroupModel, depth: int, m_max: int) -> CheckReport:
    """(m+1)x ≤ my implies x ≤ y for grid x, y and 1 ≤ m ≤ m_max."""
    count, failure = 0, None
    with Stopwatch() as sw:
        grid = S.grid(depth)
        for x, y in itertools.product(grid, repeat=2):
            if S._leq(x, y):
                count += m_max
                continue
            for m in range(1, m_max + 1):
                count += 1
                if S._leq(S.multiply(m + 1, x), S.multiply(m, y)):
                    failure = {"x": x, "y": y, "m": m}
                    break
            if failure:
                break
    return _pureness_report("semigroup_almost_unperforated", S, depth, {"m_max": m_max},
                            failure, count, sw.elapsed_ms, [], None)


def check_semigroup_almost_divisible(S: SemigroupModel, depth: int, k_max: int, factor: int = 2) -> CheckReport:
    """For grid x' ≪ x and k ≤ k_max some z has kz ≤ x and x' ≤ (k+1)z."""
    count, failure, undecided, witnesses = 0, None, None, []
    with Stopwatch() as sw:
        grid = S.grid(depth)
        for x in grid:
            for xp in (g for g in grid if S._way_below(g, x)):
                for k in range(1, k_max + 1):
                    count += 1
                    z, absent = _search(
                        S, depth, S.strong_divide(x, k),
                        lambda z: S._leq(S.multiply(k, z), x) and S._leq(xp, S.multiply(k + 1, z)),
                        x, factor,
                    )
                    if z is not None:
                        witnesses.append({"x'": S.format(xp), "x": S.format(x), "k": str(k), "z": S.format(z)})
                    elif absent:
                        failure = {"x'": xp, "x": x, "k": k}
                        break
                    elif undecided is None:
                        undecided = {"x'": xp, "x": x, "k": k}
                if failure:
                    break
            if failure:
                break
    return _pureness_report("semigroup_almost_divisible", S, depth, {"k_max": k_max},
                            failure, count, sw.elapsed_ms, witnesses, undecided)


def check_strong_divisibility(S: SemigroupModel, depth: int, k_max: int, factor: int = 2) -> CheckReport:
    """For grid x and k ≤ k_max some y has ky ≤ x ≤ (k+1)y."""
    count, failure, undecided, witnesses = 0, None, None, []
    with Stopwatch() as sw:
        for x in S.grid(depth):
            for k in range(1, k_max + 1):
                count += 1
                y, absent = _search(
                    S, depth, S.strong_divide(x, k),
                    lambda y: S._leq(S.multiply(k, y), x) and S._leq(x, S.multiply(k + 1, y)),
                    x, factor,
                )
                if y is not None:
                    witnesses.append({"x": S.format(x), "k": str(k), "y": S.format(y)})
                elif absent:
                    failure = {"x": x, "k": k}
                    break
                elif undecided is None:
                    undecided = {"x": x, "k": k}
            if failure:
                break
    return _pureness_report("strong_divisibility", S, depth, {"k_max": k_max},
                            failure, count, sw.elapsed_ms, witnesses, undecided)


def iter_way_below_pairs(S: SemigroupModel, grid: list) -> Iterator[tuple]:
    """(x', x) with x' ≪ x, x in canonical order then x' in canonical order."""
    for x in grid:
        for xp in grid:
            if S._way_below(xp, x):
                yield xp, x
