"""
Bounded decision procedures for morphism properties.

Each checker sweeps the domain grid in canonical order and returns a
CheckReport; a failure carries the first counterexample found, written in
scenario element syntax so it can be replayed.
"""
import itertools
import logging
from typing import Iterable, Optional

from cuf.base import (
    CheckReport,
    CheckStatus,
    CuError,
    NoWitnessFound,
    PreconditionViolated,
    Stopwatch,
    first_failure,
    sweep,
)
from cuf.morphisms.base import Morphism
from cuf.semigroup.axioms import is_strongly_soft, soft_failure
from cuf.semigroup.base import ModelKind
from cuf.semigroup.chains import (
    DEFAULT_CHAIN_DEPTH,
    default_horizon,
    is_probe_supremum,
    probe_indices,
    sup_chain,
)
from cuf.semigroup.elements import Element

logger = logging.getLogger(__name__)

WITNESS_LIMIT = 20


def apply(f: Morphism, a: Element) -> Element:
    return f.apply(a)


def _text(model, roles: dict) -> dict:
    out = {}
    for role, value in roles.items():
        out[role] = value if isinstance(value, str) else (str(value) if isinstance(value, int) else model.format(value))
    return out


def _exact(f: Morphism) -> bool:
    return f.domain.kind == ModelKind.TABLE and f.codomain.kind == ModelKind.TABLE


def _fail(check: str, f: Morphism, depth: int, roles: dict, law: str, count: int, elapsed: float,
          model=None, bounds: Optional[dict] = None) -> CheckReport:
    return CheckReport(
        check=check, status=CheckStatus.FAIL, depth=depth, bounds=bounds or {},
        counterexample=_text(model or f.domain, roles), exact=_exact(f), elapsed_ms=elapsed,
        instances=count, message=f"{f.name}: {law} fails", metadata={"law": law, "morphism": f.name},
    )


def _pass(check: str, f: Morphism, depth: int, count: int, elapsed: float, message: str,
          bounds: Optional[dict] = None, witnesses: Optional[list] = None) -> CheckReport:
    return CheckReport(
        check=check, status=CheckStatus.PASS, depth=depth, bounds=bounds or {}, exact=_exact(f),
        elapsed_ms=elapsed, instances=count, message=f"{f.name}: {message}",
        witnesses=(witnesses or [])[:WITNESS_LIMIT], metadata={"morphism": f.name},
    )


def _defined_grid(f: Morphism, depth: int) -> list:
    return [a for a in f.domain.grid(depth) if f.defined(a)]


def _sup_violation(f: Morphism, depth: int, chain_depth: int) -> Optional[tuple]:
    S, T = f.domain, f.codomain
    probes = probe_indices(default_horizon(depth))
    bounds = T.grid(depth)
    count = 0
    for chain in S.sample_chains(depth):
        try:
            top = sup_chain(S, chain, chain_depth)
        except CuError:
            continue
        terms = [S.canonical(chain.term(d)) for d in probes]
        if not f.defined(top) or not all(f.defined(t) for t in terms):
            continue
        count += 1
        image = f.apply(top)
        if is_probe_supremum(T, [f.apply(t) for t in terms], image, bounds) is not None:
            return ("sup-preservation", {"chain": repr(chain), "sup": top, "image": T.format(image)}), count
        try:
            mapped = sup_chain(T, f.map_chain(chain), chain_depth)
        except CuError:
            continue
        if mapped != image:
            return ("sup-closed-form", {"chain": repr(chain), "sup": top, "image": T.format(image),
                                        "closed_form": T.format(mapped)}), count
    return None, count


def check_generalized_cu_morphism(f: Morphism, depth: int, chain_depth: int = DEFAULT_CHAIN_DEPTH,
                                  jobs: int = 1) -> CheckReport:
    """
    Bounded check of zero preservation, monotonicity, additivity and
    preservation of sample-chain suprema.

    Pairs whose sum falls outside a partial graph are skipped.
    """
    S, T = f.domain, f.codomain
    check = "check_generalized_cu_morphism"
    with Stopwatch() as sw:
        if f.defined(S.zero) and f.apply(S.zero) != T.zero:
            violation = ("zero-preservation", {"a": S.zero})
            count = 1
        else:
            grid = _defined_grid(f, depth)
            images = {a: f.apply(a) for a in grid}

            def scan(a):
                for b in grid:
                    if S._leq(a, b) and not T._leq(images[a], images[b]):
                        return "monotonicity", {"a": a, "b": b}
                    ab = S._add(a, b)
                    if f.defined(ab) and f.apply(ab) != T._add(images[a], images[b]):
                        return "additivity", {"a": a, "b": b}
                return None

            violation = first_failure(sweep(scan, grid, jobs))
            count = 1 + len(grid) ** 2
            if violation is None:
                violation, chains = _sup_violation(f, depth, chain_depth)
                count += chains
    if violation is not None:
        law, roles = violation
        logger.info(f"{f.name} is not a generalized Cu-morphism: {law}")
        return _fail(check, f, depth, roles, law, count, sw.elapsed_ms)
    return _pass(check, f, depth, count, sw.elapsed_ms, "order, addition, zero and suprema preserved")


def check_cu_morphism(f: Morphism, depth: int, chain_depth: int = DEFAULT_CHAIN_DEPTH,
                      jobs: int = 1) -> CheckReport:
    """check_generalized_cu_morphism plus preservation of ≪ on grid pairs."""
    base = check_generalized_cu_morphism(f, depth, chain_depth, jobs)
    if base.status != CheckStatus.PASS:
        return base.model_copy(update={"check": "check_cu_morphism", "details": [base]})
    S, T = f.domain, f.codomain
    with Stopwatch() as sw:
        grid = _defined_grid(f, depth)
        images = {a: f.apply(a) for a in grid}
        violation = None
        for a, b in itertools.product(grid, repeat=2):
            if S._way_below(a, b) and not T._way_below(images[a], images[b]):
                violation = {"a": a, "b": b}
                break
    count = base.instances + len(grid) ** 2
    elapsed = base.elapsed_ms + sw.elapsed_ms
    if violation is not None:
        return _fail("check_cu_morphism", f, depth, violation, "way-below-preservation", count, elapsed)
    report = _pass("check_cu_morphism", f, depth, count, elapsed, "generalized Cu-morphism preserving ≪")
    return report.model_copy(update={"details": [base]})


def check_almost_unperforated(f: Morphism, depth: int, m_max: int, jobs: int = 1) -> CheckReport:
    """f(x) ≤ f(y) whenever (m+1)x ≤ my, for grid x, y and 1 ≤ m ≤ m_max."""
    if m_max < 1:
        raise PreconditionViolated("m_max must be at least 1")
    S, T = f.domain, f.codomain
    with Stopwatch() as sw:
        grid = _defined_grid(f, depth)
        images = {a: f.apply(a) for a in grid}
        multiples = {(m, a): S.multiply(m, a) for a in grid for m in range(1, m_max + 2)}

        def scan(x):
            for y in grid:
                if T._leq(images[x], images[y]):
                    continue
                for m in range(1, m_max + 1):
                    if S._leq(multiples[(m + 1, x)], multiples[(m, y)]):
                        return {"x": x, "y": y, "m": m}
            return None

        failure = first_failure(sweep(scan, grid, jobs))
    count = len(grid) ** 2 * m_max
    bounds = {"m_max": m_max}
    if failure is not None:
        return _fail("check_almost_unperforated", f, depth, failure, "almost unperforation", count,
                     sw.elapsed_ms, bounds=bounds)
    return _pass("check_almost_unperforated", f, depth, count, sw.elapsed_ms,
                 "almost unperforated on the grid", bounds)


def _is_witness(T, k: int, z: Element, fxp: Element, fx: Element) -> bool:
    return T.leq(T.multiply(k, z), fx) and T.leq(fxp, T.multiply(k + 1, z))


def find_witness(f: Morphism, k: int, xp: Element, x: Element, depth: int, factor: int = 2) -> tuple:
    """
    Search an almost-divisibility witness.

    Returns:
        (z, source) with source one of "closed-form", "soft-division", "grid";
        (None, certain) when nothing is found, certain meaning the search
        covered every element below f(x)
    """
    T = f.codomain
    fx, fxp = f.apply(x), f.apply(xp)
    z = f.witness(k, xp, x)
    if z is not None and _is_witness(T, k, z, fxp, fx):
        return z, "closed-form"
    z = T.strong_divide(fx, k)
    if z is not None and _is_witness(T, k, z, fxp, fx):
        return z, "soft-division"
    search_depth = depth * factor
    for z in T.grid(search_depth):
        if _is_witness(T, k, z, fxp, fx):
            return z, "grid"
    return None, T.search_is_exhaustive(fx, search_depth)


def divisibility_witness(f: Morphism, k: int, xp: Element, x: Element, depth: int = 6,
                         factor: int = 2) -> Element:
    """
    Witness z with k·z ≤ f(x) and f(x′) ≤ (k+1)·z.

    Closed forms are preferred; otherwise the first witness of the enlarged
    codomain grid in canonical order is returned.

    Raises:
        NoWitnessFound: if the bounded search is exhausted
    """
    z, source = find_witness(f, k, xp, x, depth, factor)
    if z is None:
        raise NoWitnessFound(
            f"no z with {k}z <= {f.name}({f.domain.format(x)}) and "
            f"{f.name}({f.domain.format(xp)}) <= {k + 1}z at depth {depth * factor}"
        )
    logger.debug(f"witness {f.codomain.format(z)} for k={k} from {source}")
    return z


def check_almost_divisible(f: Morphism, depth: int, k_max: int, factor: int = 2, jobs: int = 1) -> CheckReport:
    """
    For grid x′ ≪ x and 1 ≤ k ≤ k_max search z with kz ≤ f(x), f(x′) ≤ (k+1)z.

    Inconclusive when a search runs out without covering everything below f(x).
    """
    if k_max < 1:
        raise PreconditionViolated("k_max must be at least 1")
    S, T = f.domain, f.codomain
    with Stopwatch() as sw:
        grid = _defined_grid(f, depth)

        def scan(x):
            found, undecided, count = [], None, 0
            for xp in grid:
                if not S._way_below(xp, x):
                    continue
                for k in range(1, k_max + 1):
                    count += 1
                    z, source = find_witness(f, k, xp, x, depth, factor)
                    roles = {"x'": xp, "x": x, "k": k}
                    if z is not None:
                        if len(found) < WITNESS_LIMIT:
                            found.append(dict(_text(S, roles), z=T.format(z)))
                    elif source:
                        return roles, None, found, count
                    elif undecided is None:
                        undecided = roles
            return None, undecided, found, count

        results = sweep(scan, grid, jobs)
    count = sum(r[3] for r in results)
    bounds = {"k_max": k_max, "search_depth": depth * factor}
    failure = first_failure(r[0] for r in results)
    if failure is not None:
        return _fail("check_almost_divisible", f, depth, failure, "almost divisibility", count,
                     sw.elapsed_ms, bounds=bounds)
    witnesses = [w for r in results for w in r[2]]
    undecided = first_failure(r[1] for r in results)
    if undecided is not None:
        logger.warning(f"{f.name}: witness search for almost divisibility ran out of grid")
        return CheckReport(
            check="check_almost_divisible", status=CheckStatus.INCONCLUSIVE, depth=depth, bounds=bounds,
            counterexample=_text(S, undecided), elapsed_ms=sw.elapsed_ms, instances=count,
            witnesses=witnesses[:WITNESS_LIMIT], message=f"{f.name}: no witness found within the search grid",
        )
    return _pass("check_almost_divisible", f, depth, count, sw.elapsed_ms, "almost divisible on the grid",
                 bounds, witnesses)


def check_pure(f: Morphism, depth: int, k_max: int, m_max: int, factor: int = 2, jobs: int = 1) -> CheckReport:
    """Cu(Z)-multiplication: almost unperforated and almost divisible."""
    parts = [
        check_almost_unperforated(f, depth, m_max, jobs),
        check_almost_divisible(f, depth, k_max, factor, jobs),
    ]
    return combine("check_pure", f, depth, parts)


def combine(check: str, f: Morphism, depth: int, parts: Iterable[CheckReport]) -> CheckReport:
    """Fold sub-reports: the first failure wins, then the first inconclusive."""
    parts = list(parts)
    failing = next((p for p in parts if p.status == CheckStatus.FAIL), None)
    undecided = next((p for p in parts if p.status == CheckStatus.INCONCLUSIVE), None)
    leading = failing or undecided
    status = leading.status if leading else CheckStatus.PASS
    return CheckReport(
        check=check, status=status, depth=depth,
        counterexample=leading.counterexample if leading else None,
        bounds={k: v for p in parts for k, v in p.bounds.items()},
        exact=all(p.exact for p in parts), elapsed_ms=round(sum(p.elapsed_ms for p in parts), 3),
        instances=sum(p.instances for p in parts),
        message=leading.message if leading else f"{f.name}: " + ", ".join(p.check for p in parts) + " pass",
        details=parts, metadata={"morphism": f.name},
    )


def smooth_numbers(primes: Iterable[int], bound: int) -> list:
    """Divisors n ≥ 2 of the supernatural number, up to bound."""
    primes = sorted(set(primes))
    out = []
    for n in range(2, bound + 1):
        m = n
        for p in primes:
            while m % p == 0:
                m //= p
        if m == 1:
            out.append(n)
    return out


def check_q_rational(f: Morphism, primes: Iterable[int], depth: int, factor: int = 2) -> CheckReport:
    """q-divisibility (f(x) = n·y) and q-unperforation (nx ≤ ny ⇒ f(x) ≤ f(y))."""
    primes = sorted(set(primes))
    if not primes:
        raise PreconditionViolated("q-rationality needs a nonempty prime set")
    S, T = f.domain, f.codomain
    divisors = smooth_numbers(primes, depth)
    bounds = {"primes": len(primes), "max_divisor": max(divisors, default=1)}
    count, failure, law, undecided = 0, None, "", None
    with Stopwatch() as sw:
        grid = _defined_grid(f, depth)
        images = {a: f.apply(a) for a in grid}
        for x in grid:
            for n in divisors:
                count += 1
                y, decided = T.exact_divide(images[x], n, depth * factor)
                if y is None:
                    if decided:
                        failure, law = {"x": x, "n": n}, "q-divisibility"
                        break
                    undecided = undecided or {"x": x, "n": n}
            if failure:
                break
        if failure is None:
            for x, y in itertools.product(grid, repeat=2):
                if T._leq(images[x], images[y]):
                    continue
                for n in divisors:
                    count += 1
                    if S._leq(S.multiply(n, x), S.multiply(n, y)):
                        failure, law = {"x": x, "y": y, "n": n}, "q-unperforation"
                        break
                if failure:
                    break
    if failure is not None:
        return _fail("check_q_rational", f, depth, failure, law, count, sw.elapsed_ms, bounds=bounds)
    if undecided is not None:
        return CheckReport(
            check="check_q_rational", status=CheckStatus.INCONCLUSIVE, depth=depth, bounds=bounds,
            counterexample=_text(S, undecided), elapsed_ms=sw.elapsed_ms, instances=count,
            message=f"{f.name}: exact division not settled within the search grid",
        )
    return _pass("check_q_rational", f, depth, count, sw.elapsed_ms,
                 f"q-rational for primes {','.join(map(str, primes))}", bounds)


def check_soft_morphism(f: Morphism, depth: int) -> CheckReport:
    """Every grid image is strongly soft in the codomain."""
    S, T = f.domain, f.codomain
    count, failure = 0, None
    with Stopwatch() as sw:
        for x in _defined_grid(f, depth):
            count += 1
            image = f.apply(x)
            if not is_strongly_soft(T, image, depth):
                failure = {"x": x, "image": T.format(image)}
                below = soft_failure(T, image, depth)
                if below is not None:
                    failure["x'"] = T.format(below)
                break
    if failure is not None:
        return _fail("check_soft_morphism", f, depth, failure, "softness", count, sw.elapsed_ms)
    return _pass("check_soft_morphism", f, depth, count, sw.elapsed_ms, "every image is strongly soft")


def check_w_multiplication(f: Morphism, depth: int, k_max: int, m_max: int, factor: int = 2,
                           jobs: int = 1) -> CheckReport:
    """Cu(W)-multiplication: soft and pure."""
    parts = [
        check_soft_morphism(f, depth),
        check_almost_unperforated(f, depth, m_max, jobs),
        check_almost_divisible(f, depth, k_max, factor, jobs),
    ]
    return combine("check_w_multiplication", f, depth, parts)
