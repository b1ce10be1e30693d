"""
The rational variant: α_q on S × (K_q ⊔ (0,∞]).

For t = k/n in lowest terms α_q(x, t) = k·ω_n(x), where ω_n(x) is the
φ₂-image of the element z with φ₁(x) = n·z; soft t falls back to α.
"""
import logging
from fractions import Fraction
from typing import Iterable

from cuf.base import (
    CheckReport,
    CheckStatus,
    CuError,
    NoWitnessFound,
    NotADivisor,
    Stopwatch,
    UniquenessViolated,
)
from cuf.factorization.alpha import FactorPair, alpha_eval
from cuf.morphisms.checks import check_q_rational, combine, smooth_numbers
from cuf.semigroup.base import fraction_grid
from cuf.semigroup.chains import DEFAULT_CHAIN_DEPTH
from cuf.semigroup.elements import Compact, Element, Soft
from cuf.semigroup.scalar import KqModel

logger = logging.getLogger(__name__)


def _require_divisor(n: int, primes: tuple) -> None:
    if n < 1:
        raise NotADivisor(f"{n} is not a positive integer")
    m = n
    for p in primes:
        while m % p == 0:
            m //= p
    if m != 1:
        raise NotADivisor(f"{n} has a prime factor outside {{{', '.join(map(str, primes))}}}")


def omega_n_eval(p: FactorPair, x: Element, n: int, primes: Iterable[int], depth: int = 8,
                 factor: int = 2) -> Element:
    """
    ω_n(x) = φ₂(z) for z with φ₁(x) = n·z.

    Uniqueness of the image is asserted by searching the enlarged grid of
    the middle model for a second solution with a different image.

    Raises:
        NotADivisor: if n has a prime factor outside primes
        NoWitnessFound: if no z is found
        UniquenessViolated: if two solutions have different images
    """
    primes = tuple(sorted(set(primes)))
    _require_divisor(n, primes)
    S1, S2 = p.source, p.middle
    fx = p.phi1.apply(S1.canonical(x))
    search = depth * factor
    z, decided = S2.exact_divide(fx, n, search)
    if z is None:
        qualifier = "" if decided else f" within depth {search}"
        raise NoWitnessFound(f"{S2.format(fx)} is not {n} times an element of {S2.name}{qualifier}")
    image = p.phi2.apply(z)
    for other in S2.grid(search):
        if S2.multiply(n, other) == fx and p.phi2.defined(other):
            second = p.phi2.apply(other)
            if second != image:
                raise UniquenessViolated(
                    f"{S2.format(z)} and {S2.format(other)} both divide {S2.format(fx)} by {n} "
                    f"but map to {p.target.format(image)} and {p.target.format(second)}"
                )
    return image


def alpha_q_eval(p: FactorPair, x: Element, t: Element, primes: Iterable[int], depth: int = 8,
                 chain_depth: int = DEFAULT_CHAIN_DEPTH, factor: int = 2) -> Element:
    """
    α_q(x, t) for t in K_q ⊔ (0,∞].

    Compact t = k/n gives k·ω_n(x); soft t delegates to alpha_eval.
    """
    primes = tuple(sorted(set(primes)))
    t = KqModel(primes).canonical(t)
    x = p.source.canonical(x)
    if isinstance(t, Soft):
        return alpha_eval(p, x, t, depth, chain_depth, factor)
    value = Fraction(t.value)
    if value == 0:
        return p.target.zero
    k, n = value.numerator, value.denominator
    if n == 1:
        return p.target.multiply(k, p.phi2.apply(p.phi1.apply(x)))
    return p.target.multiply(k, omega_n_eval(p, x, n, primes, depth, factor))


def verify_alpha_q(p: FactorPair, primes: Iterable[int], depth: int, chain_depth: int = DEFAULT_CHAIN_DEPTH,
                   factor: int = 2) -> CheckReport:
    """
    Check α_q(x, 1) = φ₂φ₁(x) and α_q(x, σ(1/n)) ≤ α_q(x, 1/n) ≤ α_q(x, σ(1/n)+ε)
    for grid x, divisors n ≤ depth of the supernatural number and grid ε.

    φ₁ and φ₂ are first checked q-rational; a failure there is reported as a
    precondition failure.
    """
    primes = tuple(sorted(set(primes)))
    check = "verify_alpha_q"
    roles = combine("factor_pair_q_roles", p.composite(), depth, [
        check_q_rational(p.phi1, primes, depth, factor),
        check_q_rational(p.phi2, primes, depth, factor),
    ])
    if roles.status == CheckStatus.FAIL:
        return CheckReport(
            check=check, status=CheckStatus.FAIL, depth=depth, counterexample=roles.counterexample,
            elapsed_ms=roles.elapsed_ms, instances=roles.instances,
            message=f"precondition rejected for {p.name}: {roles.message}", details=[roles],
            metadata={"precondition": True, "pair": p.name},
        )
    S, T = p.source, p.target
    divisors = [1] + smooth_numbers(primes, depth)
    epsilons = sorted(fraction_grid(max(2, depth // 2)))
    memo: dict = {}

    def alpha_q(x, t):
        if (x, t) not in memo:
            memo[(x, t)] = alpha_q_eval(p, x, t, primes, depth, chain_depth, factor)
        return memo[(x, t)]

    failure, undecided, count = None, None, 0
    with Stopwatch() as sw:
        try:
            for x in S.grid(depth):
                count += 1
                if alpha_q(x, Compact(1)) != p.phi2.apply(p.phi1.apply(x)):
                    failure = {"law": "identity", "x": S.format(x)}
                    break
                for n in divisors:
                    unit = Fraction(1, n)
                    low, mid = alpha_q(x, Soft(unit)), alpha_q(x, Compact(unit))
                    for eps in epsilons:
                        count += 1
                        high = alpha_q(x, Soft(unit + eps))
                        if not (T.leq(low, mid) and T.leq(mid, high)):
                            failure = {"law": "extension", "x": S.format(x), "n": str(n), "epsilon": str(eps)}
                            break
                    if failure:
                        break
                if failure:
                    break
        except CuError as exc:
            undecided = str(exc)
    bounds = {"max_divisor": divisors[-1]}
    if failure is not None:
        law = failure.pop("law")
        return CheckReport(
            check=check, status=CheckStatus.FAIL, depth=depth, bounds=bounds, counterexample=failure,
            elapsed_ms=round(roles.elapsed_ms + sw.elapsed_ms, 3), instances=count,
            message=f"{p.name}: alpha_q fails {law}", details=[roles], metadata={"law": law, "pair": p.name},
        )
    if undecided is not None or roles.status == CheckStatus.INCONCLUSIVE:
        logger.warning(f"{p.name}: alpha_q verification undecided: {undecided or roles.message}")
        return CheckReport(
            check=check, status=CheckStatus.INCONCLUSIVE, depth=depth, bounds=bounds,
            elapsed_ms=round(roles.elapsed_ms + sw.elapsed_ms, 3), instances=count,
            message=f"{p.name}: {undecided or roles.message}", details=[roles], metadata={"pair": p.name},
        )
    return CheckReport(
        check=check, status=CheckStatus.PASS, depth=depth, bounds=bounds,
        elapsed_ms=round(roles.elapsed_ms + sw.elapsed_ms, 3), instances=count,
        message=f"{p.name}: alpha_q satisfies the identity and the extension conditions",
        details=[roles], metadata={"pair": p.name},
    )
