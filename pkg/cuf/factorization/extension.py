"""
Gluing maps out of Z, and the two-fraction comparison of witness sets.
"""
import itertools
import logging
from fractions import Fraction
from typing import Optional

from cuf.base import CheckReport, CheckStatus, PreconditionViolated, Stopwatch
from cuf.factorization.mu import MuSpec, mu_sample
from cuf.morphisms.base import Morphism
from cuf.morphisms.catalog import Glued, GraphMorphism
from cuf.morphisms.checks import check_generalized_cu_morphism
from cuf.oracle.brute import brute_morphism_check
from cuf.semigroup.base import ModelKind, fraction_grid
from cuf.semigroup.elements import Element, Real
from cuf.semigroup.scalar import ZModel

logger = logging.getLogger(__name__)


def _condition_i(c1: Element, gamma_s: Morphism, depth: int) -> tuple:
    """γ(σ(1)) ≤ γ(1) ≤ γ(1+ε) for every grid ε > 0; returns (failure roles or None, count)."""
    T = gamma_s.codomain
    low = gamma_s.apply(Real(1))
    if not T.leq(low, c1):
        return {"gamma(soft:1)": T.format(low), "gamma(1)": T.format(c1)}, 1
    count = 1
    for eps in sorted(fraction_grid(depth)):
        count += 1
        high = gamma_s.apply(Real(1 + eps))
        if not T.leq(c1, high):
            return {"epsilon": str(eps), "gamma(1)": T.format(c1), "gamma(1+epsilon)": T.format(high)}, count
    return None, count


def check_z_extension(c1: Element, gamma_s: Morphism, depth: int, chain_depth: int = 16,
                      domain: Optional[ZModel] = None) -> CheckReport:
    """
    Decide whether Compact(n) ↦ n·c1, Soft(t) ↦ gamma_s(t) is a generalized
    Cu-morphism Z → T.

    The verdict combines condition (i) γ(σ(1)) ≤ γ(1) ≤ γ(1+ε) with the
    generalized Cu-morphism check of gamma_s, and is cross-validated against
    the brute-force check of the tabulated glued map.

    Args:
        c1: Image of Compact(1) in the codomain of gamma_s
        gamma_s: Map on the soft part, from HalfLine
        depth: Grid depth for ε and for both checks
    Returns:
        CheckReport whose metadata records agreement with the brute check
    """
    if gamma_s.domain.kind != ModelKind.HALFLINE:
        raise PreconditionViolated("the soft-part map must start from HalfLine")
    T = gamma_s.codomain
    c1 = T.canonical(c1)
    glued = Glued(domain or ZModel(), c1, gamma_s)
    with Stopwatch() as sw:
        failure, count = _condition_i(c1, gamma_s, depth)
        soft_part = check_generalized_cu_morphism(gamma_s, depth, chain_depth)
        brute = brute_morphism_check(GraphMorphism.tabulate(glued, depth), depth)
    if failure is not None:
        status, message, counterexample = CheckStatus.FAIL, f"{glued.name}: condition (i) fails", failure
    elif soft_part.status != CheckStatus.PASS:
        status, message = soft_part.status, f"{glued.name}: soft part is not a generalized Cu-morphism"
        counterexample = soft_part.counterexample
    else:
        status, message, counterexample = CheckStatus.PASS, f"{glued.name}: extends to a generalized Cu-morphism", None
    agree = (status == CheckStatus.PASS) == (brute.status == CheckStatus.PASS)
    if not agree:
        logger.warning(f"{glued.name}: extension criterion says {status.value}, brute check says {brute.status.value}")
    return CheckReport(
        check="check_z_extension", status=status, depth=depth, counterexample=counterexample,
        exact=agree, elapsed_ms=sw.elapsed_ms, instances=count + soft_part.instances + brute.instances,
        message=message, details=[soft_part, brute],
        metadata={"morphism": glued.name, "brute_status": brute.status.value, "agrees_with_brute": agree},
    )


def lemma_almunpf_check(phi: Morphism, k1: int, n1: int, k2: int, n2: int, x1: Element, x2: Element,
                        depth: int, interpolant: Optional[Element] = None) -> CheckReport:
    """
    Compare witness sets of two fractions through an almost unperforated map.

    For k1/n1 < k2/(n2+1) and x1 ≤ x2, every y1 ∈ μ((k1,n1),0,x1) and
    y2 ∈ μ((k2,n2),x1,x2) must satisfy φ(y1) ≤ φ(y2). With a Cu-morphism φ
    and an interpolant x1 ≪ x2′ ≪ x2, y2 ranges over μ((k2,n2),x2′,x2) and
    φ(y1) ≪ φ(y2) is required as well.

    Raises:
        PreconditionViolated: if the fractions or the elements are out of order
    """
    if not Fraction(k1, n1) < Fraction(k2, n2 + 1):
        raise PreconditionViolated(f"{k1}/{n1} < {k2}/{n2 + 1} fails")
    S, T = phi.domain, phi.codomain
    x1, x2 = S.canonical(x1), S.canonical(x2)
    if not S.leq(x1, x2):
        raise PreconditionViolated(f"{S.format(x1)} is not below {S.format(x2)}")
    strict = interpolant is not None and phi.declared_cu_morphism
    if strict:
        interpolant = S.canonical(interpolant)
        if not (S.way_below(x1, interpolant) and S.way_below(interpolant, x2)):
            raise PreconditionViolated("the interpolant must sit way between x1 and x2")
    lower = [y for y in mu_sample(S, MuSpec(k1, n1, S.zero, x1), depth) if phi.defined(y)]
    upper = [y for y in mu_sample(S, MuSpec(k2, n2, x1, x2), depth) if phi.defined(y)]
    tight = [y for y in mu_sample(S, MuSpec(k2, n2, interpolant, x2), depth) if phi.defined(y)] if strict else []
    failure, law, count = None, "", 0
    with Stopwatch() as sw:
        for y1, y2 in itertools.product(lower, upper):
            count += 1
            if not T.leq(phi.apply(y1), phi.apply(y2)):
                failure, law = {"y1": y1, "y2": y2}, "order"
                break
        if failure is None:
            for y1, y2 in itertools.product(lower, tight):
                count += 1
                if not T.way_below(phi.apply(y1), phi.apply(y2)):
                    failure, law = {"y1": y1, "y2": y2}, "way-below"
                    break
    bounds = {"k1": k1, "n1": n1, "k2": k2, "n2": n2}
    if failure is not None:
        return CheckReport(
            check="lemma_almunpf_check", status=CheckStatus.FAIL, depth=depth, bounds=bounds,
            counterexample={k: S.format(v) for k, v in failure.items()}, elapsed_ms=sw.elapsed_ms,
            instances=count, message=f"{phi.name}: {law} conclusion fails", metadata={"law": law},
        )
    return CheckReport(
        check="lemma_almunpf_check", status=CheckStatus.PASS, depth=depth, bounds=bounds,
        elapsed_ms=sw.elapsed_ms, instances=count,
        message=f"{phi.name}: {len(lower)} x {len(upper)} witness pairs compare",
        metadata={"way_below_checked": strict},
    )
