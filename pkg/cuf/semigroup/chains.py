"""
Closed-form increasing sequences and their suprema.

A chain is a family d ↦ element for d = 1, 2, ... described by a closed
form: a linear-fractional payload in d, an eventually-constant list, a
pointwise truncation of an lsc function, a componentwise product, or the
soft rescaling of another chain by a linear-fractional rate.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Optional

from cuf.base import NotMonotone, UnsupportedChainForm
from cuf.semigroup.elements import (
    INF,
    Element,
    LscFn,
    Value,
    Vector,
    make_scalar,
    soft_scale_element,
)

if TYPE_CHECKING:
    from cuf.semigroup.base import SemigroupModel

logger = logging.getLogger(__name__)

DEFAULT_CHAIN_DEPTH = 16


@dataclass(frozen=True)
class Mobius:
    """Payload (a·d + b) / (c·d + e), positive denominator for d ≥ 1."""
    a: Fraction
    b: Fraction
    c: Fraction
    e: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "e"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.c + self.e <= 0 or self.c < 0:
            raise ValueError("denominator must stay positive for d >= 1")

    @classmethod
    def approaching(cls, limit: Value) -> "Mobius":
        """limit·d/(d+1) for finite limits, d itself for ∞."""
        if limit is INF:
            return cls(1, 0, 0, 1)
        return cls(limit, 0, 1, 1)

    @classmethod
    def constant(cls, value) -> "Mobius":
        return cls(0, value, 0, 1)

    def at(self, d: int) -> Fraction:
        return (self.a * d + self.b) / (self.c * d + self.e)

    @property
    def determinant(self) -> Fraction:
        return self.a * self.e - self.b * self.c

    def is_constant(self) -> bool:
        return self.determinant == 0

    def limit(self) -> Value:
        if self.c != 0:
            return self.a / self.c
        if self.a == 0:
            return self.b / self.e
        if self.a > 0:
            return INF
        raise NotMonotone("payload decreases without bound")

    def scaled(self, factor) -> "Mobius":
        factor = Fraction(factor)
        return Mobius(self.a * factor, self.b * factor, self.c, self.e)


class Chain(ABC):
    """Closed-form family d ↦ element, d = 1, 2, ..."""

    kind: str = "base"

    @abstractmethod
    def term(self, d: int) -> Element:
        pass

    def terms(self, depth: int) -> list:
        return [self.term(d) for d in range(1, depth + 1)]


@dataclass(frozen=True)
class RationalChain(Chain):
    """Scalar chain with payload given by a Mobius family."""
    variant: str  # "compact" | "soft" | "real"
    payload: Mobius

    kind = "rational"

    def term(self, d: int) -> Element:
        return make_scalar(self.variant, self.payload.at(d))


@dataclass(frozen=True)
class ExplicitChain(Chain):
    """Finite list, constant at its last term afterwards."""
    items: tuple

    kind = "explicit"

    def __post_init__(self):
        if not self.items:
            raise ValueError("explicit chain needs at least one term")
        object.__setattr__(self, "items", tuple(self.items))

    def term(self, d: int) -> Element:
        return self.items[min(d, len(self.items)) - 1]


def constant_chain(element: Element) -> ExplicitChain:
    return ExplicitChain((element,))


@dataclass(frozen=True)
class TruncationChain(Chain):
    """Pointwise truncation d ↦ factor·min(base, d) of an lsc function."""
    base: LscFn
    factor: int = 1

    kind = "truncation"

    def term(self, d: int) -> Element:
        capped = tuple(min(v, Fraction(d)) for v in self.base.values)
        return LscFn(tuple(v * self.factor for v in capped))


@dataclass(frozen=True)
class ProductChain(Chain):
    """Componentwise chain in a product model."""
    parts: tuple

    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def term(self, d: int) -> Element:
        return Vector(tuple(part.term(d) for part in self.parts))


@dataclass(frozen=True)
class SoftRescaledChain(Chain):
    """d ↦ σ(base(d))·rate(d) for an increasing positive rate."""
    base: Chain
    rate: Mobius

    kind = "soft-rescaled"

    def term(self, d: int) -> Element:
        return soft_scale_element(self.base.term(d), self.rate.at(d))


def verify_monotone(model: "SemigroupModel", chain: Chain, depth: int = DEFAULT_CHAIN_DEPTH) -> list:
    """
    Check the first depth terms of chain are increasing in model.

    Returns:
        list of the canonical terms checked
    Raises:
        NotMonotone: if some term is not below its successor
    """
    terms = [model.canonical(t) for t in chain.terms(depth)]
    for d in range(len(terms) - 1):
        if not model.leq(terms[d], terms[d + 1]):
            raise NotMonotone(
                f"chain term {d + 1} = {model.format(terms[d])} is not below "
                f"term {d + 2} = {model.format(terms[d + 1])}"
            )
    return terms


def sup_chain(model: "SemigroupModel", chain: Chain, depth: int = DEFAULT_CHAIN_DEPTH) -> Element:
    """
    Exact supremum of a closed-form chain in model.

    Args:
        model: Semigroup the chain lives in
        chain: Closed-form chain
        depth: Number of terms verified monotone first
    Returns:
        canonical supremum
    Raises:
        NotMonotone: if the chain fails monotonicity within depth
        UnsupportedChainForm: if no closed form applies
    """
    verify_monotone(model, chain, depth)
    return _closed_form_sup(model, chain)


def _closed_form_sup(model: "SemigroupModel", chain: Chain) -> Element:
    if isinstance(chain, ExplicitChain):
        return model.canonical(chain.items[-1])
    if isinstance(chain, RationalChain):
        if chain.payload.is_constant():
            return model.canonical(chain.term(1))
        if chain.payload.determinant < 0:
            raise NotMonotone("payload is decreasing")
        return model.limit_of(chain.variant, chain.payload.limit())
    if isinstance(chain, TruncationChain):
        return model.canonical(LscFn(tuple(v * chain.factor for v in chain.base.values)))
    if isinstance(chain, ProductChain):
        components = model.components()
        if len(components) != len(chain.parts):
            raise UnsupportedChainForm("product chain arity does not match the model")
        return Vector(tuple(
            _closed_form_sup(component, part)
            for component, part in zip(components, chain.parts)
        ))
    if isinstance(chain, SoftRescaledChain):
        if chain.rate.determinant <= 0 or chain.rate.at(1) <= 0:
            raise UnsupportedChainForm("rescaling rate must be positive and increasing")
        base_sup = _closed_form_sup(model, chain.base)
        return model.soft_scale(base_sup, chain.rate.limit())
    raise UnsupportedChainForm(f"no closed form for {type(chain).__name__}")


def probe_indices(horizon: int, count: int = 16) -> list:
    """Chain indices inspected by probing checks: 1..count and the horizon."""
    indices = list(range(1, min(count, horizon) + 1))
    if horizon not in indices:
        indices.append(horizon)
    return indices


def default_horizon(depth: int) -> int:
    """Chain index far enough out that its term separates every grid gap."""
    return 64 * max(depth, 1) ** 4


def is_probe_supremum(
    model: "SemigroupModel",
    terms: Iterable[Element],
    candidate: Element,
    upper_bounds: Iterable[Element],
) -> Optional[str]:
    """
    Check candidate against probed chain terms.

    candidate must dominate every probed term and lie below every element of
    upper_bounds that dominates them all. Terms must be listed in increasing
    order, so dominating the last one dominates them all.

    Returns:
        None when consistent, else a short description of the violation
    """
    terms = list(terms)
    for term in terms:
        if not model.leq(term, candidate):
            return f"term {model.format(term)} is not below {model.format(candidate)}"
    top = terms[-1]
    for bound in upper_bounds:
        if model.leq(top, bound) and not model.leq(candidate, bound):
            return f"upper bound {model.format(bound)} is below {model.format(candidate)}"
    return None
