"""
Abstract base class for catalog morphisms between semigroup models.

Extension approach:
1. Inherit Morphism
2. Implement _apply() and, when possible, _map_chain()
3. Register a builder in cuf.catalog so scenarios can declare it
"""
from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

from cuf.base import ModelMismatch, UnsupportedChainForm
from cuf.semigroup.base import SemigroupModel
from cuf.semigroup.chains import Chain, ExplicitChain, SoftRescaledChain
from cuf.semigroup.elements import Element


class MorphismKind(str, Enum):
    """Kinds of catalog morphisms."""
    IDENTITY = "identity"
    ZERO = "zero"
    MULTIPLY_BY = "multiply_by"
    INFINITE = "infinite"
    SIGMA = "sigma"
    NAT_TO_SOFT = "nat_to_soft"
    SCALE = "scale"
    SOFT_EMBEDDING = "soft_embedding"
    PROJECTION = "projection"
    INJECTION = "injection"
    PRODUCT_MAP = "product_map"
    TABLE_MAP = "table_map"
    GLUED = "glued"
    COMPOSE = "compose"


class Morphism(ABC):
    """
    Map between two models drawn from a closed catalog.

    apply() is total on canonical domain elements and returns canonical
    codomain elements. map_chain() gives the closed form of the image of a
    chain so suprema can be taken exactly.
    """

    kind: MorphismKind
    # f(σ(a)·r) = σ(f(a))·r; lets soft-rescaled chains pass through f
    commutes_with_soft_scaling: bool = False

    def __init__(
        self,
        domain: SemigroupModel,
        codomain: SemigroupModel,
        name: Optional[str] = None,
        declared_cu_morphism: bool = True,
    ):
        self.domain = domain
        self.codomain = codomain
        self.name = name or self.default_name()
        self.declared_cu_morphism = declared_cu_morphism

    def default_name(self) -> str:
        return f"{self.kind.value}:{self.domain.name}->{self.codomain.name}"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    def apply(self, a: Element) -> Element:
        """Image of a; ModelMismatch if a is not in the domain."""
        return self.codomain.canonical(self._apply(self.domain.canonical(a)))

    @abstractmethod
    def _apply(self, a: Element) -> Element:
        pass

    def defined(self, a: Element) -> bool:
        """Whether apply() is defined at a (always, except for partial graphs)."""
        return self.domain.contains(a)

    def map_chain(self, chain: Chain) -> Chain:
        """
        Closed-form image chain d ↦ f(chain(d)).

        Raises:
            UnsupportedChainForm: if f has no closed form for this chain family
        """
        if isinstance(chain, ExplicitChain):
            return ExplicitChain(tuple(self.apply(item) for item in chain.items))
        if isinstance(chain, SoftRescaledChain):
            if not self.commutes_with_soft_scaling:
                raise UnsupportedChainForm(f"{self.name} does not commute with soft scaling")
            return SoftRescaledChain(self.map_chain(chain.base), chain.rate)
        return self._map_chain(chain)

    def _map_chain(self, chain: Chain) -> Chain:
        raise UnsupportedChainForm(f"{self.name} has no closed form for {chain.kind} chains")

    def witness(self, k: int, xp: Element, x: Element) -> Optional[Element]:
        """Closed-form almost-divisibility witness z, or None to search."""
        return None

    def parameters(self) -> dict:
        """Constructor parameters as scenario text."""
        return {}


def require_composable(first: Morphism, second: Morphism) -> None:
    """Raise ModelMismatch unless second can be applied after first."""
    if first.codomain != second.domain:
        raise ModelMismatch(
            f"cannot compose {second.name} after {first.name}: "
            f"{first.codomain.name} is not {second.domain.name}"
        )
