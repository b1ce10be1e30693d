"""
Abstract base class for concrete Cu-semigroup models.

A model decides addition, order and the way-below relation exactly on its
canonical elements, enumerates depth-bounded grids in canonical order and
supplies the closed forms used by chains, witness searches and softness
tests.

Extension approach:
1. Inherit SemigroupModel
2. Implement the abstract primitives (_add, _leq, _way_below, grid, ...)
3. Register a builder in cuf.catalog
"""
from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from typing import Optional

from cuf.base import ModelMismatch, UnsupportedChainForm
from cuf.semigroup.chains import Chain, constant_chain
from cuf.semigroup.elements import Element, Value


class ModelKind(str, Enum):
    """Kinds of built-in models."""
    NBAR = "Nbar"
    Z = "Z"
    HALFLINE = "HalfLine"
    KQ = "Kq"
    PRODUCT = "Product"
    LSC = "LscFinitePoset"
    TABLE = "Table"


class SemigroupModel(ABC):
    """
    Concrete Cu-semigroup with decidable operations.

    Public operations canonicalize their arguments first and raise
    ModelMismatch for foreign elements; the underscored primitives assume
    canonical input.
    """

    kind: ModelKind

    def __init__(self, name: Optional[str] = None):
        self.name = name or self.default_name()
        self._grids: dict = {}

    # identity -------------------------------------------------------------

    def default_name(self) -> str:
        return self.kind.value

    @property
    def signature(self) -> tuple:
        """Structural identity; two models with equal signatures are equal."""
        return (self.kind.value,)

    def __eq__(self, other) -> bool:
        return isinstance(other, SemigroupModel) and self.signature == other.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    # canonical forms ------------------------------------------------------

    @property
    @abstractmethod
    def zero(self) -> Element:
        pass

    @abstractmethod
    def canonical(self, a: Element) -> Element:
        """Canonical representative of a; ModelMismatch if a is foreign."""
        pass

    def contains(self, a: Element) -> bool:
        try:
            self.canonical(a)
        except (ModelMismatch, TypeError, ValueError):
            return False
        return True

    def _mismatch(self, a) -> ModelMismatch:
        return ModelMismatch(f"{a!r} is not an element of {self.name}")

    # decided operations ---------------------------------------------------

    def add(self, a: Element, b: Element) -> Element:
        return self._add(self.canonical(a), self.canonical(b))

    def leq(self, a: Element, b: Element) -> bool:
        return self._leq(self.canonical(a), self.canonical(b))

    def way_below(self, a: Element, b: Element) -> bool:
        return self._way_below(self.canonical(a), self.canonical(b))

    def is_compact(self, a: Element) -> bool:
        a = self.canonical(a)
        return self._way_below(a, a)

    def equal(self, a: Element, b: Element) -> bool:
        return self.canonical(a) == self.canonical(b)

    def multiply(self, n: int, a: Element) -> Element:
        """n·a for a natural n."""
        if n < 0:
            raise ValueError("multiples must be natural")
        a = self.canonical(a)
        if n == 0:
            return self.zero
        return self._multiply(n, a)

    def total(self, elements) -> Element:
        result = self.zero
        for a in elements:
            result = self.add(result, a)
        return result

    @abstractmethod
    def _add(self, a: Element, b: Element) -> Element:
        pass

    @abstractmethod
    def _leq(self, a: Element, b: Element) -> bool:
        pass

    @abstractmethod
    def _way_below(self, a: Element, b: Element) -> bool:
        pass

    def _multiply(self, n: int, a: Element) -> Element:
        result, power = self.zero, a
        while n:
            if n & 1:
                result = self._add(result, power)
            power = self._add(power, power)
            n >>= 1
        return result

    @abstractmethod
    def infinite_multiple(self, a: Element) -> Element:
        """∞·a, the supremum of the multiples n·a."""
        pass

    # grids ----------------------------------------------------------------

    def grid(self, depth: int) -> list:
        """
        Depth-bounded grid in canonical order.

        Args:
            depth: Bound on integer payloads and on numerators/denominators
        Returns:
            list of distinct canonical elements, monotone in depth
        """
        if depth < 1:
            raise ValueError("grid depth must be at least 1")
        if depth not in self._grids:
            elements = set(self._grid_elements(depth))
            self._grids[depth] = sorted(elements, key=self.sort_key)
        return list(self._grids[depth])

    @abstractmethod
    def _grid_elements(self, depth: int):
        pass

    @abstractmethod
    def sort_key(self, a: Element) -> tuple:
        pass

    def search_is_exhaustive(self, bound: Element, depth: int) -> bool:
        """Whether every element below bound occurs in grid(depth)."""
        return False

    # chains ---------------------------------------------------------------

    def approximating_chain(self, a: Element) -> Chain:
        """≪-increasing chain with supremum a."""
        return constant_chain(self.canonical(a))

    def sample_chains(self, depth: int) -> list:
        """Chain families exercised by the O1 and O4 checks."""
        return [self.approximating_chain(a) for a in self.grid(depth)]

    def limit_of(self, variant: str, limit: Value) -> Element:
        """Supremum of a strictly increasing scalar chain with payload limit."""
        raise UnsupportedChainForm(f"{self.name} has no {variant} chains")

    def components(self) -> list:
        raise UnsupportedChainForm(f"{self.name} is not a product")

    # soft part and division ----------------------------------------------

    def soft_scale(self, a: Element, rate) -> Element:
        """σ(a)·rate in the soft part of the model."""
        raise UnsupportedChainForm(f"{self.name} has no soft part")

    def strong_divide(self, a: Element, k: int) -> Optional[Element]:
        """Closed-form y with k·y ≤ a and a ≤ (k+1)·y (when a ≠ 0), or None."""
        return None

    def exact_divide(self, a: Element, n: int, depth: int) -> tuple:
        """
        Some y with n·y = a.

        Returns:
            (y or None, decided) where decided means absence is certain
        """
        a = self.canonical(a)
        for y in self.grid(depth):
            if self.multiply(n, y) == a:
                return y, True
        return None, self.search_is_exhaustive(a, depth)

    def strongly_soft_closed_form(self, a: Element) -> Optional[bool]:
        """Closed-form strong softness of a, or None to force a search."""
        return None

    # text -----------------------------------------------------------------

    @abstractmethod
    def parse(self, text: str) -> Element:
        pass

    def format(self, a: Element) -> str:
        return str(a)


def fraction_grid(depth: int) -> set:
    """Positive rationals p/q with 1 ≤ p, q ≤ depth."""
    return {Fraction(p, q) for p in range(1, depth + 1) for q in range(1, depth + 1)}
