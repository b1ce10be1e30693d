"""
The closed morphism catalog.

Every class knows how to evaluate itself and, where a closed form exists,
how to push a chain family through itself so image suprema stay exact.
"""
import logging
from typing import Iterable, Mapping, Optional, Sequence

from cuf.base import ModelMismatch, UnsupportedChainForm
from cuf.morphisms.base import Morphism, MorphismKind, require_composable
from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.chains import (
    ExplicitChain,
    ProductChain,
    RationalChain,
    TruncationChain,
    constant_chain,
    default_horizon,
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
    Vector,
    as_value,
    format_value,
    soft,
)

logger = logging.getLogger(__name__)

SOFT_TARGETS = (ModelKind.Z, ModelKind.KQ, ModelKind.HALFLINE)


class Identity(Morphism):
    kind = MorphismKind.IDENTITY
    commutes_with_soft_scaling = True

    def __init__(self, model: SemigroupModel, name: Optional[str] = None):
        super().__init__(model, model, name)

    def default_name(self) -> str:
        return f"id_{self.domain.name}"

    def _apply(self, a):
        return a

    def _map_chain(self, chain):
        return chain


class Zero(Morphism):
    kind = MorphismKind.ZERO
    commutes_with_soft_scaling = True

    def _apply(self, a):
        return self.codomain.zero

    def _map_chain(self, chain):
        return constant_chain(self.codomain.zero)

    def witness(self, k, xp, x):
        return self.codomain.zero


class MultiplyBy(Morphism):
    """x ↦ m·x on a single model."""

    kind = MorphismKind.MULTIPLY_BY
    commutes_with_soft_scaling = True

    def __init__(self, model: SemigroupModel, factor: int, name: Optional[str] = None,
                 declared_cu_morphism: bool = True):
        if factor < 0:
            raise ValueError("multiply_by needs a natural factor")
        self.factor = int(factor)
        super().__init__(model, model, name, declared_cu_morphism)

    def default_name(self) -> str:
        return f"times{self.factor}_{self.domain.name}"

    def _apply(self, a):
        return self.domain.multiply(self.factor, a)

    def _map_chain(self, chain):
        if isinstance(chain, RationalChain):
            return RationalChain(chain.variant, chain.payload.scaled(self.factor))
        if isinstance(chain, TruncationChain):
            return TruncationChain(chain.base, chain.factor * self.factor)
        if isinstance(chain, ProductChain):
            parts = [MultiplyBy(f, self.factor).map_chain(part)
                     for f, part in zip(self.domain.components(), chain.parts)]
            return ProductChain(tuple(parts))
        return super()._map_chain(chain)

    def parameters(self):
        return {"factor": str(self.factor)}


class Infinite(Morphism):
    """x ↦ ∞·x."""

    kind = MorphismKind.INFINITE
    commutes_with_soft_scaling = True

    def __init__(self, model: SemigroupModel, name: Optional[str] = None, declared_cu_morphism: bool = False):
        super().__init__(model, model, name, declared_cu_morphism)

    def _apply(self, a):
        return self.domain.infinite_multiple(a)

    def _map_chain(self, chain):
        if isinstance(chain, ProductChain):
            return ProductChain(tuple(Infinite(f).map_chain(part)
                                      for f, part in zip(self.domain.components(), chain.parts)))
        # ∞·a only sees whether a vanishes, which settles by the second term
        first, second = self.apply(chain.term(1)), self.apply(chain.term(2))
        return ExplicitChain((first, second))


def _soft_image(target: SemigroupModel, a: Element, rate) -> Element:
    """σ(a)·rate expressed in the soft part of target."""
    if isinstance(a, Vector):
        components = target.components()
        if len(components) != len(a.items):
            raise ModelMismatch(f"{a} does not fit {target.name}")
        return Vector(tuple(_soft_image(t, item, rate) for t, item in zip(components, a.items)))
    if not isinstance(a, SCALAR_TYPES):
        raise ModelMismatch(f"{a!r} has no soft part")
    value = a.value * rate if a.value != 0 else a.value
    if target.kind == ModelKind.HALFLINE:
        return Real(value)
    if target.kind in (ModelKind.Z, ModelKind.KQ):
        return soft(value)
    raise ModelMismatch(f"{target.name} has no soft part")


def _soft_variant(target: SemigroupModel) -> str:
    return "real" if target.kind == ModelKind.HALFLINE else "soft"


class SoftScale(Morphism):
    """
    x ↦ σ(x)·r into the soft part of the codomain.

    Covers the soft retraction σ (rate 1, Z → Z or Z → [0,∞]), scale(r) on
    [0,∞] or on soft payloads, and the soft embedding [0,∞] → Z.
    """

    kind = MorphismKind.SCALE
    commutes_with_soft_scaling = True

    def __init__(self, domain: SemigroupModel, codomain: SemigroupModel, rate=1,
                 name: Optional[str] = None, declared_cu_morphism: Optional[bool] = None):
        self.rate = as_value(rate)
        if self.rate is INF or self.rate <= 0:
            raise ValueError("scaling rate must be a positive rational")
        if declared_cu_morphism is None:
            # compacts of the domain land on non-compact softs
            declared_cu_morphism = domain.kind == ModelKind.HALFLINE
        super().__init__(domain, codomain, name, declared_cu_morphism)

    def default_name(self) -> str:
        return f"{self.kind.value}{format_value(self.rate)}:{self.domain.name}->{self.codomain.name}"

    def _apply(self, a):
        return _soft_image(self.codomain, a, self.rate)

    def _map_chain(self, chain):
        if isinstance(chain, RationalChain):
            return RationalChain(_soft_variant(self.codomain), chain.payload.scaled(self.rate))
        if isinstance(chain, ProductChain):
            parts = [SoftScale(s, t, self.rate).map_chain(part)
                     for s, t, part in zip(self.domain.components(), self.codomain.components(), chain.parts)]
            return ProductChain(tuple(parts))
        return super()._map_chain(chain)

    def parameters(self):
        return {"rate": format_value(self.rate)}


class Sigma(SoftScale):
    """The soft retraction: compacts go to their soft counterparts, softs stay."""

    kind = MorphismKind.SIGMA

    def __init__(self, domain: SemigroupModel, codomain: Optional[SemigroupModel] = None,
                 name: Optional[str] = None, declared_cu_morphism: Optional[bool] = None):
        super().__init__(domain, codomain or domain, 1, name, declared_cu_morphism)

    def default_name(self) -> str:
        return f"sigma:{self.domain.name}->{self.codomain.name}"

    def parameters(self):
        return {}


class NatToSoft(SoftScale):
    """N̄ → Z, n ↦ Soft(n)."""

    kind = MorphismKind.NAT_TO_SOFT

    def __init__(self, domain: SemigroupModel, codomain: SemigroupModel, name: Optional[str] = None):
        if domain.kind != ModelKind.NBAR or codomain.kind not in SOFT_TARGETS:
            raise ModelMismatch("nat_to_soft maps Nbar into a model with a soft part")
        super().__init__(domain, codomain, 1, name, declared_cu_morphism=False)

    def default_name(self) -> str:
        return "nat_to_soft"

    def parameters(self):
        return {}


class SoftEmbedding(SoftScale):
    """[0,∞] → Z (or K_q ⊔ (0,∞]), t ↦ Soft(t)."""

    kind = MorphismKind.SOFT_EMBEDDING

    def __init__(self, domain: SemigroupModel, codomain: SemigroupModel, name: Optional[str] = None):
        if domain.kind != ModelKind.HALFLINE:
            raise ModelMismatch("soft_embedding starts from HalfLine")
        super().__init__(domain, codomain, 1, name, declared_cu_morphism=True)

    def default_name(self) -> str:
        return f"soft_embedding:{self.codomain.name}"

    def parameters(self):
        return {}


class Projection(Morphism):
    kind = MorphismKind.PROJECTION
    commutes_with_soft_scaling = True

    def __init__(self, domain: SemigroupModel, index: int, name: Optional[str] = None):
        components = domain.components()
        if not 0 <= index < len(components):
            raise ValueError(f"projection index {index} out of range")
        self.index = index
        super().__init__(domain, components[index], name)

    def default_name(self) -> str:
        return f"pr{self.index}_{self.domain.name}"

    def _apply(self, a):
        return a.items[self.index]

    def _map_chain(self, chain):
        if isinstance(chain, ProductChain):
            return chain.parts[self.index]
        return super()._map_chain(chain)

    def parameters(self):
        return {"index": str(self.index)}


class Injection(Morphism):
    kind = MorphismKind.INJECTION
    commutes_with_soft_scaling = True

    def __init__(self, codomain: SemigroupModel, index: int, name: Optional[str] = None):
        components = codomain.components()
        if not 0 <= index < len(components):
            raise ValueError(f"injection index {index} out of range")
        self.index = index
        super().__init__(components[index], codomain, name)

    def default_name(self) -> str:
        return f"in{self.index}_{self.codomain.name}"

    def _apply(self, a):
        items = [f.zero for f in self.codomain.components()]
        items[self.index] = a
        return Vector(tuple(items))

    def _map_chain(self, chain):
        parts = [constant_chain(f.zero) for f in self.codomain.components()]
        parts[self.index] = chain
        return ProductChain(tuple(parts))

    def parameters(self):
        return {"index": str(self.index)}


class ProductMap(Morphism):
    """Componentwise f_1 × ... × f_n between product models."""

    kind = MorphismKind.PRODUCT_MAP

    def __init__(self, maps: Sequence[Morphism], domain: SemigroupModel, codomain: SemigroupModel,
                 name: Optional[str] = None):
        self.maps = tuple(maps)
        if [m.domain for m in self.maps] != domain.components() or \
                [m.codomain for m in self.maps] != codomain.components():
            raise ModelMismatch("product_map components do not match the product factors")
        self.commutes_with_soft_scaling = all(m.commutes_with_soft_scaling for m in self.maps)
        super().__init__(domain, codomain, name, all(m.declared_cu_morphism for m in self.maps))

    def default_name(self) -> str:
        return "(" + " x ".join(m.name for m in self.maps) + ")"

    def _apply(self, a):
        return Vector(tuple(m.apply(item) for m, item in zip(self.maps, a.items)))

    def _map_chain(self, chain):
        if isinstance(chain, ProductChain):
            return ProductChain(tuple(m.map_chain(part) for m, part in zip(self.maps, chain.parts)))
        return super()._map_chain(chain)

    def witness(self, k, xp, x):
        parts = [m.witness(k, a, b) for m, a, b in zip(self.maps, xp.items, x.items)]
        if any(p is None for p in parts):
            return None
        return Vector(tuple(parts))


class Composed(Morphism):
    """maps[-1] ∘ ... ∘ maps[0]."""

    kind = MorphismKind.COMPOSE

    def __init__(self, maps: Sequence[Morphism], name: Optional[str] = None):
        flat = []
        for m in maps:
            flat.extend(m.maps if isinstance(m, Composed) else [m])
        if not flat:
            raise ValueError("compose needs at least one morphism")
        for first, second in zip(flat, flat[1:]):
            require_composable(first, second)
        self.maps = tuple(flat)
        self.commutes_with_soft_scaling = all(m.commutes_with_soft_scaling for m in flat)
        super().__init__(flat[0].domain, flat[-1].codomain, name,
                         all(m.declared_cu_morphism for m in flat))

    def default_name(self) -> str:
        return " o ".join(m.name for m in reversed(self.maps))

    def _apply(self, a):
        for m in self.maps:
            a = m.apply(a)
        return a

    def defined(self, a):
        for m in self.maps:
            if not m.defined(a):
                return False
            a = m.apply(a)
        return True

    def map_chain(self, chain):
        for m in self.maps:
            chain = m.map_chain(chain)
        return chain


class Glued(Morphism):
    """
    Z → T assembled from the image c1 of Compact(1) and a map on the soft part:
    Compact(n) ↦ n·c1 and Soft(t) ↦ gamma_s(t).
    """

    kind = MorphismKind.GLUED

    def __init__(self, domain: SemigroupModel, compact_image: Element, gamma_s: Morphism,
                 name: Optional[str] = None, declared_cu_morphism: bool = False):
        if domain.kind != ModelKind.Z:
            raise ModelMismatch("glued maps start from Z")
        if gamma_s.domain.kind != ModelKind.HALFLINE:
            raise ModelMismatch("the soft-part map of a glued map starts from HalfLine")
        self.compact_image = gamma_s.codomain.canonical(compact_image)
        self.gamma_s = gamma_s
        super().__init__(domain, gamma_s.codomain, name, declared_cu_morphism)

    def default_name(self) -> str:
        return f"glued({self.codomain.format(self.compact_image)}, {self.gamma_s.name})"

    def gamma_c(self, n: int) -> Element:
        return self.codomain.multiply(n, self.compact_image)

    def _apply(self, a):
        if isinstance(a, Compact):
            return self.gamma_c(int(a.value))
        return self.gamma_s.apply(Real(a.value))

    def _map_chain(self, chain):
        if isinstance(chain, RationalChain):
            if chain.variant == "soft":
                return self.gamma_s.map_chain(RationalChain("real", chain.payload))
            c1 = self.compact_image
            if isinstance(c1, (Compact, Soft, Real)):
                variant = {Compact: "compact", Soft: "soft", Real: "real"}[type(c1)]
                if c1.value is not INF:
                    return RationalChain(variant, chain.payload.scaled(c1.value))
        return super()._map_chain(chain)

    def parameters(self):
        return {"compact_image": self.codomain.format(self.compact_image), "soft": self.gamma_s.name}


class GraphMorphism(Morphism):
    """Map given by an explicit graph; apply() is only defined on the graph's domain."""

    kind = MorphismKind.TABLE_MAP

    def __init__(self, domain: SemigroupModel, codomain: SemigroupModel, graph: Mapping,
                 name: Optional[str] = None, declared_cu_morphism: bool = False):
        self.graph = {domain.canonical(a): codomain.canonical(b) for a, b in graph.items()}
        super().__init__(domain, codomain, name, declared_cu_morphism)

    def default_name(self) -> str:
        return f"graph:{self.domain.name}->{self.codomain.name}"

    def defined(self, a):
        return self.domain.contains(a) and self.domain.canonical(a) in self.graph

    def _apply(self, a):
        if a not in self.graph:
            raise ModelMismatch(f"{self.domain.format(a)} is outside the graph of {self.name}")
        return self.graph[a]

    def with_entry(self, a: Element, b: Element) -> "GraphMorphism":
        """Copy of the graph with the image of a replaced by b."""
        graph = dict(self.graph)
        graph[self.domain.canonical(a)] = self.codomain.canonical(b)
        return GraphMorphism(self.domain, self.codomain, graph, f"{self.name}*")

    @classmethod
    def tabulate(cls, f: Morphism, depth: int, name: Optional[str] = None) -> "GraphMorphism":
        """
        Freeze f on grid(depth), the probed terms of every sample chain and
        the sup of those chains, forgetting every closed form of f.
        """
        S = f.domain
        points = set(S.grid(depth))
        for chain in S.sample_chains(depth):
            points.update(S.canonical(chain.term(d)) for d in probe_indices(default_horizon(depth)))
        for chain in S.sample_chains(depth):
            try:
                points.add(sup_chain(S, chain))
            except UnsupportedChainForm:
                logger.debug(f"no closed-form sup for {chain!r} while tabulating {f.name}")
        graph = {a: f.apply(a) for a in points}
        return cls(S, f.codomain, graph, name or f"graph({f.name})", f.declared_cu_morphism)


def table_map(domain: SemigroupModel, codomain: SemigroupModel, pairs: Iterable[tuple],
              name: Optional[str] = None, declared_cu_morphism: bool = False) -> GraphMorphism:
    """Graph morphism from (domain text, codomain text) pairs."""
    graph = {domain.parse(a): codomain.parse(b) for a, b in pairs}
    return GraphMorphism(domain, codomain, graph, name, declared_cu_morphism)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g ∘ f; ModelMismatch unless f.codomain = g.domain."""
    require_composable(f, g)
    return Composed([f, g])
