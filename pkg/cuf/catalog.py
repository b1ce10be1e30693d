"""
Registry of built-in models, morphism builders and factor pairs.

Scenarios declare models and morphisms by kind name; the builders here turn
a kind plus its text parameters into objects. The named built-ins back the
lemma suite and the default CLI run.
"""
import logging
from typing import Callable, Dict, List, Mapping, Optional

from cuf.factorization.alpha import FactorPair
from cuf.morphisms.base import Morphism, MorphismKind
from cuf.morphisms.catalog import (
    Composed,
    Glued,
    Identity,
    Infinite,
    Injection,
    MultiplyBy,
    NatToSoft,
    Projection,
    ProductMap,
    Sigma,
    SoftEmbedding,
    SoftScale,
    Zero,
    table_map,
)
from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.composite import LscPosetModel, ProductModel
from cuf.semigroup.elements import parse_value
from cuf.semigroup.scalar import HalfLineModel, KqModel, NbarModel, ZModel
from cuf.semigroup.table import TableModel, seeded_fault_table, t4_table

logger = logging.getLogger(__name__)


class CatalogError(ValueError):
    """Raised when a kind is unknown or its parameters do not fit."""
    pass


class UnknownKind(CatalogError):
    pass


MODEL_KIND_NAMES = {kind.value.lower(): kind for kind in ModelKind}
MODEL_KIND_NAMES.update({"lsc": ModelKind.LSC, "half_line": ModelKind.HALFLINE})

TABLE_PRESETS: Dict[str, Callable[[], TableModel]] = {
    "T4": t4_table,
    "Faulty": seeded_fault_table,
}


def split_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def parse_primes(text: str) -> List[int]:
    try:
        return [int(p) for p in split_list(text)]
    except ValueError as exc:
        raise CatalogError(f"primes must be integers, got {text!r}") from exc


def parse_flag(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise CatalogError(f"expected true or false, got {text!r}")


def model_kind(text: str) -> ModelKind:
    key = text.strip().lower()
    if key not in MODEL_KIND_NAMES:
        raise UnknownKind(f"unknown model kind {text!r}")
    return MODEL_KIND_NAMES[key]


def morphism_kind(text: str) -> MorphismKind:
    key = text.strip().lower()
    for kind in MorphismKind:
        if kind.value == key:
            return kind
    raise UnknownKind(f"unknown morphism kind {text!r}")


def _table(params: Mapping[str, str], name: str) -> TableModel:
    if "preset" in params:
        preset = params["preset"]
        if preset not in TABLE_PRESETS:
            raise CatalogError(f"unknown table preset {preset!r}")
        return TABLE_PRESETS[preset]()
    elements = split_list(params.get("elements", ""))
    sums = {}
    for entry in split_list(params.get("sums", "").replace(";", ",")):
        left, _, right = entry.partition("=")
        a, _, b = left.partition("+")
        if not right or not b:
            raise CatalogError(f"table sums look like a+b=c, got {entry!r}")
        sums[(a.strip(), b.strip())] = right.strip()
    relations = []
    for entry in split_list(params.get("relations", "").replace(";", ",")):
        a, _, b = entry.partition("<=")
        if not b:
            raise CatalogError(f"table relations look like a<=b, got {entry!r}")
        relations.append((a.strip(), b.strip()))
    return TableModel(elements, sums, relations, name=name)


def build_model(kind: ModelKind, params: Mapping[str, str], models: Mapping[str, SemigroupModel],
                name: Optional[str] = None) -> SemigroupModel:
    """
    Build a model from its kind and text parameters.

    Args:
        kind: Model kind
        params: kq: primes; product: factors (declared model names);
            lsc: points and relations (a<=b); table: preset or elements,
            sums (a+b=c) and relations
        models: Previously declared models, for product factors
        name: Display name
    Raises:
        CatalogError: if parameters are missing or malformed
    """
    if kind == ModelKind.NBAR:
        return NbarModel(name)
    if kind == ModelKind.Z:
        return ZModel(name)
    if kind == ModelKind.HALFLINE:
        return HalfLineModel(name)
    if kind == ModelKind.KQ:
        return KqModel(parse_primes(params.get("primes", "")), name)
    if kind == ModelKind.PRODUCT:
        factors = split_list(params.get("factors", ""))
        missing = [f for f in factors if f not in models]
        if missing:
            raise CatalogError(f"undeclared product factor {missing[0]!r}")
        return ProductModel([models[f] for f in factors], name)
    if kind == ModelKind.LSC:
        relations = []
        for entry in split_list(params.get("relations", "")):
            a, _, b = entry.partition("<=")
            relations.append((a.strip(), b.strip()))
        return LscPosetModel(split_list(params.get("points", "")), relations, name)
    if kind == ModelKind.TABLE:
        return _table(params, name)
    raise UnknownKind(f"unknown model kind {kind!r}")


def build_morphism(kind: MorphismKind, params: Mapping[str, str], models: Mapping[str, SemigroupModel],
                   morphisms: Mapping[str, Morphism], name: Optional[str] = None) -> Morphism:
    """
    Build a morphism from its kind and text parameters.

    domain/codomain name declared models; compose and product_map list
    declared morphisms in maps; cu overrides the declared Cu-morphism flag.
    """
    def model(key: str, required: bool = True) -> Optional[SemigroupModel]:
        if key not in params:
            if required:
                raise CatalogError(f"{kind.value} needs {key}")
            return None
        if params[key] not in models:
            raise CatalogError(f"undeclared model {params[key]!r}")
        return models[params[key]]

    def maps() -> List[Morphism]:
        names = split_list(params.get("maps", ""))
        missing = [m for m in names if m not in morphisms]
        if missing:
            raise CatalogError(f"undeclared morphism {missing[0]!r}")
        return [morphisms[m] for m in names]

    declared = parse_flag(params["cu"]) if "cu" in params else None

    if kind == MorphismKind.IDENTITY:
        built = Identity(model("domain"), name)
    elif kind == MorphismKind.ZERO:
        built = Zero(model("domain"), model("codomain"), name)
    elif kind == MorphismKind.MULTIPLY_BY:
        built = MultiplyBy(model("domain"), int(params.get("factor", "1")), name)
    elif kind == MorphismKind.INFINITE:
        built = Infinite(model("domain"), name)
    elif kind == MorphismKind.SIGMA:
        built = Sigma(model("domain"), model("codomain", False), name)
    elif kind == MorphismKind.NAT_TO_SOFT:
        built = NatToSoft(model("domain"), model("codomain"), name)
    elif kind == MorphismKind.SCALE:
        built = SoftScale(model("domain"), model("codomain"), parse_value(params.get("rate", "1")), name)
    elif kind == MorphismKind.SOFT_EMBEDDING:
        built = SoftEmbedding(model("domain"), model("codomain"), name)
    elif kind == MorphismKind.PROJECTION:
        built = Projection(model("domain"), int(params.get("index", "0")), name)
    elif kind == MorphismKind.INJECTION:
        built = Injection(model("codomain"), int(params.get("index", "0")), name)
    elif kind == MorphismKind.PRODUCT_MAP:
        built = ProductMap(maps(), model("domain"), model("codomain"), name)
    elif kind == MorphismKind.TABLE_MAP:
        pairs = []
        for entry in split_list(params.get("pairs", "").replace(";", ",")):
            a, _, b = entry.partition("->")
            if not b:
                raise CatalogError(f"table_map pairs look like a->b, got {entry!r}")
            pairs.append((a.strip(), b.strip()))
        built = table_map(model("domain"), model("codomain"), pairs, name)
    elif kind == MorphismKind.GLUED:
        if "soft" not in params or params["soft"] not in morphisms:
            raise CatalogError("glued needs soft, a declared morphism from HalfLine")
        gamma_s = morphisms[params["soft"]]
        image = gamma_s.codomain.parse(params.get("compact-image", ""))
        built = Glued(model("domain"), image, gamma_s, name)
    elif kind == MorphismKind.COMPOSE:
        built = Composed(maps(), name)
    else:
        raise UnknownKind(f"unknown morphism kind {kind!r}")
    if declared is not None:
        built.declared_cu_morphism = declared
    return built


def builtin_models() -> Dict[str, SemigroupModel]:
    """Named built-in models, in a fixed order."""
    Z, N = ZModel(), NbarModel()
    return {
        "Z": Z,
        "Nbar": N,
        "HalfLine": HalfLineModel(),
        "Kq2": KqModel([2]),
        "T4": t4_table(),
        "Faulty": seeded_fault_table(),
        "ZxZ": ProductModel([Z, Z]),
        "NbarxNbar": ProductModel([N, N]),
        "Lsc2": LscPosetModel(["a", "b"], [("a", "b")]),
    }


def builtin_pairs(models: Optional[Mapping[str, SemigroupModel]] = None) -> Dict[str, FactorPair]:
    """Factor pairs expected to validate and to give a generalized Cu-bimorphism."""
    m = models or builtin_models()
    Z, N, H, K, ZZ = m["Z"], m["Nbar"], m["HalfLine"], m["Kq2"], m["ZxZ"]
    id_z = Identity(Z)
    pairs = [
        FactorPair(id_z, id_z),
        FactorPair(NatToSoft(N, Z), id_z),
        FactorPair(Sigma(Z), id_z),
        FactorPair(id_z, Sigma(Z)),
        FactorPair(id_z, MultiplyBy(Z, 2)),
        FactorPair(Identity(H), Identity(H)),
        FactorPair(SoftEmbedding(H, Z), id_z),
        FactorPair(Identity(K), Identity(K)),
        FactorPair(Identity(ZZ), Identity(ZZ)),
        FactorPair(ProductMap([id_z, Sigma(Z)], ZZ, ZZ), Identity(ZZ)),
    ]
    return {p.name: p for p in pairs}


def negative_pairs(models: Optional[Mapping[str, SemigroupModel]] = None) -> Dict[str, FactorPair]:
    """Factor pairs whose role check is expected to fail."""
    m = models or builtin_models()
    pairs = [
        FactorPair(Identity(m["Nbar"]), Identity(m["Nbar"])),
        FactorPair(Identity(m["T4"]), Identity(m["T4"])),
    ]
    return {p.name: p for p in pairs}
