"""
Morphism catalog and morphism-level property checkers.
"""
from cuf.morphisms.base import Morphism, MorphismKind
from cuf.morphisms.catalog import (
    Composed,
    GraphMorphism,
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
    compose,
    table_map,
)
from cuf.morphisms.checks import (
    apply,
    check_almost_divisible,
    check_almost_unperforated,
    check_cu_morphism,
    check_generalized_cu_morphism,
    check_pure,
    check_q_rational,
    check_soft_morphism,
    check_w_multiplication,
    divisibility_witness,
)

__all__ = [
    "Morphism", "MorphismKind",
    "Identity", "Zero", "MultiplyBy", "Infinite", "SoftScale", "Sigma", "NatToSoft",
    "SoftEmbedding", "Projection", "Injection", "ProductMap", "Composed", "Glued",
    "GraphMorphism", "table_map", "compose",
    "apply", "check_generalized_cu_morphism", "check_cu_morphism",
    "check_almost_unperforated", "check_almost_divisible", "check_pure",
    "check_q_rational", "check_soft_morphism", "check_w_multiplication",
    "divisibility_witness",
]
