"""
Concrete Cu-semigroup models and their decided operations.
"""
from cuf.semigroup.axioms import (
    check_axioms,
    check_semigroup_almost_divisible,
    check_semigroup_almost_unperforated,
    check_strong_divisibility,
    is_strongly_soft,
)
from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.chains import (
    Chain,
    ExplicitChain,
    Mobius,
    ProductChain,
    RationalChain,
    SoftRescaledChain,
    TruncationChain,
    constant_chain,
    sup_chain,
)
from cuf.semigroup.composite import LscPosetModel, ProductModel
from cuf.semigroup.elements import INF, Compact, Element, LscFn, Real, Soft, TableIdx, Vector
from cuf.semigroup.scalar import HalfLineModel, KqModel, NbarModel, ZModel
from cuf.semigroup.table import TableModel, seeded_fault_table, t4_table


def add(S: SemigroupModel, a: Element, b: Element) -> Element:
    return S.add(a, b)


def leq(S: SemigroupModel, a: Element, b: Element) -> bool:
    return S.leq(a, b)


def way_below(S: SemigroupModel, a: Element, b: Element) -> bool:
    return S.way_below(a, b)


def enumerate_grid(S: SemigroupModel, depth: int) -> list:
    return S.grid(depth)


__all__ = [
    "INF", "Compact", "Soft", "Real", "Vector", "LscFn", "TableIdx", "Element",
    "ModelKind", "SemigroupModel",
    "NbarModel", "ZModel", "KqModel", "HalfLineModel", "ProductModel", "LscPosetModel",
    "TableModel", "t4_table", "seeded_fault_table",
    "Chain", "Mobius", "RationalChain", "ExplicitChain", "TruncationChain", "ProductChain",
    "SoftRescaledChain", "constant_chain",
    "add", "leq", "way_below", "sup_chain", "enumerate_grid",
    "check_axioms", "is_strongly_soft",
    "check_semigroup_almost_unperforated", "check_semigroup_almost_divisible",
    "check_strong_divisibility",
]
