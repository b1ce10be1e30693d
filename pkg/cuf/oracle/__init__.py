"""
Brute-force references for the closed forms, and the lemma suite.

The suite is imported from cuf.oracle.suite; it depends on the
factorization package, which itself relies on the brute morphism check.
"""
from cuf.oracle.brute import (
    ORDER_MODES,
    brute_morphism_check,
    brute_order_oracle,
    check_order_agreement,
    order_disagreements,
)

__all__ = [
    "ORDER_MODES", "brute_order_oracle", "order_disagreements", "check_order_agreement",
    "brute_morphism_check",
]
