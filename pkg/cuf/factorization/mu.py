"""
Witness sets μ((k,n), x′, x) = {y : n·y ≤ k·x and k·x′ ≤ (n+1)·y}.
"""
from dataclasses import dataclass

from cuf.base import PreconditionViolated
from cuf.semigroup.base import SemigroupModel
from cuf.semigroup.elements import Element


@dataclass(frozen=True)
class MuSpec:
    """Parameters (k, n, x′, x) of a μ-set in a fixed model."""
    k: int
    n: int
    x_prime: Element
    x: Element

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise PreconditionViolated("k and n must be at least 1")

    def validate_in(self, S: SemigroupModel) -> "MuSpec":
        """Canonical copy in S; PreconditionViolated unless x′ ≤ x."""
        xp, x = S.canonical(self.x_prime), S.canonical(self.x)
        if not S.leq(xp, x):
            raise PreconditionViolated(f"{S.format(xp)} is not below {S.format(x)}")
        return MuSpec(self.k, self.n, xp, x)


def mu_contains(S: SemigroupModel, spec: MuSpec, y: Element) -> bool:
    """n·y ≤ k·x and k·x′ ≤ (n+1)·y, decided exactly."""
    spec = spec.validate_in(S)
    y = S.canonical(y)
    return (
        S.leq(S.multiply(spec.n, y), S.multiply(spec.k, spec.x))
        and S.leq(S.multiply(spec.k, spec.x_prime), S.multiply(spec.n + 1, y))
    )


def mu_sample(S: SemigroupModel, spec: MuSpec, depth: int) -> list:
    """Grid elements in μ, in canonical order."""
    spec = spec.validate_in(S)
    upper = S.multiply(spec.k, spec.x)
    lower = S.multiply(spec.k, spec.x_prime)
    return [
        y for y in S.grid(depth)
        if S._leq(S.multiply(spec.n, y), upper) and S._leq(lower, S.multiply(spec.n + 1, y))
    ]
