"""
Totally described scalar models: N̄, Z = N ⊔ (0,∞], [0,∞] and K_q ⊔ (0,∞].

Mixed order in Z (and K_q ⊔ (0,∞]): Compact(n) ≤ Soft(t) iff n < t and
Soft(t) ≤ Compact(n) iff t ≤ n. Way-below: a ≪ Soft(t) iff a = 0 or the
payload of a is < t; a ≪ Compact(n) iff a ≤ Compact(n).
"""
import math
from fractions import Fraction
from typing import Iterable, Optional

from cuf.semigroup.base import ModelKind, SemigroupModel, fraction_grid
from cuf.semigroup.chains import Mobius, RationalChain, constant_chain
from cuf.semigroup.elements import (
    INF,
    Compact,
    Element,
    Real,
    Soft,
    Value,
    format_value,
    parse_value,
    soft,
    value_sort_key,
)


def _split_tag(text: str) -> tuple:
    text = text.strip()
    if ":" in text:
        tag, _, rest = text.partition(":")
        return tag.strip().lower(), rest.strip()
    return "", text


class NbarModel(SemigroupModel):
    """N̄ = {0, 1, 2, ..., ∞}; every finite element is compact."""

    kind = ModelKind.NBAR

    @property
    def zero(self) -> Element:
        return Compact(0)

    def canonical(self, a: Element) -> Element:
        if isinstance(a, Compact) and (a.value is INF or a.value.denominator == 1):
            return a
        raise self._mismatch(a)

    def _add(self, a, b):
        return Compact(a.value + b.value)

    def _leq(self, a, b):
        return a.value <= b.value

    def _way_below(self, a, b):
        return a.value is not INF and a.value <= b.value

    def _multiply(self, n, a):
        return Compact(n * a.value)

    def infinite_multiple(self, a):
        a = self.canonical(a)
        return a if a.value == 0 else Compact(INF)

    def _grid_elements(self, depth):
        yield from (Compact(n) for n in range(depth + 1))
        yield Compact(INF)

    def sort_key(self, a):
        return value_sort_key(a.value)

    def search_is_exhaustive(self, bound, depth):
        bound = self.canonical(bound)
        return bound.value is not INF and bound.value <= depth

    def approximating_chain(self, a):
        a = self.canonical(a)
        if a.value is INF:
            return RationalChain("compact", Mobius.approaching(INF))
        return constant_chain(a)

    def sample_chains(self, depth):
        return super().sample_chains(depth) + [RationalChain("compact", Mobius(2, 0, 0, 1))]

    def limit_of(self, variant, limit):
        if variant == "compact" and limit is INF:
            return Compact(INF)
        return super().limit_of(variant, limit)

    def exact_divide(self, a, n, depth):
        a = self.canonical(a)
        if a.value is INF:
            return Compact(INF), True
        q = a.value / n
        return (Compact(q) if q.denominator == 1 else None), True

    def strongly_soft_closed_form(self, a):
        a = self.canonical(a)
        return a.value == 0 or a.value is INF

    def parse(self, text):
        tag, body = _split_tag(text)
        if tag not in ("", "compact"):
            raise ValueError(f"Nbar elements are compact, got {text!r}")
        return self.canonical(Compact(parse_value(body)))

    def format(self, a):
        return format_value(self.canonical(a).value)


class _CompactSoftModel(SemigroupModel):
    """Shared arithmetic of Z and K_q ⊔ (0,∞]."""

    def _compact_allowed(self, value: Value) -> bool:
        raise NotImplementedError

    @property
    def zero(self) -> Element:
        return Compact(0)

    def canonical(self, a: Element) -> Element:
        if isinstance(a, Compact):
            if a.value is INF:
                return Soft(INF)
            if self._compact_allowed(a.value):
                return a
        elif isinstance(a, Soft):
            return a
        raise self._mismatch(a)

    def _add(self, a, b):
        if isinstance(a, Compact) and isinstance(b, Compact):
            return Compact(a.value + b.value)
        return soft(a.value + b.value)

    def _leq(self, a, b):
        if a.value == 0:
            return True
        if isinstance(a, Compact) and isinstance(b, Soft):
            return a.value < b.value
        return a.value <= b.value

    def _way_below(self, a, b):
        if a.value == 0:
            return True
        if isinstance(b, Compact):
            return self._leq(a, b)
        return a.value < b.value

    def _multiply(self, n, a):
        if isinstance(a, Compact):
            return Compact(n * a.value)
        return Soft(n * a.value)

    def infinite_multiple(self, a):
        a = self.canonical(a)
        return a if a.value == 0 else Soft(INF)

    def _compact_grid(self, depth) -> Iterable[Fraction]:
        raise NotImplementedError

    def _grid_elements(self, depth):
        yield Compact(0)
        yield from (Compact(v) for v in self._compact_grid(depth))
        yield from (Soft(v) for v in fraction_grid(depth))
        yield Soft(INF)

    def sort_key(self, a):
        return value_sort_key(a.value) + (0 if isinstance(a, Compact) else 1,)

    def approximating_chain(self, a):
        a = self.canonical(a)
        if isinstance(a, Compact):
            return constant_chain(a)
        return RationalChain("soft", Mobius.approaching(a.value))

    def sample_chains(self, depth):
        extra = [
            RationalChain("compact", Mobius(1, 0, 0, 1)),   # d ↦ Compact(d)
            RationalChain("soft", Mobius(1, -1, 1, 0)),     # d ↦ Soft(1 - 1/d)
        ]
        return super().sample_chains(depth) + extra

    def limit_of(self, variant, limit):
        if variant in ("compact", "soft"):
            return soft(limit)
        return super().limit_of(variant, limit)

    def soft_scale(self, a, rate):
        a = self.canonical(a)
        if a.value == 0:
            return Compact(0)
        return soft(a.value * rate)

    def strong_divide(self, a, k):
        return self.soft_scale(a, Fraction(1, k))

    def strongly_soft_closed_form(self, a):
        a = self.canonical(a)
        return isinstance(a, Soft) or a.value == 0

    def parse(self, text):
        tag, body = _split_tag(text)
        value = parse_value(body)
        if tag == "soft" or (tag == "" and value is INF):
            return self.canonical(soft(value))
        if tag in ("", "compact"):
            return self.canonical(Compact(value))
        raise ValueError(f"unknown element tag in {text!r}")

    def format(self, a):
        a = self.canonical(a)
        if a.value is INF:
            return "inf"
        return str(a)


class ZModel(_CompactSoftModel):
    """Z = N ⊔ (0,∞], the Cuntz semigroup of the Jiang-Su algebra."""

    kind = ModelKind.Z

    def _compact_allowed(self, value):
        return value.denominator == 1

    def _compact_grid(self, depth):
        return (Fraction(n) for n in range(1, depth + 1))

    def exact_divide(self, a, n, depth):
        a = self.canonical(a)
        if isinstance(a, Compact):
            q = a.value / n
            return (Compact(q) if q.denominator == 1 else None), True
        return Soft(a.value / n if a.value is not INF else INF), True


class KqModel(_CompactSoftModel):
    """K_q ⊔ (0,∞] for the supernatural number with infinite exponents at primes."""

    kind = ModelKind.KQ

    def __init__(self, primes: Iterable[int], name: Optional[str] = None):
        self.primes = tuple(sorted(set(int(p) for p in primes)))
        if not self.primes:
            raise ValueError("Kq needs a nonempty prime set")
        for p in self.primes:
            if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
                raise ValueError(f"{p} is not prime")
        super().__init__(name)

    def default_name(self) -> str:
        return "Kq(" + ",".join(str(p) for p in self.primes) + ")"

    @property
    def signature(self):
        return (self.kind.value, self.primes)

    def is_smooth(self, n: int) -> bool:
        """Whether every prime factor of n lies in the prime set."""
        for p in self.primes:
            while n % p == 0:
                n //= p
        return n == 1

    def _compact_allowed(self, value):
        return self.is_smooth(value.denominator)

    def _compact_grid(self, depth):
        return (v for v in fraction_grid(depth) if self.is_smooth(v.denominator))

    def exact_divide(self, a, n, depth):
        a = self.canonical(a)
        if isinstance(a, Compact):
            q = a.value / n
            return (Compact(q) if self._compact_allowed(q) else None), True
        return Soft(a.value / n if a.value is not INF else INF), True


class HalfLineModel(SemigroupModel):
    """[0,∞]: s ≪ t iff s < t or s = 0; every element is soft."""

    kind = ModelKind.HALFLINE

    @property
    def zero(self) -> Element:
        return Real(0)

    def canonical(self, a: Element) -> Element:
        if isinstance(a, Real):
            return a
        raise self._mismatch(a)

    def _add(self, a, b):
        return Real(a.value + b.value)

    def _leq(self, a, b):
        return a.value <= b.value

    def _way_below(self, a, b):
        return a.value == 0 or a.value < b.value

    def _multiply(self, n, a):
        return Real(n * a.value)

    def infinite_multiple(self, a):
        a = self.canonical(a)
        return a if a.value == 0 else Real(INF)

    def _grid_elements(self, depth):
        yield Real(0)
        yield from (Real(v) for v in fraction_grid(depth))
        yield Real(INF)

    def sort_key(self, a):
        return value_sort_key(a.value)

    def approximating_chain(self, a):
        a = self.canonical(a)
        if a.value == 0:
            return constant_chain(a)
        return RationalChain("real", Mobius.approaching(a.value))

    def sample_chains(self, depth):
        extra = [RationalChain("real", Mobius(1, 0, 0, 1)), RationalChain("real", Mobius(1, -1, 1, 0))]
        return super().sample_chains(depth) + extra

    def limit_of(self, variant, limit):
        if variant == "real":
            return Real(limit)
        return super().limit_of(variant, limit)

    def soft_scale(self, a, rate):
        a = self.canonical(a)
        return a if a.value == 0 else Real(a.value * rate)

    def strong_divide(self, a, k):
        return self.soft_scale(a, Fraction(1, k))

    def exact_divide(self, a, n, depth):
        a = self.canonical(a)
        return Real(a.value / n if a.value is not INF else INF), True

    def strongly_soft_closed_form(self, a):
        return True

    def parse(self, text):
        tag, body = _split_tag(text)
        if tag not in ("", "soft", "real"):
            raise ValueError(f"HalfLine elements are plain values, got {text!r}")
        return Real(parse_value(body))

    def format(self, a):
        return format_value(self.canonical(a).value)

