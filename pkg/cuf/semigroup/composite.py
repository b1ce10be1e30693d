"""
Composite models: finite products and lower-semicontinuous functions on a
finite poset.

Both grids are a coarse lattice, every coordinate at component_depth(depth),
together with the elements supported on a single coordinate (or, for lsc
functions, taking a single finite level) at the full depth.
"""
import itertools
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.chains import ProductChain, TruncationChain
from cuf.semigroup.elements import INF, Element, LscFn, Vector, format_value, parse_value, value_sort_key


def component_depth(depth: int) -> int:
    """Depth of the coarse lattice in composite grids (monotone in depth)."""
    return max(1, (depth + 3) // 4)


def split_top_level(body: str) -> list:
    """Split a comma separated list, ignoring commas nested in brackets."""
    parts, level, current = [], 0, []
    for ch in body:
        if ch in "[(":
            level += 1
        elif ch in "])":
            level -= 1
        if ch == "," and level == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        parts.append(tail)
    return parts


class ProductModel(SemigroupModel):
    """Finite product; every relation and operation is componentwise."""

    kind = ModelKind.PRODUCT

    def __init__(self, factors: Sequence[SemigroupModel], name: Optional[str] = None):
        if not factors:
            raise ValueError("a product needs at least one factor")
        self.factors = tuple(factors)
        super().__init__(name)

    def default_name(self) -> str:
        return "x".join(f.name for f in self.factors)

    @property
    def signature(self):
        return (self.kind.value, tuple(f.signature for f in self.factors))

    def components(self) -> list:
        return list(self.factors)

    @property
    def zero(self) -> Element:
        return Vector(tuple(f.zero for f in self.factors))

    def canonical(self, a):
        if not isinstance(a, Vector) or len(a.items) != len(self.factors):
            raise self._mismatch(a)
        return Vector(tuple(f.canonical(x) for f, x in zip(self.factors, a.items)))

    def _add(self, a, b):
        return Vector(tuple(f._add(x, y) for f, x, y in zip(self.factors, a.items, b.items)))

    def _leq(self, a, b):
        return all(f._leq(x, y) for f, x, y in zip(self.factors, a.items, b.items))

    def _way_below(self, a, b):
        return all(f._way_below(x, y) for f, x, y in zip(self.factors, a.items, b.items))

    def _multiply(self, n, a):
        return Vector(tuple(f._multiply(n, x) for f, x in zip(self.factors, a.items)))

    def infinite_multiple(self, a):
        a = self.canonical(a)
        return Vector(tuple(f.infinite_multiple(x) for f, x in zip(self.factors, a.items)))

    def _grid_elements(self, depth):
        coarse = [f.grid(component_depth(depth)) for f in self.factors]
        yield from (Vector(items) for items in itertools.product(*coarse))
        zeros = [f.zero for f in self.factors]
        for i, f in enumerate(self.factors):
            for a in f.grid(depth):
                yield Vector(tuple(zeros[:i] + [a] + zeros[i + 1:]))

    def sort_key(self, a):
        return tuple(f.sort_key(x) for f, x in zip(self.factors, a.items))

    def search_is_exhaustive(self, bound, depth):
        bound = self.canonical(bound)
        cd = component_depth(depth)
        if all(f.search_is_exhaustive(x, cd) for f, x in zip(self.factors, bound.items)):
            return True
        support = [(f, x) for f, x in zip(self.factors, bound.items) if x != f.zero]
        return len(support) == 1 and support[0][0].search_is_exhaustive(support[0][1], depth)

    def approximating_chain(self, a):
        a = self.canonical(a)
        return ProductChain(tuple(f.approximating_chain(x) for f, x in zip(self.factors, a.items)))

    def soft_scale(self, a, rate):
        a = self.canonical(a)
        return Vector(tuple(f.soft_scale(x, rate) for f, x in zip(self.factors, a.items)))

    def strong_divide(self, a, k):
        a = self.canonical(a)
        parts = [f.strong_divide(x, k) for f, x in zip(self.factors, a.items)]
        if any(p is None for p in parts):
            return None
        return Vector(tuple(parts))

    def exact_divide(self, a, n, depth):
        a = self.canonical(a)
        parts = []
        for f, x in zip(self.factors, a.items):
            y, certain = f.exact_divide(x, n, component_depth(depth))
            if y is None:
                return None, certain
            parts.append(y)
        return Vector(tuple(parts)), True

    def strongly_soft_closed_form(self, a):
        a = self.canonical(a)
        verdicts = [f.strongly_soft_closed_form(x) for f, x in zip(self.factors, a.items)]
        if any(v is None for v in verdicts):
            return None
        return all(verdicts)

    def parse(self, text):
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"product elements are bracketed, got {text!r}")
        parts = split_top_level(text[1:-1])
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components in {text!r}")
        return Vector(tuple(f.parse(p) for f, p in zip(self.factors, parts)))

    def format(self, a):
        a = self.canonical(a)
        return "[" + ", ".join(f.format(x) for f, x in zip(self.factors, a.items)) + "]"


class LscPosetModel(SemigroupModel):
    """
    Lsc(P, N̄) for a finite poset P with its Alexandrov topology.

    Elements are order-preserving maps P → N ∪ {∞}; sums and order are
    pointwise, and f ≪ g iff f ≤ g with f finite at every point.
    """

    kind = ModelKind.LSC

    def __init__(self, points: Sequence[str], relations: Iterable[tuple] = (), name: Optional[str] = None):
        self.points = tuple(points)
        if not self.points or len(set(self.points)) != len(self.points):
            raise ValueError("poset points must be nonempty and distinct")
        index = {p: i for i, p in enumerate(self.points)}
        below = {(i, i) for i in range(len(self.points))}
        for lo, hi in relations:
            if lo not in index or hi not in index:
                raise ValueError(f"relation {lo} <= {hi} mentions an unknown point")
            below.add((index[lo], index[hi]))
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(below), repeat=2):
                if b == c and (a, d) not in below:
                    below.add((a, d))
                    changed = True
        for a, b in below:
            if a != b and (b, a) in below:
                raise ValueError("poset relation has a cycle")
        self.order = frozenset(below)
        super().__init__(name)

    def default_name(self) -> str:
        return "Lsc(" + ",".join(self.points) + ")"

    @property
    def signature(self):
        return (self.kind.value, self.points, tuple(sorted(self.order)))

    @property
    def zero(self) -> Element:
        return LscFn(tuple(Fraction(0) for _ in self.points))

    def is_monotone(self, values: Sequence) -> bool:
        return all(values[a] <= values[b] for a, b in self.order)

    def canonical(self, a):
        if not isinstance(a, LscFn) or len(a.values) != len(self.points):
            raise self._mismatch(a)
        if not self.is_monotone(a.values):
            raise self._mismatch(a)
        return a

    def _add(self, a, b):
        return LscFn(tuple(x + y for x, y in zip(a.values, b.values)))

    def _leq(self, a, b):
        return all(x <= y for x, y in zip(a.values, b.values))

    def _way_below(self, a, b):
        return all(x is not INF and x <= y for x, y in zip(a.values, b.values))

    def _multiply(self, n, a):
        return LscFn(tuple(n * x for x in a.values))

    def infinite_multiple(self, a):
        a = self.canonical(a)
        return LscFn(tuple(x if x == 0 else INF for x in a.values))

    def _grid_elements(self, depth):
        levels = [Fraction(n) for n in range(component_depth(depth) + 1)] + [INF]
        for values in itertools.product(levels, repeat=len(self.points)):
            if self.is_monotone(values):
                yield LscFn(values)
        for n in range(1, depth + 1):
            for values in itertools.product((Fraction(0), Fraction(n), INF), repeat=len(self.points)):
                if self.is_monotone(values):
                    yield LscFn(values)

    def sort_key(self, a):
        return tuple(value_sort_key(v) for v in a.values)

    def search_is_exhaustive(self, bound, depth):
        bound = self.canonical(bound)
        cd = component_depth(depth)
        return all(v is INF or v <= cd for v in bound.values)

    def approximating_chain(self, a):
        return TruncationChain(self.canonical(a))

    def sample_chains(self, depth):
        top = LscFn(tuple(INF for _ in self.points))
        return super().sample_chains(depth) + [TruncationChain(top, 2)]

    def exact_divide(self, a, n, depth):
        a = self.canonical(a)
        values = []
        for v in a.values:
            if v is INF:
                values.append(INF)
                continue
            q = v / n
            if q.denominator != 1:
                return None, True
            values.append(q)
        return LscFn(tuple(values)), True

    def strongly_soft_closed_form(self, a):
        a = self.canonical(a)
        return all(v == 0 or v is INF for v in a.values)

    def parse(self, text):
        text = text.strip()
        if not (text.startswith("lsc(") and text.endswith(")")):
            raise ValueError(f"lsc elements look like lsc(1,2,inf), got {text!r}")
        values = tuple(parse_value(p) for p in split_top_level(text[4:-1]))
        return self.canonical(LscFn(values))

    def format(self, a):
        a = self.canonical(a)
        return "lsc(" + ",".join(format_value(v) for v in a.values) + ")"

