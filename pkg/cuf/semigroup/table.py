"""
Finite table models given by Cayley data.

A table lists its carrier, an addition table and generating order
relations; the order is closed reflexively and transitively. On a finite
carrier every increasing sequence is eventually constant, so every element
is compact and ≪ coincides with ≤.
"""
import itertools
from typing import Iterable, Mapping, Optional, Sequence

from cuf.semigroup.base import ModelKind, SemigroupModel
from cuf.semigroup.elements import Element, TableIdx


class TableModel(SemigroupModel):
    """Finite positively ordered monoid; index 0 is the zero."""

    kind = ModelKind.TABLE

    def __init__(
        self,
        elements: Sequence[str],
        sums: Mapping[tuple, str],
        relations: Iterable[tuple] = (),
        name: Optional[str] = None,
    ):
        """
        Args:
            elements: Carrier names, the first one is the zero
            sums: (a, b) -> a + b by name; 0 + a and symmetric entries are implied
            relations: generating pairs (a, b) meaning a ≤ b
            name: Model name
        """
        self.names = tuple(elements)
        if not self.names or len(set(self.names)) != len(self.names):
            raise ValueError("table carrier must be nonempty with distinct names")
        self.index = {n: i for i, n in enumerate(self.names)}
        size = len(self.names)

        table = {}
        for (a, b), c in sums.items():
            i, j, k = self._lookup(a), self._lookup(b), self._lookup(c)
            table[(i, j)] = k
            table.setdefault((j, i), k)
        for i in range(size):
            table.setdefault((0, i), i)
            table.setdefault((i, 0), i)
        missing = [(self.names[i], self.names[j]) for i, j in itertools.product(range(size), repeat=2)
                   if (i, j) not in table]
        if missing:
            raise ValueError(f"addition table is missing {missing[0][0]} + {missing[0][1]}")
        self.table = table

        self.relations = frozenset((self._lookup(a), self._lookup(b)) for a, b in relations)
        below = {(i, i) for i in range(size)}
        below.update((0, i) for i in range(size))
        below.update(self.relations)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(below), repeat=2):
                if b == c and (a, d) not in below:
                    below.add((a, d))
                    changed = True
        self.below = frozenset(below)
        super().__init__(name)

    def _lookup(self, name: str) -> int:
        if name not in self.index:
            raise ValueError(f"{name!r} is not in the table carrier")
        return self.index[name]

    def default_name(self) -> str:
        return "Table(" + ",".join(self.names) + ")"

    @property
    def signature(self):
        return (self.kind.value, self.names, tuple(sorted(self.table.items())), tuple(sorted(self.below)))

    @property
    def zero(self) -> Element:
        return TableIdx(0)

    @property
    def carrier(self) -> list:
        return [TableIdx(i) for i in range(len(self.names))]

    def canonical(self, a):
        if isinstance(a, TableIdx) and 0 <= a.index < len(self.names):
            return a
        raise self._mismatch(a)

    def _add(self, a, b):
        return TableIdx(self.table[(a.index, b.index)])

    def _leq(self, a, b):
        return (a.index, b.index) in self.below

    def _way_below(self, a, b):
        return self._leq(a, b)

    def infinite_multiple(self, a):
        a = self.canonical(a)
        current = a
        for _ in range(len(self.names) + 1):
            following = self._add(current, a)
            if following == current:
                return current
            current = following
        return current

    def _grid_elements(self, depth):
        return self.carrier

    def sort_key(self, a):
        return (a.index,)

    def search_is_exhaustive(self, bound, depth):
        return True

    def parse(self, text):
        text = text.strip()
        if text in self.index:
            return TableIdx(self.index[text])
        if text.startswith("#") and text[1:].isdigit():
            return self.canonical(TableIdx(int(text[1:])))
        raise ValueError(f"{text!r} is not in the table carrier")

    def format(self, a):
        return self.names[self.canonical(a).index]


def t4_table() -> TableModel:
    """{0, x, y, top}: x+x = y+y = x+y = top, top absorbing, x and y incomparable."""
    sums = {
        ("x", "x"): "top", ("y", "y"): "top", ("x", "y"): "top",
        ("x", "top"): "top", ("y", "top"): "top", ("top", "top"): "top",
    }
    relations = [("x", "top"), ("y", "top")]
    return TableModel(["0", "x", "y", "top"], sums, relations, name="T4")


def seeded_fault_table() -> TableModel:
    """Chain 0 ≤ a ≤ b with a + a = b but a + b = a, so addition is not monotone."""
    sums = {("a", "a"): "b", ("a", "b"): "a", ("b", "b"): "b"}
    return TableModel(["0", "a", "b"], sums, [("a", "b")], name="Faulty")
