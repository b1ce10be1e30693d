"""
Element representations for the concrete Cu-semigroup models.

Every payload is an exact Fraction or the distinguished value INF; floats
are rejected. Elements are frozen dataclasses so they hash and compare
structurally and can be shared freely between threads.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class _Infinity:
    """The value ∞: absorbing for +, larger than every rational, 0·∞ = 0."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("cuf-infinity")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other is self:
            return self
        if other == 0:
            return Fraction(0)
        if other < 0:
            raise ValueError("negative multiple of inf")
        return self

    __rmul__ = __mul__


INF = _Infinity()

Value = Union[Fraction, _Infinity]


def as_value(raw) -> Value:
    """Coerce an int, Fraction, 'p/q' string or INF into a payload value."""
    if raw is INF:
        return INF
    if isinstance(raw, bool):
        raise TypeError("booleans are not payloads")
    if isinstance(raw, float):
        raise TypeError("floating point payloads are not allowed")
    if isinstance(raw, (int, Fraction)):
        return Fraction(raw)
    if isinstance(raw, str):
        return parse_value(raw)
    raise TypeError(f"cannot use {raw!r} as a payload")


def parse_value(text: str) -> Value:
    """Parse 'inf', 'p' or 'p/q' into a value."""
    text = text.strip()
    if text in ("inf", "∞"):
        return INF
    if not text or any(c in text for c in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {text!r}") from None


def format_value(value: Value) -> str:
    if value is INF:
        return "inf"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_finite(value: Value) -> bool:
    return value is not INF


def ceil_value(value: Value) -> Value:
    """⌈value⌉ with ⌈∞⌉ = ∞."""
    if value is INF:
        return INF
    return Fraction(math.ceil(value))


def value_sort_key(value: Value) -> tuple:
    """Canonical order: ascending denominator, then numerator, ∞ last."""
    if value is INF:
        return (1, 0, 0)
    return (0, value.denominator, value.numerator)


@dataclass(frozen=True)
class Compact:
    """Compact element: natural (Nbar, Z) or K_q rational; INF only in Nbar."""
    value: Value

    def __post_init__(self):
        value = as_value(self.value)
        if value is not INF and value < 0:
            raise ValueError("compact payload must be nonnegative")
        object.__setattr__(self, "value", value)

    def __str__(self) -> str:
        return f"compact:{format_value(self.value)}"


@dataclass(frozen=True)
class Soft:
    """Soft element of Z or K_q ⊔ (0,∞]; payload positive or INF."""
    value: Value

    def __post_init__(self):
        value = as_value(self.value)
        if value is not INF and value <= 0:
            raise ValueError("soft payload must be positive; zero is compact")
        object.__setattr__(self, "value", value)

    def __str__(self) -> str:
        return f"soft:{format_value(self.value)}"


@dataclass(frozen=True)
class Real:
    """Point of the half line [0,∞]."""
    value: Value

    def __post_init__(self):
        value = as_value(self.value)
        if value is not INF and value < 0:
            raise ValueError("half-line payload must be nonnegative")
        object.__setattr__(self, "value", value)

    def __str__(self) -> str:
        return format_value(self.value)


@dataclass(frozen=True)
class Vector:
    """Element of a finite product model."""
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def __str__(self) -> str:
        return "[" + ", ".join(str(item) for item in self.items) + "]"


@dataclass(frozen=True)
class LscFn:
    """Monotone map from the points of a finite poset into N ∪ {∞}."""
    values: tuple

    def __post_init__(self):
        values = tuple(as_value(v) for v in self.values)
        for v in values:
            if v is not INF and (v < 0 or v.denominator != 1):
                raise ValueError("lsc values must be naturals or inf")
        object.__setattr__(self, "values", values)

    def __str__(self) -> str:
        return "lsc(" + ",".join(format_value(v) for v in self.values) + ")"


@dataclass(frozen=True)
class TableIdx:
    """Index into the carrier of a finite table model."""
    index: int

    def __str__(self) -> str:
        return f"#{self.index}"


Element = Union[Compact, Soft, Real, Vector, LscFn, TableIdx]

SCALAR_TYPES = (Compact, Soft, Real)


def soft(value) -> Union[Compact, Soft]:
    """Soft element with payload value, canonicalizing 0 to Compact(0)."""
    value = as_value(value)
    if value == 0:
        return Compact(0)
    return Soft(value)


def make_scalar(variant: str, value) -> Element:
    """Build a scalar element from a variant tag: compact, soft or real."""
    if variant == "compact":
        return Compact(value)
    if variant == "soft":
        return soft(value)
    if variant == "real":
        return Real(value)
    raise ValueError(f"unknown scalar variant: {variant}")


def payload(a: Element) -> Value:
    """Numeric payload of a scalar element."""
    if isinstance(a, SCALAR_TYPES):
        return a.value
    raise TypeError(f"{a!r} has no scalar payload")


def soft_scale_element(a: Element, rate) -> Element:
    """
    Soft part of a scaled by rate: σ(a)·rate.

    Compact and soft scalars land in the soft part, half-line points stay on
    the half line and vectors scale componentwise.
    """
    rate = as_value(rate)
    if isinstance(a, (Compact, Soft)):
        return soft(a.value * rate if a.value != 0 else Fraction(0))
    if isinstance(a, Real):
        return Real(a.value * rate if a.value != 0 else Fraction(0))
    if isinstance(a, Vector):
        return Vector(tuple(soft_scale_element(item, rate) for item in a.items))
    raise TypeError(f"{a!r} has no soft part")
