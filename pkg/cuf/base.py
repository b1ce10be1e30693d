"""
Base types for the cu-factor framework.

Contains the report models returned by every checker, the exception
hierarchy and the sweep helper used to spread grid instances over workers.
"""
import time
import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Any, Callable, Iterable, Optional, TypeVar

from pydantic import BaseModel

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class CheckStatus(str, Enum):
    """Outcome of a bounded check."""
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class CheckReport(BaseModel):
    """Outcome of one predicate, lemma instance or command."""
    check: str                                    # e.g. "check_almost_divisible"
    status: CheckStatus
    counterexample: Optional[dict[str, str]] = None  # role -> element text
    depth: Optional[int] = None
    bounds: dict[str, int] = {}
    exact: bool = False                           # exhaustive vs bounded
    elapsed_ms: float = 0.0
    instances: int = 0
    message: str = ""
    witnesses: list[dict[str, str]] = []
    expected: CheckStatus = CheckStatus.PASS      # FAIL marks a negative control
    value: Optional[str] = None                   # result of compute-* commands
    details: list["CheckReport"] = []
    metadata: dict = {}

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    @property
    def unexpected(self) -> bool:
        """True when the outcome contradicts the declared expectation."""
        if self.metadata.get("error"):
            return True
        if self.expected == CheckStatus.FAIL:
            return self.status != CheckStatus.FAIL
        return self.status == CheckStatus.FAIL


class CuError(Exception):
    """Root of the cu-factor exception hierarchy."""
    pass


class ModelMismatch(CuError):
    """Raised when an element does not belong to the model it is used with."""
    pass


class NotMonotone(CuError):
    """Raised when a chain fails monotonicity at the checked depth."""
    pass


class UnsupportedChainForm(CuError):
    """Raised when no closed form is available for a chain or chain image."""
    pass


class NoWitnessFound(CuError):
    """Raised when a bounded witness search is exhausted."""
    pass


class PreconditionViolated(CuError):
    """Raised when a lemma hypothesis does not hold for the given data."""
    pass


class NotADivisor(CuError):
    """Raised when n has a prime factor outside the supernatural prime set."""
    pass


class SoftnessViolated(CuError):
    """Raised when the soft identity at t = 1 fails."""
    pass


class UniquenessViolated(CuError):
    """Raised when omega_n finds two distinct images."""
    pass


class InvariantViolated(CuError):
    """Raised when a constructed witness chain breaks one of its invariants."""
    pass


class Stopwatch:
    """Context manager measuring wall-clock milliseconds."""

    def __enter__(self) -> "Stopwatch":
        self._start = time.perf_counter()
        self.elapsed_ms = 0.0
        return self

    def __exit__(self, *exc) -> None:
        self.elapsed_ms = round((time.perf_counter() - self._start) * 1000.0, 3)


def sweep(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """
    Map fn over items, optionally on a thread pool.

    Results keep the input order so reports assembled from them are
    deterministic regardless of the worker count.

    Args:
        fn: Function applied to every item
        items: Instances to process
        jobs: Maximum number of workers; 1 runs inline
    Returns:
        list of results in input order
    """
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def first_failure(results: Iterable[Optional[Any]]) -> Optional[Any]:
    """Return the first non-None entry of results, or None."""
    for item in results:
        if item is not None:
            return item
    return None


CheckReport.model_rebuild()
