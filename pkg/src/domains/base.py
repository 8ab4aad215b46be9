import logging
from collections.abc import Callable, Iterator
from enum import Enum
from functools import cached_property
from itertools import islice
from typing import TYPE_CHECKING, Any

import numpy as np

from src.cnf.search import NonStrictDomainError
from src.domains.signals import Element, StreamSignal
from src.values.uset import Uset

if TYPE_CHECKING:
    from src.pipeline.pipeline import Pipeline

logger = logging.getLogger(__name__)

DEFAULT_REJECTION_BUDGET = 10_000
_REPR_ITEMS = 5
_REPR_WIDTH = 45


class DomainError(Exception):
    pass


class UnsupportedSlicingError(DomainError):
    pass


class SamplingError(DomainError):
    pass


class ElementError(DomainError):
    pass


class Slicing(Enum):
    FULL = "full"
    FILTERED = "filtered"
    NONE = "none"


def weakest(capabilities: list[Slicing]) -> Slicing:
    if Slicing.NONE in capabilities:
        return Slicing.NONE
    if Slicing.FILTERED in capabilities:
        return Slicing.FILTERED
    return Slicing.FULL


class Domain:
    """Immutable description of a collection of elements.

    Subclasses provide ``_iter``, ``_sample`` and, depending on their slicing capability,
    ``_iter_from`` (full slicing) or ``_skips`` (filtered slicing). Strict subclasses also
    provide ``iter_canonical``.
    """

    name: str = "Domain"
    strict: bool = False
    slicing: Slicing = Slicing.NONE
    exact_size: bool = True

    # --- sizes -------------------------------------------------------------

    @property
    def size(self) -> int | None:
        """Number of elements, or None when a filter makes it unknown."""
        raise NotImplementedError

    @property
    def span(self) -> int:
        """Length of the unfiltered index space that slicing addresses."""
        size = self.size
        if size is None:
            raise UnsupportedSlicingError(f"{self.name} has no slicing span")
        return size

    # --- iteration ---------------------------------------------------------

    def __iter__(self) -> Iterator[Any]:
        return self._iter()

    def _iter(self) -> Iterator[Any]:
        raise NotImplementedError

    def _iter_from(self, offset: int) -> Iterator[Any]:
        return islice(self._iter(), offset, None)

    def _skips(self, offset: int, count: int) -> Iterator[StreamSignal]:
        return (Element(x) for x in islice(self._iter_from(offset), count))

    def _check_window(self, offset: int, count: int) -> None:
        if offset < 0 or count < 0 or offset + count > self.span:
            raise DomainError(f"Slice [{offset}, {offset + count}) outside span {self.span} of {self.name}")

    def iterate_from(self, offset: int, count: int) -> Iterator[Any]:
        """Elements at positions [offset, offset + count) of the iteration order.

        Filtered domains yield StreamSignals instead, covering the same unfiltered span.
        """
        if self.slicing is Slicing.NONE:
            raise UnsupportedSlicingError(f"{self.name} does not support slicing")
        self._check_window(offset, count)
        if self.slicing is Slicing.FILTERED:
            return self._skips(offset, count)
        return islice(self._iter_from(offset), count)

    def iterate_skips(self, offset: int, count: int) -> Iterator[StreamSignal]:
        """Skip-iterator over [offset, offset + count) of the unfiltered span."""
        if self.slicing is Slicing.NONE:
            raise UnsupportedSlicingError(f"{self.name} does not support slicing")
        self._check_window(offset, count)
        return self._skips(offset, count)

    # --- sampling ----------------------------------------------------------

    def sample(self, rng: np.random.Generator) -> Any:
        return self._sample(rng)

    def _sample(self, rng: np.random.Generator) -> Any:
        raise NotImplementedError

    # --- structure ---------------------------------------------------------

    def children(self) -> tuple["Domain", ...]:
        return ()

    def usets(self) -> frozenset[Uset]:
        return frozenset().union(*(c.usets() for c in self.children()))

    def non_strict_part(self) -> "Domain | None":
        """The innermost construction that makes this domain non-strict."""
        if self.strict:
            return None
        for child in self.children():
            part = child.non_strict_part()
            if part is not None:
                return part
        return self

    def __contains__(self, item: object) -> bool:
        raise NotImplementedError(f"{self.name} does not support membership tests")

    # --- canonical forms ---------------------------------------------------

    def iter_canonical(self) -> Iterator[Any]:
        raise NonStrictDomainError(f"{self.name} does not enumerate canonical forms")

    @cached_property
    def _canonical_forms(self) -> tuple[Any, ...]:
        from src.cnf.search import cnfs

        return tuple(cnfs(self))

    def canonical_forms(self) -> tuple[Any, ...]:
        return self._canonical_forms

    # --- composition -------------------------------------------------------

    def __mul__(self, other: "Domain") -> "Domain":
        from src.domains.compositions import Product

        return Product((self, other))

    def __add__(self, other: "Domain") -> "Domain":
        from src.domains.compositions import Join

        return Join((self, other))

    def map(self, fn: Callable[[Any], Any]) -> "Domain":
        from src.domains.transformations import MapTransformation

        return MapTransformation(self, fn)

    def filter(
        self,
        fn: Callable[[Any], bool],
        strict: bool = False,
        rejection_budget: int = DEFAULT_REJECTION_BUDGET,
    ) -> "Domain":
        from src.domains.transformations import FilterTransformation

        return FilterTransformation(self, fn, strict=strict, rejection_budget=rejection_budget)

    # --- pipeline sugar ----------------------------------------------------

    def _pipeline(self) -> "Pipeline":
        from src.pipeline.pipeline import Pipeline

        return Pipeline(self)

    def iterate(self) -> "Pipeline":
        return self._pipeline()

    def generate(self, count: int, seed: int | None = None) -> "Pipeline":
        return self._pipeline().generate(count, seed=seed)

    def cnfs(self) -> "Pipeline":
        return self._pipeline().cnfs()

    def take(self, count: int) -> "Pipeline":
        return self._pipeline().take(count)

    def collect(self) -> "Pipeline":
        return self._pipeline().collect()

    def reduce(self, fn: Callable[[Any, Any], Any], *init: Any) -> "Pipeline":
        return self._pipeline().reduce(fn, *init)

    def max(self, key: Callable[[Any], Any] | None = None, size: int | None = None) -> "Pipeline":
        return self._pipeline().max(key, size)

    def count(self) -> "Pipeline":
        return self._pipeline().count()

    def first(self) -> "Pipeline":
        return self._pipeline().first()

    def run(self, ctx: Any = None) -> Any:
        return self._pipeline().run(ctx)

    # --- description -------------------------------------------------------

    def to_spec(self) -> dict[str, Any]:
        """Declarative description; see src.domains.declarative."""
        raise DomainError(f"{self.name} cannot be described declaratively")

    def __repr__(self) -> str:
        size = self.size
        parts: list[str] = []
        more = False
        for item in islice(self._iter(), _REPR_ITEMS + 1):
            text = repr(item)
            if len(parts) == _REPR_ITEMS or (parts and len(", ".join(parts + [text])) > _REPR_WIDTH):
                more = True
                break
            parts.append(text)
        body = ", ".join(parts) + (", ..." if more else "")
        label = f"size={size}" if size is not None else f"span={self.span}"
        return f"<{self.name} {label} {{{body}}}>"
