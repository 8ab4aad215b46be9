import logging
from collections.abc import Callable, Iterator
from typing import Any

import numpy as np

from src.cnf.search import cnfs
from src.domains.base import (
    DEFAULT_REJECTION_BUDGET,
    Domain,
    DomainError,
    ElementError,
    SamplingError,
    Slicing,
)
from src.domains.predicates import PREDICATES
from src.domains.signals import Element, Skipped, StreamSignal, coalesce

logger = logging.getLogger(__name__)


def _label(fn: Callable[..., Any]) -> str:
    return getattr(fn, "__qualname__", None) or repr(fn)


class MapTransformation(Domain):
    """Applies `fn` to every element. The result is never strict."""

    name = "MapTransformation"

    def __init__(self, parent: Domain, fn: Callable[[Any], Any]) -> None:
        self._parent = parent
        self._fn = fn
        self.slicing = parent.slicing
        self.exact_size = parent.exact_size

    def _apply(self, item: Any) -> Any:
        try:
            return self._fn(item)
        except Exception as e:
            raise ElementError(f"Map {_label(self._fn)} failed on {item!r}: {e}") from e

    @property
    def size(self) -> int | None:
        return self._parent.size

    @property
    def span(self) -> int:
        return self._parent.span

    def _iter(self) -> Iterator[Any]:
        return map(self._apply, self._parent._iter())

    def _iter_from(self, offset: int) -> Iterator[Any]:
        return map(self._apply, self._parent._iter_from(offset))

    def _skips(self, offset: int, count: int) -> Iterator[StreamSignal]:
        for signal in self._parent._skips(offset, count):
            if isinstance(signal, Element):
                yield Element(self._apply(signal.value))
            else:
                yield signal

    def _sample(self, rng: np.random.Generator) -> Any:
        return self._apply(self._parent.sample(rng))

    def children(self) -> tuple[Domain, ...]:
        return (self._parent,)

    def __contains__(self, item: object) -> bool:
        raise DomainError("Membership is undefined for mapped domains")


class FilterTransformation(Domain):
    """Keeps elements satisfying `fn`.

    With ``strict=True`` the caller promises that `fn` is invariant under uset
    permutations, so the filtered domain stays strict.
    """

    name = "FilterTransformation"
    exact_size = False

    def __init__(
        self,
        parent: Domain,
        fn: Callable[[Any], bool],
        strict: bool = False,
        rejection_budget: int = DEFAULT_REJECTION_BUDGET,
    ) -> None:
        if rejection_budget < 1:
            raise DomainError(f"Rejection budget must be positive, got {rejection_budget}")
        self._parent = parent
        self._fn = fn
        self._budget = rejection_budget
        self.strict = strict and parent.strict
        self.slicing = Slicing.FILTERED if parent.slicing is Slicing.FULL else parent.slicing

    def _keep(self, item: Any) -> bool:
        try:
            return bool(self._fn(item))
        except Exception as e:
            raise ElementError(f"Filter {_label(self._fn)} failed on {item!r}: {e}") from e

    @property
    def size(self) -> None:
        return None

    @property
    def span(self) -> int:
        return self._parent.span

    def _iter(self) -> Iterator[Any]:
        return filter(self._keep, self._parent._iter())

    def _iter_from(self, offset: int) -> Iterator[Any]:
        return filter(self._keep, self._parent._iter_from(offset))

    def _skips(self, offset: int, count: int) -> Iterator[StreamSignal]:
        def signals() -> Iterator[StreamSignal]:
            for signal in self._parent.iterate_skips(offset, count):
                if isinstance(signal, Element) and not self._keep(signal.value):
                    yield Skipped(1)
                else:
                    yield signal

        return coalesce(signals())

    def _sample(self, rng: np.random.Generator) -> Any:
        for _ in range(self._budget):
            item = self._parent.sample(rng)
            if self._keep(item):
                return item
        logger.warning(f"Filter {_label(self._fn)} rejected {self._budget} consecutive samples")
        raise SamplingError(f"Filter {_label(self._fn)} rejected all {self._budget} samples")

    def children(self) -> tuple[Domain, ...]:
        return (self._parent,)

    def __contains__(self, item: object) -> bool:
        return item in self._parent and self._keep(item)

    def iter_canonical(self) -> Iterator[Any]:
        if not self.strict:
            return super().iter_canonical()
        return filter(self._keep, cnfs(self._parent))

    def to_spec(self) -> dict[str, Any]:
        for predicate in PREDICATES.list_predicates():
            if predicate.fn is self._fn:
                return {
                    "type": "filter",
                    "predicate": predicate.name,
                    "strict": self.strict,
                    "domain": self._parent.to_spec(),
                }
        return super().to_spec()
