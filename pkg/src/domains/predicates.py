import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from src.values.objects import SetValue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NamedPredicate:
    name: str
    fn: Callable[[Any], bool]
    description: str
    invariant: bool = False


class PredicateRegistry:
    """Filters that declarative domain files may refer to by name."""

    def __init__(self) -> None:
        self._predicates: dict[str, NamedPredicate] = {}

    def register(self, predicate: NamedPredicate) -> None:
        """Register a predicate. Raises ValueError if name already taken."""
        if predicate.name in self._predicates:
            raise ValueError(f"Predicate already registered: {predicate.name}")
        self._predicates[predicate.name] = predicate
        logger.debug(f"Registered predicate: {predicate.name}")

    def get(self, name: str) -> NamedPredicate | None:
        return self._predicates.get(name)

    def list_predicates(self) -> list[NamedPredicate]:
        return list(self._predicates.values())


def no_loops(graph: SetValue) -> bool:
    return all(a != b for (a, b) in graph)


def nonempty(item: Any) -> bool:
    return len(item) > 0


def distinct_components(item: tuple) -> bool:
    return len(set(item)) == len(item)


PREDICATES = PredicateRegistry()
PREDICATES.register(NamedPredicate("no_loops", no_loops, "edge sets without (x, x) pairs", invariant=True))
PREDICATES.register(NamedPredicate("nonempty", nonempty, "non-empty sets, maps and tuples", invariant=True))
PREDICATES.register(
    NamedPredicate("distinct_components", distinct_components, "tuples with pairwise distinct entries", invariant=True)
)
