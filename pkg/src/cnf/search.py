"""Orderly generation of canonical forms.

Depth-first search over the parent tree rooted at an empty tuple, set or map. A node is
expanded only when it is canonical, so every canonical form is reached exactly once through
its chain of canonical parents and nothing already generated has to be remembered.
"""

import logging
from collections.abc import Iterator, Sequence
from typing import Protocol

from src.cnf.canonical import canonical_mask
from src.cnf.extensions import CanonicalSource, Extender, SearchNode
from src.values.objects import BasicObject, MapValue, SetValue

logger = logging.getLogger(__name__)


class NonStrictDomainError(TypeError):
    pass


class StrictDomain(Protocol):
    strict: bool

    def non_strict_part(self) -> object | None: ...

    def iter_canonical(self) -> Iterator[BasicObject]: ...


class SearchPlan(Protocol):
    def root(self) -> BasicObject: ...

    def children(self, node: SearchNode) -> Iterator[BasicObject]: ...

    def accepts(self, node: SearchNode) -> bool: ...

    def is_leaf(self, node: SearchNode) -> bool: ...


class TuplePlan:
    """Tuples whose i-th component comes from the i-th subdomain."""

    def __init__(self, parts: Sequence[CanonicalSource]) -> None:
        self._extenders = [Extender(p) for p in parts]

    def root(self) -> tuple:
        return ()

    def children(self, node: SearchNode) -> Iterator[tuple]:
        for ext in self._extenders[len(node.partial)](node):
            yield node.partial + (ext,)

    def accepts(self, node: SearchNode) -> bool:
        return len(node.partial) == len(self._extenders)

    def is_leaf(self, node: SearchNode) -> bool:
        return len(node.partial) == len(self._extenders)


class SetPlan:
    """Subsets of a subdomain, optionally of one fixed size."""

    def __init__(self, ground: CanonicalSource, size: int | None = None) -> None:
        self._extender = Extender(ground)
        self._size = size

    def root(self) -> SetValue:
        return SetValue()

    def children(self, node: SearchNode) -> Iterator[SetValue]:
        partial: SetValue = node.partial
        above = partial.max() if len(partial) else None
        for ext in self._extender(node, above=above):
            yield partial.with_item(ext)

    def accepts(self, node: SearchNode) -> bool:
        return self._size is None or len(node.partial) == self._size

    def is_leaf(self, node: SearchNode) -> bool:
        return self._size is not None and len(node.partial) == self._size


class MapPlan:
    """Total maps over a fixed key list, built as sets of pairs in increasing key order."""

    def __init__(self, keys: Sequence[BasicObject], values: CanonicalSource) -> None:
        self._keys = list(keys)
        self._extender = Extender(values)

    def root(self) -> MapValue:
        return MapValue()

    def children(self, node: SearchNode) -> Iterator[MapValue]:
        partial: MapValue = node.partial
        key = self._keys[len(partial)]
        keyed = node.using(key)
        if keyed is None:
            return
        for value in self._extender(keyed):
            yield partial.with_item(key, value)

    def accepts(self, node: SearchNode) -> bool:
        return len(node.partial) == len(self._keys)

    def is_leaf(self, node: SearchNode) -> bool:
        return len(node.partial) == len(self._keys)


def orderly_search(plan: SearchPlan) -> Iterator[BasicObject]:
    """Yield canonical objects accepted by `plan`, in depth-first pre-order."""
    stack = [SearchNode.of(plan.root(), 0)]
    expanded = 0
    while stack:
        node = stack.pop()
        if plan.accepts(node):
            yield node.partial
        if plan.is_leaf(node):
            continue
        expanded += 1
        candidates = [n for n in (SearchNode.of(c, node.depth + 1) for c in plan.children(node)) if n is not None]
        mask = canonical_mask([n.partial for n in candidates])
        children = [n for n, keep in zip(candidates, mask) if keep]
        stack.extend(reversed(children))
    logger.debug(f"Orderly search expanded {expanded} nodes")


def cnfs(domain: StrictDomain) -> Iterator[BasicObject]:
    """One canonical representative per isomorphism class of `domain`."""
    if not domain.strict:
        raise NonStrictDomainError(f"cnfs() needs a strict domain; {domain.non_strict_part()!r} is not strict")
    return domain.iter_canonical()
