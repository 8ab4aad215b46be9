import itertools
from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property
from typing import Any

import numpy as np

from src.domains.base import Domain, DomainError, Slicing
from src.domains.sampling import randbelow
from src.values.codec import to_json
from src.values.isomorphism import canonical_form_oracle
from src.values.objects import BasicObject, atoms, relabel, sort_key
from src.values.permutation import group_by_uset
from src.values.uset import REGISTRY, Atom, Uset, UsetRegistry


class NonCanonicalValueError(DomainError):
    pass


class _Listed(Domain):
    """Domain over an explicit, finite element sequence."""

    slicing = Slicing.FULL

    @property
    def _elements(self) -> Sequence[Any]:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return len(self._elements)

    def _iter(self) -> Iterator[Any]:
        return iter(self._elements)

    def _iter_from(self, offset: int) -> Iterator[Any]:
        return itertools.islice(self._elements, offset, None)

    def _sample(self, rng: np.random.Generator) -> Any:
        if not self._elements:
            raise DomainError(f"Cannot sample from empty {self.name}")
        return self._elements[randbelow(rng, len(self._elements))]


class Range(_Listed):
    name = "Range"
    strict = True

    def __init__(self, start: int, stop: int | None = None, step: int = 1) -> None:
        if stop is None:
            start, stop = 0, start
        self._range = range(start, stop, step)

    @property
    def _elements(self) -> range:
        return self._range

    @property
    def size(self) -> int:
        return len(self._range)

    def iter_canonical(self) -> Iterator[int]:
        return iter(self._range)

    def __contains__(self, item: object) -> bool:
        return isinstance(item, int) and not isinstance(item, bool) and item in self._range

    def to_spec(self) -> dict[str, Any]:
        r = self._range
        return {"type": "range", "start": r.start, "stop": r.stop, "step": r.step}


class Values(_Listed):
    """Explicitly listed host objects. Never strict; see CnfValues."""

    name = "Values"

    def __init__(self, items: Iterable[Any]) -> None:
        self._items = tuple(items)

    @property
    def _elements(self) -> tuple[Any, ...]:
        return self._items

    def __contains__(self, item: object) -> bool:
        return item in self._items

    def to_spec(self) -> dict[str, Any]:
        return {"type": "values", "items": list(self._items)}


class Boolean(_Listed):
    name = "Boolean"
    strict = True
    _elements = (False, True)

    def iter_canonical(self) -> Iterator[bool]:
        return iter(self._elements)

    def __contains__(self, item: object) -> bool:
        return isinstance(item, bool)

    def to_spec(self) -> dict[str, Any]:
        return {"type": "boolean"}


class NoneDomain(_Listed):
    name = "NoneDomain"
    strict = True
    _elements = (None,)

    def iter_canonical(self) -> Iterator[None]:
        return iter(self._elements)

    def __contains__(self, item: object) -> bool:
        return item is None

    def to_spec(self) -> dict[str, Any]:
        return {"type": "none"}


class USet(_Listed):
    """Unlabeled set: `size` interchangeable atoms named name0, name1, ..."""

    name = "USet"
    strict = True

    def __init__(self, size: int, name: str, registry: UsetRegistry = REGISTRY) -> None:
        self.uset = registry.register(size, name)

    @classmethod
    def of(cls, uset: Uset) -> "USet":
        domain = cls.__new__(cls)
        domain.uset = uset
        return domain

    @property
    def _elements(self) -> tuple[Atom, ...]:
        return self.uset.atoms

    def usets(self) -> frozenset[Uset]:
        return frozenset((self.uset,))

    def iter_canonical(self) -> Iterator[Atom]:
        return iter(self.uset.atoms[:1])

    def __contains__(self, item: object) -> bool:
        return isinstance(item, Atom) and item.uset == self.uset

    def to_spec(self) -> dict[str, Any]:
        return {"type": "uset", "ref": self.uset.name, "size": self.uset.size}


class CnfValues(_Listed):
    """Strict domain given by canonical representatives; contains their isomorphism closure."""

    name = "CnfValues"
    strict = True

    def __init__(self, items: Iterable[BasicObject]) -> None:
        items = tuple(items)
        seen: set[tuple] = set()
        for item in items:
            if sort_key(canonical_form_oracle(item)) != sort_key(item):
                raise NonCanonicalValueError(f"{item!r} is not a canonical form")
            key = sort_key(item)
            if key in seen:
                raise NonCanonicalValueError(f"{item!r} is listed twice")
            seen.add(key)
        self._items = items
        self._keys = seen

    @cached_property
    def _closure(self) -> tuple[BasicObject, ...]:
        result: list[BasicObject] = []
        for item in self._items:
            groups = group_by_uset(atoms(item))
            usets = list(groups)
            found: dict[tuple, BasicObject] = {}
            choices = [itertools.permutations(u.atoms, len(groups[u])) for u in usets]
            for combo in itertools.product(*choices):
                mapping = {s: t for u, image in zip(usets, combo) for s, t in zip(groups[u], image)}
                image = relabel(item, mapping)
                found.setdefault(sort_key(image), image)
            result.extend(found[k] for k in sorted(found))
        return tuple(result)

    @property
    def _elements(self) -> tuple[BasicObject, ...]:
        return self._closure

    def usets(self) -> frozenset[Uset]:
        return frozenset(a.uset for item in self._items for a in atoms(item))

    def iter_canonical(self) -> Iterator[BasicObject]:
        return iter(self._items)

    def __contains__(self, item: object) -> bool:
        try:
            return sort_key(canonical_form_oracle(item)) in self._keys
        except TypeError:
            return False

    def to_spec(self) -> dict[str, Any]:
        return {"type": "cnf_values", "items": [to_json(i) for i in self._items]}
