"""Basic objects: the values that strict domains contain.

A basic object is one of ``None``, ``bool``, ``int``, ``str``, :class:`Atom`, a ``tuple`` of
basic objects, a :class:`SetValue` or a :class:`MapValue`. Sets and maps keep their
children sorted under :func:`sort_key`, so equality and ordering never depend on hashing
or object identity.

Cross-type order is fixed by rank: Unit < Boolean < Integer < Text < Atom < Tuple < Set < Map.
Tuples and sets of different size order shorter first; atoms order by (uset id, index).
"""

import bisect
from collections.abc import Iterable, Iterator, Mapping
from enum import IntEnum
from typing import Any, TypeAlias

from src.values.uset import Atom

BasicObject: TypeAlias = Any


class NotBasicObjectError(TypeError):
    pass


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def sort_key(o: BasicObject) -> tuple:
    """Deterministic total-order key of a basic object."""
    match o:
        case None:
            return (0,)
        case bool():
            return (1, int(o))
        case int():
            return (2, o)
        case str():
            return (3, o)
        case Atom():
            return o.sort_key
        case tuple():
            return (5, len(o), tuple(sort_key(c) for c in o))
        case SetValue() | MapValue():
            return o.sort_key
        case _:
            raise NotBasicObjectError(f"Not a basic object: {o!r} ({type(o).__name__})")


def compare(left: BasicObject, right: BasicObject) -> Ordering:
    lk, rk = sort_key(left), sort_key(right)
    if lk < rk:
        return Ordering.LESS
    if lk > rk:
        return Ordering.GREATER
    return Ordering.EQUAL


class SetValue:
    """Immutable finite set of basic objects, stored sorted and duplicate-free."""

    __slots__ = ("_items", "_keys", "_key", "_atoms")

    def __init__(self, items: Iterable[BasicObject] = ()) -> None:
        unique: dict[tuple, BasicObject] = {}
        for item in items:
            unique.setdefault(sort_key(item), item)
        keys = sorted(unique)
        self._init_sorted(tuple(keys), tuple(unique[k] for k in keys))

    def _init_sorted(self, keys: tuple, items: tuple) -> None:
        self._keys = keys
        self._items = items
        self._key = (6, len(items), keys)
        self._atoms = None

    @classmethod
    def _from_sorted(cls, keys: tuple, items: tuple) -> "SetValue":
        value = cls.__new__(cls)
        value._init_sorted(keys, items)
        return value

    @property
    def sort_key(self) -> tuple:
        return self._key

    @property
    def item_keys(self) -> tuple:
        """Sort keys of the items, ascending."""
        return self._keys

    def with_item(self, item: BasicObject) -> "SetValue":
        """Return a new set with `item` added."""
        key = sort_key(item)
        if self._keys and key > self._keys[-1]:
            value = SetValue._from_sorted(self._keys + (key,), self._items + (item,))
            if self._atoms is not None:
                value._atoms = self._atoms | atoms(item)
            return value
        return SetValue(self._items + (item,))

    def without_max(self) -> "SetValue":
        return SetValue._from_sorted(self._keys[:-1], self._items[:-1])

    def max(self) -> BasicObject:
        if not self._items:
            raise ValueError("max() of an empty SetValue")
        return self._items[-1]

    def to_set(self) -> frozenset:
        return frozenset(self._items)

    def __iter__(self) -> Iterator[BasicObject]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item: object) -> bool:
        try:
            key = sort_key(item)
        except NotBasicObjectError:
            return False
        i = bisect.bisect_left(self._keys, key)
        return i < len(self._keys) and self._keys[i] == key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SetValue) and other._key == self._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(i) for i in self._items) + "}"


class MapValue(Mapping):
    """Immutable finite map between basic objects, stored sorted by key."""

    __slots__ = ("_items", "_keys", "_key", "_atoms", "_lookup")

    def __init__(self, pairs: Iterable[tuple[BasicObject, BasicObject]] | Mapping = ()) -> None:
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        entries: dict[tuple, tuple[BasicObject, BasicObject]] = {}
        for k, v in pairs:
            kk = sort_key(k)
            if kk in entries and sort_key(entries[kk][1]) != sort_key(v):
                raise ValueError(f"Conflicting values for key {k!r} in MapValue")
            entries[kk] = (k, v)
        keys = sorted(entries)
        self._init_sorted(tuple(keys), tuple(entries[k] for k in keys))

    def _init_sorted(self, keys: tuple, items: tuple) -> None:
        self._keys = keys
        self._items = items
        self._key = (7, len(items), tuple((kk, sort_key(v)) for kk, (_, v) in zip(keys, items)))
        self._atoms = None
        self._lookup = None

    @classmethod
    def _from_sorted(cls, keys: tuple, items: tuple) -> "MapValue":
        value = cls.__new__(cls)
        value._init_sorted(keys, items)
        return value

    @property
    def sort_key(self) -> tuple:
        return self._key

    def with_item(self, key: BasicObject, value: BasicObject) -> "MapValue":
        """Return a new map with the pair added. `key` must not be present yet."""
        kk = sort_key(key)
        if self._keys and kk > self._keys[-1]:
            return MapValue._from_sorted(self._keys + (kk,), self._items + ((key, value),))
        return MapValue(self._items + ((key, value),))

    def pairs(self) -> tuple[tuple[BasicObject, BasicObject], ...]:
        return self._items

    def to_dict(self) -> dict:
        return dict(self._items)

    def __getitem__(self, key: BasicObject) -> BasicObject:
        if self._lookup is None:
            self._lookup = {kk: v for kk, (_, v) in zip(self._keys, self._items)}
        try:
            return self._lookup[sort_key(key)]
        except (KeyError, NotBasicObjectError):
            raise KeyError(key) from None

    def __iter__(self) -> Iterator[BasicObject]:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MapValue) and other._key == self._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return "{" + "; ".join(f"{k!r}: {v!r}" for k, v in self._items) + "}"


def is_basic(o: object) -> bool:
    try:
        sort_key(o)
    except NotBasicObjectError:
        return False
    return True


def atoms(o: BasicObject) -> frozenset[Atom]:
    """Uset atoms reachable in `o`. Built-in atoms have singleton usets and are left out."""
    match o:
        case Atom():
            return frozenset((o,))
        case tuple():
            return frozenset().union(*(atoms(c) for c in o)) if o else frozenset()
        case SetValue():
            if o._atoms is None:
                o._atoms = frozenset().union(*(atoms(c) for c in o._items)) if o._items else frozenset()
            return o._atoms
        case MapValue():
            if o._atoms is None:
                o._atoms = frozenset().union(*(atoms(k) | atoms(v) for k, v in o._items)) if o._items else frozenset()
            return o._atoms
        case _:
            return frozenset()


def relabel(o: BasicObject, mapping: Mapping[Atom, Atom]) -> BasicObject:
    """Replace atoms through `mapping`; atoms not in it are kept."""
    match o:
        case Atom():
            return mapping.get(o, o)
        case tuple():
            return tuple(relabel(c, mapping) for c in o)
        case SetValue():
            return SetValue(relabel(c, mapping) for c in o)
        case MapValue():
            return MapValue((relabel(k, mapping), relabel(v, mapping)) for k, v in o.pairs())
        case _:
            return o
