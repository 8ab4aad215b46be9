import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property
from typing import Any

import numpy as np
from more_itertools import nth_combination

from src.cnf.search import MapPlan, SetPlan, TuplePlan, orderly_search
from src.domains.base import Domain, DomainError, Slicing, weakest
from src.domains.elementary import Values
from src.domains.sampling import coin, randbelow
from src.domains.signals import Element, Skipped, StreamSignal, coalesce
from src.values.objects import BasicObject, MapValue, NotBasicObjectError, SetValue, sort_key


def _distinct(owner: str, domain: Domain) -> dict[tuple, BasicObject]:
    """Items of `domain` by sort key, first occurrence kept."""
    unique: dict[tuple, BasicObject] = {}
    for item in domain:
        try:
            key = sort_key(item)
        except NotBasicObjectError as e:
            raise DomainError(f"{owner} needs basic objects, but {domain.name} yields {item!r}") from e
        unique.setdefault(key, item)
    return unique


def _rows(domains: Sequence[Domain], digits: Sequence[int]) -> Iterator[tuple]:
    """Row-major tuples starting at the mixed-radix position `digits`."""
    if not domains:
        yield ()
        return
    head, rest = domains[0], domains[1:]
    start = list(digits[1:])
    for item in head._iter_from(digits[0]):
        for tail in _rows(rest, start):
            yield (item,) + tail
        start = [0] * len(rest)


def _product_skips(domains: Sequence[Domain], offset: int, count: int) -> Iterator[StreamSignal]:
    """Skip-iterator over a product; a skipped factor element drops a whole stride of rows."""
    if count == 0:
        return
    if not domains:
        yield Element(())
        return
    head, rest = domains[0], domains[1:]
    stride = math.prod(d.span for d in rest)
    end = offset + count
    row = offset // stride
    last = (end - 1) // stride
    for signal in head.iterate_skips(row, last - row + 1):
        if isinstance(signal, Skipped):
            lo, hi = max(offset, row * stride), min(end, (row + signal.count) * stride)
            yield Skipped(hi - lo)
            row += signal.count
            continue
        lo, hi = max(offset, row * stride), min(end, (row + 1) * stride)
        for inner in _product_skips(rest, lo - row * stride, hi - lo):
            if isinstance(inner, Element):
                yield Element((signal.value,) + inner.value)
            else:
                yield inner
        row += 1


class Product(Domain):
    name = "Product"

    def __init__(self, domains: Iterable[Domain]) -> None:
        self._domains = tuple(domains)
        self.strict = all(d.strict for d in self._domains)
        self.slicing = weakest([d.slicing for d in self._domains])
        self.exact_size = all(d.exact_size for d in self._domains)

    @property
    def domains(self) -> tuple[Domain, ...]:
        return self._domains

    @property
    def size(self) -> int | None:
        sizes = [d.size for d in self._domains]
        if any(s is None for s in sizes):
            return None
        return math.prod(sizes)

    @property
    def span(self) -> int:
        return math.prod(d.span for d in self._domains)

    def _iter(self) -> Iterator[tuple]:
        return itertools.product(*self._domains)

    def _iter_from(self, offset: int) -> Iterator[tuple]:
        if offset >= self.span:
            return iter(())
        digits = []
        for d in reversed(self._domains):
            offset, digit = divmod(offset, d.span)
            digits.append(digit)
        return _rows(self._domains, digits[::-1])

    def _skips(self, offset: int, count: int) -> Iterator[StreamSignal]:
        return coalesce(_product_skips(self._domains, offset, count))

    def _sample(self, rng: np.random.Generator) -> tuple:
        return tuple(d.sample(rng) for d in self._domains)

    def children(self) -> tuple[Domain, ...]:
        return self._domains

    def __contains__(self, item: object) -> bool:
        return (
            isinstance(item, tuple)
            and len(item) == len(self._domains)
            and all(x in d for x, d in zip(item, self._domains))
        )

    def iter_canonical(self) -> Iterator[tuple]:
        return orderly_search(TuplePlan(self._domains))

    def to_spec(self) -> dict[str, Any]:
        return {"type": "product", "domains": [d.to_spec() for d in self._domains]}


class Sequences(Product):
    """Tuples of fixed length over one domain, in lexicographic order."""

    name = "Sequences"

    def __init__(self, domain: Domain, length: int) -> None:
        if length < 0:
            raise DomainError(f"Sequence length must be nonnegative, got {length}")
        super().__init__((domain,) * length)
        self._domain = domain
        self._length = length

    def to_spec(self) -> dict[str, Any]:
        return {"type": "sequences", "domain": self._domain.to_spec(), "length": self._length}


def _unrank_subset(position: int, n: int) -> list[int]:
    """Indices of the subset at `position` in include-first order ({}, {0}, {0, 1}, {1}, ...)."""
    chosen: list[int] = []
    start = 0
    while position > 0:
        position -= 1
        for i in range(start, n):
            block = 1 << (n - 1 - i)
            if position < block:
                chosen.append(i)
                start = i + 1
                break
            position -= block
    return chosen


def _next_subset(chosen: list[int], n: int) -> bool:
    if not chosen:
        if n == 0:
            return False
        chosen.append(0)
        return True
    if chosen[-1] < n - 1:
        chosen.append(chosen[-1] + 1)
        return True
    chosen.pop()
    if not chosen:
        return False
    chosen[-1] += 1
    return True


def _next_combination(chosen: list[int], n: int) -> bool:
    k = len(chosen)
    for i in reversed(range(k)):
        if chosen[i] < n - k + i:
            chosen[i] += 1
            for j in range(i + 1, k):
                chosen[j] = chosen[j - 1] + 1
            return True
    return False


class Subsets(Domain):
    """All subsets of a domain, or only those of one size."""

    name = "Subsets"
    slicing = Slicing.FULL

    def __init__(self, domain: Domain, size: int | None = None) -> None:
        if size is not None and size < 0:
            raise DomainError(f"Subset size must be nonnegative, got {size}")
        self._domain = domain
        self._size = size
        self.strict = domain.strict
        if isinstance(domain, Values):
            _distinct(self.name, domain)

    @cached_property
    def _ground(self) -> tuple[BasicObject, ...]:
        return tuple(_distinct(self.name, self._domain).values())

    @cached_property
    def _ground_keys(self) -> tuple[tuple, ...]:
        return tuple(sort_key(x) for x in self._ground)

    def _make(self, chosen: Sequence[int]) -> SetValue:
        keys = self._ground_keys
        order = sorted(chosen, key=lambda i: keys[i])
        return SetValue._from_sorted(tuple(keys[i] for i in order), tuple(self._ground[i] for i in order))

    @property
    def size(self) -> int:
        n = len(self._ground)
        if self._size is None:
            return 1 << n
        return math.comb(n, self._size)

    def _iter(self) -> Iterator[SetValue]:
        return self._iter_from(0)

    def _iter_from(self, offset: int) -> Iterator[SetValue]:
        n = len(self._ground)
        if offset >= self.size:
            return
        if self._size is None:
            chosen = _unrank_subset(offset, n)
            advance = _next_subset
        else:
            chosen = list(nth_combination(range(n), self._size, offset))
            advance = _next_combination
        while True:
            yield self._make(chosen)
            if not advance(chosen, n):
                return

    def _sample(self, rng: np.random.Generator) -> SetValue:
        n = len(self._ground)
        if self._size is None:
            chosen = [i for i in range(n) if coin(rng)]
        else:
            chosen = [int(i) for i in rng.choice(n, self._size, replace=False)]
        return self._make(chosen)

    def children(self) -> tuple[Domain, ...]:
        return (self._domain,)

    def __contains__(self, item: object) -> bool:
        return (
            isinstance(item, SetValue)
            and (self._size is None or len(item) == self._size)
            and all(x in self._domain for x in item)
        )

    def iter_canonical(self) -> Iterator[SetValue]:
        return orderly_search(SetPlan(self._domain, self._size))

    def to_spec(self) -> dict[str, Any]:
        spec = {"type": "subsets", "domain": self._domain.to_spec()}
        if self._size is not None:
            spec["size"] = self._size
        return spec


class Mappings(Domain):
    """Total maps from the elements of `key` to elements of `value`."""

    name = "Mappings"
    slicing = Slicing.FULL

    def __init__(self, key: Domain, value: Domain) -> None:
        self._key = key
        self._value = value
        self.strict = key.strict and value.strict
        for operand in (key, value):
            if isinstance(operand, Values):
                _distinct(self.name, operand)

    @cached_property
    def _keys(self) -> tuple[BasicObject, ...]:
        unique = _distinct(self.name, self._key)
        return tuple(unique[k] for k in sorted(unique))

    @cached_property
    def _key_keys(self) -> tuple[tuple, ...]:
        return tuple(sort_key(k) for k in self._keys)

    @cached_property
    def _assignments(self) -> Sequences:
        return Sequences(Values(self._value), len(self._keys))

    def _make(self, assignment: tuple) -> MapValue:
        return MapValue._from_sorted(self._key_keys, tuple(zip(self._keys, assignment)))

    @property
    def size(self) -> int:
        return self._assignments.size

    def _iter(self) -> Iterator[MapValue]:
        return map(self._make, self._assignments._iter())

    def _iter_from(self, offset: int) -> Iterator[MapValue]:
        return map(self._make, self._assignments._iter_from(offset))

    def _sample(self, rng: np.random.Generator) -> MapValue:
        return self._make(self._assignments.sample(rng))

    def children(self) -> tuple[Domain, ...]:
        return (self._key, self._value)

    def __contains__(self, item: object) -> bool:
        return (
            isinstance(item, MapValue)
            and tuple(sort_key(k) for k in item) == self._key_keys
            and all(v in self._value for v in item.values())
        )

    def iter_canonical(self) -> Iterator[MapValue]:
        return orderly_search(MapPlan(self._keys, self._value))

    def to_spec(self) -> dict[str, Any]:
        return {"type": "mappings", "key": self._key.to_spec(), "value": self._value.to_spec()}


class Join(Domain):
    """Concatenation of domains, in the given order."""

    name = "Join"

    def __init__(self, domains: Iterable[Domain]) -> None:
        self._domains = tuple(domains)
        self.strict = all(d.strict for d in self._domains)
        self.slicing = weakest([d.slicing for d in self._domains])
        self.exact_size = all(d.exact_size for d in self._domains)

    @property
    def size(self) -> int | None:
        sizes = [d.size for d in self._domains]
        if any(s is None for s in sizes):
            return None
        return sum(sizes)

    @property
    def span(self) -> int:
        return sum(d.span for d in self._domains)

    def _windows(self, offset: int, count: int) -> Iterator[tuple[Domain, int, int]]:
        """(operand, local offset, local count) covering [offset, offset + count)."""
        end = offset + count
        base = 0
        for d in self._domains:
            span = d.span
            lo, hi = max(offset, base), min(end, base + span)
            if lo < hi:
                yield d, lo - base, hi - lo
            base += span

    def _iter(self) -> Iterator[Any]:
        return itertools.chain.from_iterable(self._domains)

    def _iter_from(self, offset: int) -> Iterator[Any]:
        return itertools.chain.from_iterable(
            itertools.islice(d._iter_from(lo), n) for d, lo, n in self._windows(offset, self.span - offset)
        )

    def _skips(self, offset: int, count: int) -> Iterator[StreamSignal]:
        return coalesce(
            itertools.chain.from_iterable(d.iterate_skips(lo, n) for d, lo, n in self._windows(offset, count))
        )

    def _sample(self, rng: np.random.Generator) -> Any:
        weights = [d.size if d.size is not None else d.span for d in self._domains]
        total = sum(weights)
        if total == 0:
            raise DomainError("Cannot sample from an empty Join")
        pick = randbelow(rng, total)
        for d, weight in zip(self._domains, weights):
            if pick < weight:
                return d.sample(rng)
            pick -= weight
        raise AssertionError("unreachable")

    def children(self) -> tuple[Domain, ...]:
        return self._domains

    def __contains__(self, item: object) -> bool:
        return any(item in d for d in self._domains)

    def iter_canonical(self) -> Iterator[Any]:
        seen: set[tuple] = set()
        for d in self._domains:
            for item in d.iter_canonical():
                key = sort_key(item)
                if key not in seen:
                    seen.add(key)
                    yield item

    def to_spec(self) -> dict[str, Any]:
        return {"type": "join", "domains": [d.to_spec() for d in self._domains]}
