"""Terminal actions.

Every action evaluates a stream into a partial result and combines the partials of
consecutive stream pieces, in stream order, into the final result. A serial run is a
single piece.
"""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import Any, Protocol, TypeAlias

from more_itertools import first, ilen

from src.pipeline.errors import EmptyReduceError, TransformError
from src.values.objects import is_basic, sort_key


class _Nothing:
    def __repr__(self) -> str:
        return "<nothing>"


NOTHING = _Nothing()


def natural_key(item: Any) -> Any:
    return sort_key(item) if is_basic(item) else item


class StreamAction(Protocol):
    def evaluate(self, stream: Iterable[Any]) -> Any: ...

    def combine(self, partials: Sequence[Any]) -> Any: ...


@dataclass(frozen=True)
class Collect:
    def evaluate(self, stream: Iterable[Any]) -> list[Any]:
        return list(stream)

    def combine(self, partials: Sequence[list[Any]]) -> list[Any]:
        return [item for part in partials for item in part]


@dataclass(frozen=True)
class Count:
    def evaluate(self, stream: Iterable[Any]) -> int:
        return ilen(stream)

    def combine(self, partials: Sequence[int]) -> int:
        return sum(partials)


@dataclass(frozen=True)
class First:
    """Earliest element, or None for an empty stream."""

    def evaluate(self, stream: Iterable[Any]) -> Any:
        return first(stream, NOTHING)

    def combine(self, partials: Sequence[Any]) -> Any:
        for part in partials:
            if part is not NOTHING:
                return part
        return None


@dataclass(frozen=True)
class Reduce:
    """Left fold with `fn`. Partial folds are folded again, so `fn` must be associative."""

    fn: Callable[[Any, Any], Any]
    init: Any = NOTHING

    def _fold(self, acc: Any, item: Any) -> Any:
        if acc is NOTHING:
            return item
        try:
            return self.fn(acc, item)
        except Exception as e:
            raise TransformError("reduce", item, e) from e

    def evaluate(self, stream: Iterable[Any]) -> Any:
        acc = NOTHING
        for item in stream:
            acc = self._fold(acc, item)
        return acc

    def combine(self, partials: Sequence[Any]) -> Any:
        acc = self.init
        for part in partials:
            if part is not NOTHING:
                acc = self._fold(acc, part)
        if acc is NOTHING:
            raise EmptyReduceError("reduce() over an empty stream needs an initial value")
        return acc


@dataclass(frozen=True)
class Max:
    """All elements with the maximal key, in stream order, at most `size` of them."""

    key: Callable[[Any], Any] | None = None
    size: int | None = None

    def _key(self, item: Any) -> Any:
        if self.key is None:
            return natural_key(item)
        try:
            return self.key(item)
        except Exception as e:
            raise TransformError("max key", item, e) from e

    def _merge(self, best: list[tuple[Any, Any]], items: Iterable[tuple[Any, Any]]) -> list[tuple[Any, Any]]:
        for k, item in items:
            if not best or k > best[0][0]:
                best = [(k, item)]
            elif k == best[0][0] and (self.size is None or len(best) < self.size):
                best.append((k, item))
        return best

    def evaluate(self, stream: Iterable[Any]) -> list[tuple[Any, Any]]:
        return self._merge([], ((self._key(item), item) for item in stream))

    def combine(self, partials: Sequence[list[tuple[Any, Any]]]) -> list[Any]:
        best: list[tuple[Any, Any]] = []
        for part in partials:
            best = self._merge(best, part)
        return [item for _, item in best]


Action: TypeAlias = Collect | Count | First | Reduce | Max
