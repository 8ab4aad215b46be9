from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from itertools import islice
from typing import Any, Protocol, TypeAlias

from src.pipeline.errors import TransformError


def _name(fn: Callable[..., Any]) -> str:
    return getattr(fn, "__qualname__", None) or repr(fn)


class StreamTransform(Protocol):
    def apply(self, stream: Iterable[Any]) -> Iterator[Any]: ...


@dataclass(frozen=True)
class MapT:
    fn: Callable[[Any], Any]

    def apply(self, stream: Iterable[Any]) -> Iterator[Any]:
        for item in stream:
            try:
                result = self.fn(item)
            except Exception as e:
                raise TransformError(f"map({_name(self.fn)})", item, e) from e
            yield result


@dataclass(frozen=True)
class FilterT:
    fn: Callable[[Any], bool]

    def apply(self, stream: Iterable[Any]) -> Iterator[Any]:
        for item in stream:
            try:
                keep = self.fn(item)
            except Exception as e:
                raise TransformError(f"filter({_name(self.fn)})", item, e) from e
            if keep:
                yield item


@dataclass(frozen=True)
class TakeT:
    count: int

    def apply(self, stream: Iterable[Any]) -> Iterator[Any]:
        return islice(stream, self.count)


Transform: TypeAlias = MapT | FilterT | TakeT


def apply_all(transforms: Iterable[Transform], stream: Iterable[Any]) -> Iterator[Any]:
    result = iter(stream)
    for transform in transforms:
        result = transform.apply(result)
    return result
