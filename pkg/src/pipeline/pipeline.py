"""Immutable pipelines: a source method over a domain, stream transforms, one action."""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Protocol, TypeAlias

import numpy as np

from src.cnf.search import cnfs
from src.domains.sampling import make_rng
from src.pipeline.actions import NOTHING, Action, Collect, Count, First, Max, Reduce
from src.pipeline.errors import PipelineError
from src.pipeline.transforms import FilterT, MapT, TakeT, Transform, apply_all

if TYPE_CHECKING:
    from src.domains.base import Domain

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Iterate:
    def source(self, domain: "Domain") -> Iterator[Any]:
        return iter(domain)


@dataclass(frozen=True)
class Generate:
    count: int
    seed: int | None = None

    def samples(self, domain: "Domain", count: int, rng: np.random.Generator) -> Iterator[Any]:
        for _ in range(count):
            yield domain.sample(rng)

    def source(self, domain: "Domain") -> Iterator[Any]:
        return self.samples(domain, self.count, make_rng(self.seed))


@dataclass(frozen=True)
class Cnfs:
    def source(self, domain: "Domain") -> Iterator[Any]:
        return cnfs(domain)


Method: TypeAlias = Iterate | Generate | Cnfs


class ExecutionContext(Protocol):
    def run(self, pipeline: "Pipeline") -> Any: ...


@dataclass(frozen=True)
class Pipeline:
    domain: "Domain"
    method: Method = field(default_factory=Iterate)
    transforms: tuple[Transform, ...] = ()
    action: Action = field(default_factory=Collect)

    # --- methods -----------------------------------------------------------

    def iterate(self) -> "Pipeline":
        return replace(self, method=Iterate())

    def generate(self, count: int, seed: int | None = None) -> "Pipeline":
        if count < 0:
            raise PipelineError(f"generate() needs a nonnegative count, got {count}")
        return replace(self, method=Generate(count, seed))

    def cnfs(self) -> "Pipeline":
        return replace(self, method=Cnfs())

    # --- transforms --------------------------------------------------------

    def _then(self, transform: Transform) -> "Pipeline":
        return replace(self, transforms=self.transforms + (transform,))

    def map(self, fn: Callable[[Any], Any]) -> "Pipeline":
        return self._then(MapT(fn))

    def filter(self, fn: Callable[[Any], bool]) -> "Pipeline":
        return self._then(FilterT(fn))

    def take(self, count: int) -> "Pipeline":
        if count < 0:
            raise PipelineError(f"take() needs a nonnegative count, got {count}")
        return self._then(TakeT(count))

    # --- actions -----------------------------------------------------------

    def collect(self) -> "Pipeline":
        return replace(self, action=Collect())

    def reduce(self, fn: Callable[[Any, Any], Any], init: Any = NOTHING) -> "Pipeline":
        return replace(self, action=Reduce(fn, init))

    def max(self, key: Callable[[Any], Any] | None = None, size: int | None = None) -> "Pipeline":
        if size is not None and size < 1:
            raise PipelineError(f"max() size must be positive, got {size}")
        return replace(self, action=Max(key, size))

    def count(self) -> "Pipeline":
        return replace(self, action=Count())

    def first(self) -> "Pipeline":
        return replace(self, action=First())

    # --- execution ---------------------------------------------------------

    def split_at_take(self) -> tuple[tuple[Transform, ...], TakeT | None, tuple[Transform, ...]]:
        """(transforms before the first take, that take, transforms after it)."""
        for i, transform in enumerate(self.transforms):
            if isinstance(transform, TakeT):
                return self.transforms[:i], transform, self.transforms[i + 1 :]
        return self.transforms, None, ()

    def stream(self) -> Iterator[Any]:
        return apply_all(self.transforms, self.method.source(self.domain))

    def run(self, ctx: ExecutionContext | None = None) -> Any:
        if ctx is None:
            from src.pipeline.context import SerialContext

            ctx = SerialContext()
        return ctx.run(self)

    def __repr__(self) -> str:
        steps = [type(self.method).__name__] + [type(t).__name__ for t in self.transforms]
        return f"<Pipeline {self.domain.name} {' -> '.join(steps)} => {type(self.action).__name__}>"
