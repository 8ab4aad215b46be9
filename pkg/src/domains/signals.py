from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Any, TypeAlias


@dataclass(frozen=True)
class Element:
    value: Any


@dataclass(frozen=True)
class Skipped:
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"Skipped count must be positive, got {self.count}")


StreamSignal: TypeAlias = Element | Skipped


def coalesce(signals: Iterable[StreamSignal]) -> Iterator[StreamSignal]:
    """Merge runs of consecutive Skipped signals into one."""
    pending = 0
    for signal in signals:
        if isinstance(signal, Skipped):
            pending += signal.count
            continue
        if pending:
            yield Skipped(pending)
            pending = 0
        yield signal
    if pending:
        yield Skipped(pending)
