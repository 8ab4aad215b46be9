"""Job descriptors and the work a worker does for one of them."""

import time
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Any

import numpy as np

from src.domains.sampling import make_rng
from src.domains.signals import Element, Skipped, StreamSignal
from src.pipeline.actions import Action
from src.pipeline.pipeline import Generate
from src.pipeline.transforms import Transform, apply_all

if TYPE_CHECKING:
    from src.domains.base import Domain


class Strategy(Enum):
    FULL = "full"
    FILTERED = "filtered"
    FALLBACK = "fallback"
    GENERATE = "generate"


@dataclass(frozen=True)
class SliceJob:
    """One unit of work: "start at `offset` and process `span` positions".

    Fallback jobs carry their elements in `batch`; generate jobs carry the seed
    sequence they sample with.
    """

    index: int
    strategy: Strategy
    offset: int
    span: int
    batch: tuple[Any, ...] = ()
    seed: np.random.SeedSequence | None = None

    def describe(self) -> dict[str, Any]:
        """JSON-ready descriptor, without fallback elements."""
        data: dict[str, Any] = {
            "index": self.index,
            "strategy": self.strategy.value,
            "offset": self.offset,
            "span": self.span,
        }
        if self.seed is not None:
            data["seed"] = {"entropy": self.seed.entropy, "spawn_key": list(self.seed.spawn_key)}
        return data


@dataclass(frozen=True)
class JobStats:
    span: int
    wall_ms: float
    produced: int
    skipped: int = 0


@dataclass(frozen=True)
class JobResult:
    job: SliceJob
    partial: Any
    stats: JobStats


@dataclass(frozen=True)
class WorkerTask:
    """What every job of one execution shares.

    When `action` is None the worker collects the transformed stream and the
    coordinator finishes the pipeline.
    """

    domain: "Domain"
    transforms: tuple[Transform, ...]
    action: Action | None
    sampler: Generate | None = None


class _Counter:
    def __init__(self) -> None:
        self.produced = 0
        self.skipped = 0

    def count(self, signals: Iterator[StreamSignal]) -> Iterator[Any]:
        for signal in signals:
            if isinstance(signal, Skipped):
                self.skipped += signal.count
            else:
                self.produced += 1
                yield signal.value


def _source(task: WorkerTask, job: SliceJob, counter: _Counter) -> Iterator[Any]:
    match job.strategy:
        case Strategy.FULL:
            signals = (Element(x) for x in task.domain.iterate_from(job.offset, job.span))
        case Strategy.FILTERED:
            signals = task.domain.iterate_skips(job.offset, job.span)
        case Strategy.FALLBACK:
            signals = (Element(x) for x in job.batch)
        case Strategy.GENERATE:
            assert task.sampler is not None
            samples = task.sampler.samples(task.domain, job.span, make_rng(job.seed))
            signals = (Element(x) for x in samples)
    return counter.count(signals)


def execute_job(task: WorkerTask, job: SliceJob) -> JobResult:
    """Run one job to completion in the calling thread."""
    started = time.perf_counter()
    counter = _Counter()
    stream = apply_all(task.transforms, _source(task, job, counter))
    partial = list(stream) if task.action is None else task.action.evaluate(stream)
    wall_ms = (time.perf_counter() - started) * 1000.0
    stats = JobStats(job.span, wall_ms, counter.produced, counter.skipped)
    return JobResult(job, partial, stats)
