"""Sliced parallel execution of pipelines.

The coordinator runs on an asyncio loop. It plans jobs lazily, keeps a bounded number
of them in flight on the transport, and merges partial results in job order.
"""

import asyncio
import logging
from collections.abc import Iterator, Mapping
from dataclasses import replace
from itertools import count, islice
from typing import Any

import numpy as np

from src.config.schema import ParallelConfig
from src.domains.base import Slicing
from src.parallel.jobs import JobResult, JobStats, SliceJob, Strategy, WorkerTask
from src.parallel.planner import JobPlanner, check_partition
from src.parallel.transport import JobTransport, ThreadPoolTransport
from src.pipeline.actions import Action, Collect
from src.pipeline.pipeline import Cnfs, Generate, Pipeline
from src.pipeline.transforms import apply_all

logger = logging.getLogger(__name__)


class JobFailedError(Exception):
    def __init__(self, job: SliceJob, cause: BaseException) -> None:
        self.job = job.describe()
        super().__init__(f"Job {self.job} failed after retry: {cause}")


class IncompleteExecutionError(Exception):
    pass


def combine(action: Action, partials: Mapping[int, Any], expected: int) -> Any:
    """Merge the partials of jobs 0 .. expected - 1 in job order."""
    missing = [i for i in range(expected) if i not in partials]
    if missing:
        raise IncompleteExecutionError(f"Missing partial results for jobs {missing}")
    return action.combine([partials[i] for i in range(expected)])


def choose_strategy(pipeline: Pipeline) -> Strategy:
    match pipeline.method:
        case Generate():
            return Strategy.GENERATE
        case Cnfs():
            return Strategy.FALLBACK
    match pipeline.domain.slicing:
        case Slicing.FULL:
            return Strategy.FULL
        case Slicing.FILTERED:
            return Strategy.FILTERED
        case _:
            return Strategy.FALLBACK


class ParallelRunner:
    """Executes pipelines on a job transport. `stats` holds the last execution's jobs."""

    def __init__(self, config: ParallelConfig, transport: JobTransport | None = None) -> None:
        if config.workers < 1:
            raise ValueError(f"Need at least one worker, got {config.workers}")
        self._config = config
        self._transport = transport or ThreadPoolTransport(config.workers)
        self.jobs: list[SliceJob] = []
        self.stats: list[JobStats] = []
        self.complete = True

    def _sliced_jobs(self, strategy: Strategy, total: int, planner: JobPlanner) -> Iterator[SliceJob]:
        offset = 0
        for index in count():
            if offset >= total:
                return
            span = min(planner.next_span(), total - offset)
            yield SliceJob(index, strategy, offset, span)
            offset += span

    def _fallback_jobs(self, pipeline: Pipeline, planner: JobPlanner) -> Iterator[SliceJob]:
        source = pipeline.method.source(pipeline.domain)
        offset = 0
        for index in count():
            batch = tuple(islice(source, planner.next_span()))
            if not batch:
                return
            yield SliceJob(index, Strategy.FALLBACK, offset, len(batch), batch=batch)
            offset += len(batch)

    def _generate_jobs(self, method: Generate) -> Iterator[SliceJob]:
        workers = self._config.workers
        children = np.random.SeedSequence(method.seed).spawn(workers)
        base, extra = divmod(method.count, workers)
        index = offset = 0
        for i, child in enumerate(children):
            n = base + (1 if i < extra else 0)
            if n == 0:
                continue
            yield SliceJob(index, Strategy.GENERATE, offset, n, seed=child)
            index += 1
            offset += n

    def _jobs(self, pipeline: Pipeline, strategy: Strategy, planner: JobPlanner) -> Iterator[SliceJob]:
        match strategy:
            case Strategy.FULL | Strategy.FILTERED:
                return self._sliced_jobs(strategy, pipeline.domain.span, planner)
            case Strategy.FALLBACK:
                return self._fallback_jobs(pipeline, planner)
            case Strategy.GENERATE:
                assert isinstance(pipeline.method, Generate)
                return self._generate_jobs(pipeline.method)

    def _prefix_size(self, partials: Mapping[int, Any]) -> int:
        size = 0
        for index in count():
            if index not in partials:
                return size
            size += len(partials[index])

    async def _execute(
        self,
        task: WorkerTask,
        jobs: Iterator[SliceJob],
        planner: JobPlanner,
        limit: int | None,
    ) -> dict[int, Any]:
        loop = asyncio.get_running_loop()
        window = self._config.workers * self._config.jobs_in_flight_per_worker
        deadline = None
        if self._config.deadline_seconds is not None:
            deadline = loop.time() + self._config.deadline_seconds

        pending: dict[asyncio.Future[JobResult], tuple[SliceJob, int]] = {}
        partials: dict[int, Any] = {}
        issuing = True

        def submit(job: SliceJob, attempt: int) -> None:
            pending[asyncio.ensure_future(self._transport.submit(task, job))] = (job, attempt)

        try:
            while True:
                if issuing and limit is not None and self._prefix_size(partials) >= limit:
                    logger.debug(f"Ordered prefix holds {limit} elements, no further jobs")
                    issuing = False
                    self.complete = False
                if issuing and deadline is not None and loop.time() > deadline:
                    logger.warning(f"Deadline of {self._config.deadline_seconds}s passed, no further jobs")
                    issuing = False
                    self.complete = False
                while issuing and len(pending) < window:
                    job = next(jobs, None)
                    if job is None:
                        issuing = False
                        break
                    self.jobs.append(job)
                    submit(job, 0)
                if not pending:
                    return partials

                done, _ = await asyncio.wait(pending, return_when=asyncio.FIRST_COMPLETED)
                for future in done:
                    job, attempt = pending.pop(future)
                    try:
                        result = future.result()
                    except Exception as e:
                        if attempt < self._config.max_retries:
                            logger.warning(f"Job {job.describe()} failed ({e}), retrying")
                            submit(job, attempt + 1)
                            continue
                        raise JobFailedError(job, e) from e
                    partials[job.index] = result.partial
                    planner.record(result.stats)
                    self.stats.append(result.stats)
        finally:
            for future in pending:
                future.cancel()

    async def run_async(self, pipeline: Pipeline) -> Any:
        head, take, rest = pipeline.split_at_take()
        strategy = choose_strategy(pipeline)
        sampler = pipeline.method if isinstance(pipeline.method, Generate) else None
        task = WorkerTask(pipeline.domain, head, None if take else pipeline.action, sampler)
        planner = JobPlanner(self._config)
        self.jobs, self.stats, self.complete = [], [], True
        logger.info(f"Running {pipeline!r} with strategy {strategy.value} on {self._config.workers} workers")

        await self._transport.start()
        try:
            jobs = self._jobs(pipeline, strategy, planner)
            partials = await self._execute(task, jobs, planner, take.count if take else None)
        finally:
            await self._transport.stop()

        if strategy in (Strategy.FULL, Strategy.FILTERED) and self.complete:
            check_partition(self.jobs, pipeline.domain.span)
        logger.debug(f"Finished {len(self.jobs)} jobs")

        if take is None:
            return combine(pipeline.action, partials, len(self.jobs))
        items = combine(Collect(), partials, len(self.jobs))[: take.count]
        action = pipeline.action
        return action.combine([action.evaluate(apply_all(rest, items))])


class PoolContext:
    """Execution context backed by a worker pool."""

    def __init__(
        self,
        config: ParallelConfig | None = None,
        workers: int | None = None,
        transport: JobTransport | None = None,
    ) -> None:
        config = config or ParallelConfig()
        if workers is not None:
            config = replace(config, workers=workers)
        self.runner = ParallelRunner(config, transport)

    @property
    def stats(self) -> list[JobStats]:
        return self.runner.stats

    def run(self, pipeline: Pipeline) -> Any:
        return asyncio.run(self.runner.run_async(pipeline))

    async def run_async(self, pipeline: Pipeline) -> Any:
        return await self.runner.run_async(pipeline)
