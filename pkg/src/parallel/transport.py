import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Protocol

from src.parallel.jobs import JobResult, SliceJob, WorkerTask, execute_job

logger = logging.getLogger(__name__)


class TransportError(Exception):
    pass


class JobTransport(Protocol):
    async def start(self) -> None: ...

    async def stop(self) -> None: ...

    async def submit(self, task: WorkerTask, job: SliceJob) -> JobResult: ...


class ThreadPoolTransport:
    """Runs jobs on a local thread pool."""

    def __init__(self, workers: int) -> None:
        if workers < 1:
            raise ValueError(f"Need at least one worker, got {workers}")
        self._workers = workers
        self._executor: ThreadPoolExecutor | None = None

    async def start(self) -> None:
        self._executor = ThreadPoolExecutor(max_workers=self._workers, thread_name_prefix="canonforge")
        logger.debug(f"Thread pool started with {self._workers} workers")

    async def stop(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True, cancel_futures=True)
            self._executor = None
        logger.debug("Thread pool stopped")

    async def submit(self, task: WorkerTask, job: SliceJob) -> JobResult:
        if self._executor is None:
            raise TransportError("Transport not started")
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(self._executor, execute_job, task, job)
