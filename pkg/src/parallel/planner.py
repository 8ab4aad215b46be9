import logging
from collections import deque
from collections.abc import Iterable

from src.config.schema import ParallelConfig
from src.parallel.jobs import JobStats, SliceJob

logger = logging.getLogger(__name__)


class PartitionError(AssertionError):
    pass


class JobPlanner:
    """Sizes the next job so that it takes about `target_job_ms`."""

    def __init__(self, config: ParallelConfig) -> None:
        if config.min_span < 1 or config.max_span < config.min_span:
            raise ValueError(f"Invalid span clamps [{config.min_span}, {config.max_span}]")
        self._config = config
        self._recent: deque[JobStats] = deque(maxlen=config.stats_window)

    def record(self, stats: JobStats) -> None:
        self._recent.append(stats)

    def mean_ms_per_element(self) -> float | None:
        positions = sum(s.span for s in self._recent)
        if positions == 0:
            return None
        return sum(s.wall_ms for s in self._recent) / positions

    def next_span(self) -> int:
        per_element = self.mean_ms_per_element()
        if per_element is None:
            return self._config.initial_span
        if per_element <= 0:
            return self._config.max_span
        span = int(self._config.target_job_ms / per_element)
        return max(self._config.min_span, min(self._config.max_span, span))


def check_partition(jobs: Iterable[SliceJob], total: int) -> None:
    """Raise unless the jobs cover [0, total) without overlap."""
    position = 0
    for job in sorted(jobs, key=lambda j: j.offset):
        if job.offset != position or job.span < 1:
            raise PartitionError(f"Job {job.describe()} does not continue the partition at {position}")
        position += job.span
    if position != total:
        raise PartitionError(f"Jobs cover [0, {position}) instead of [0, {total})")
