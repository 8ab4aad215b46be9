from dataclasses import dataclass, field


@dataclass(frozen=True)
class ParallelConfig:
    workers: int = 1
    target_job_ms: float = 500.0
    initial_span: int = 1024
    min_span: int = 16
    max_span: int = 1_048_576
    stats_window: int = 8  # Recent jobs averaged by the planner
    max_retries: int = 1
    jobs_in_flight_per_worker: int = 2
    deadline_seconds: float | None = None  # Soft; checked between jobs


@dataclass(frozen=True)
class SamplingConfig:
    seed: int | None = None  # None draws fresh entropy
    rejection_budget: int = 10_000


@dataclass(frozen=True)
class OutputConfig:
    format: str = "json"  # json | text
    warmup: bool = True


@dataclass(frozen=True)
class LoggingConfig:
    level: str = "INFO"
    file: str = "logs/canonforge.log"  # Empty disables the file handler
    max_bytes: int = 5_242_880
    backup_count: int = 3


@dataclass(frozen=True)
class AppConfig:
    parallel: ParallelConfig = field(default_factory=ParallelConfig)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
