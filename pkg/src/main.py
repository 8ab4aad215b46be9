import argparse
import json
import logging
import sys
import time
from collections.abc import Iterable, Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any, TextIO

from src.config.loader import load_config
from src.config.schema import AppConfig
from src.domains.declarative import load_domain_spec
from src.parallel.runner import PoolContext
from src.pipeline.actions import Collect
from src.pipeline.pipeline import ExecutionContext, Pipeline
from src.pipeline.transforms import TakeT
from src.structures.automata import AutomatonTable, check_automaton
from src.structures.digraphs import digraphs
from src.util.logging import setup_logging
from src.util.templates import ReportLoader
from src.values.codec import to_json
from src.values.objects import is_basic

logger = logging.getLogger(__name__)


def parse_mode(text: str) -> tuple[str, int | None]:
    """iterate | cnfs | generate:K"""
    name, _, count = text.partition(":")
    if name in ("iterate", "cnfs") and not count:
        return name, None
    if name == "generate" and count.isdigit():
        return name, int(count)
    raise argparse.ArgumentTypeError(f"invalid mode {text!r}, expected iterate, cnfs or generate:K")


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=Path("config.yaml"), help="YAML configuration file")
    common.add_argument("--workers", type=positive_int, help="Run on a pool of this many workers")
    common.add_argument("--target-job-ms", type=float, help="Target wall time per parallel job")
    common.add_argument("--deadline", type=float, help="Stop handing out jobs after this many seconds")
    common.add_argument("--seed", type=int, help="Seed for generate mode")
    common.add_argument("--format", choices=["json", "text"], help="Output format for elements")
    common.add_argument("--out", type=Path, help="Write elements as JSON lines to this file")
    common.add_argument("--no-warmup", action="store_true", help="Skip the untimed warm-up run")
    common.add_argument("--log-level", help="Override the configured log level")

    parser = argparse.ArgumentParser(prog="canonforge", description="Enumerate discrete structures")
    commands = parser.add_subparsers(dest="command", required=True)

    graphs = commands.add_parser("digraphs", parents=[common], help="Directed graphs on n vertices")
    graphs.add_argument("--nodes", type=positive_int, required=True)
    graphs.add_argument("--mode", type=parse_mode, default=("cnfs", None))
    graphs.add_argument("--no-loops", action="store_true", help="Exclude graphs with self-loops")

    words = commands.add_parser("resetwords", parents=[common], help="Longest shortest reset word")
    words.add_argument("--states", type=positive_int, required=True)
    words.add_argument("--symbols", type=positive_int, required=True)
    words.add_argument("--mode", type=parse_mode, default=("cnfs", None))
    words.add_argument(
        "--unsynchronized-value",
        type=int,
        default=0,
        help="Value reported for automata without a reset word",
    )

    run = commands.add_parser("run", parents=[common], help="Run a pipeline over a declarative domain")
    run.add_argument("--spec", type=Path, required=True, help="Domain description (JSON or YAML)")
    run.add_argument("--method", type=parse_mode, default=("iterate", None))
    run.add_argument("--action", choices=["collect", "count", "first", "max"], default="collect")
    run.add_argument("--take", type=int, help="Keep only the first K elements")
    return parser


def apply_arguments(config: AppConfig, args: argparse.Namespace) -> AppConfig:
    parallel, sampling, output, logs = config.parallel, config.sampling, config.output, config.logging
    if args.workers is not None:
        parallel = replace(parallel, workers=args.workers)
    if args.target_job_ms is not None:
        parallel = replace(parallel, target_job_ms=args.target_job_ms)
    if args.deadline is not None:
        parallel = replace(parallel, deadline_seconds=args.deadline)
    if args.seed is not None:
        sampling = replace(sampling, seed=args.seed)
    if args.format is not None:
        output = replace(output, format=args.format)
    if args.no_warmup:
        output = replace(output, warmup=False)
    if args.log_level is not None:
        logs = replace(logs, level=args.log_level)
    return AppConfig(parallel=parallel, sampling=sampling, output=output, logging=logs)


def with_method(pipeline: Pipeline, mode: tuple[str, int | None], seed: int | None) -> Pipeline:
    match mode:
        case ("cnfs", _):
            return pipeline.cnfs()
        case ("generate", int(count)):
            return pipeline.generate(count, seed=seed)
        case _:
            return pipeline.iterate()


def render(item: Any, fmt: str) -> str:
    if fmt == "text":
        return repr(item)
    return json.dumps(to_json(item) if is_basic(item) else item)


def emit(items: Iterable[Any], fmt: str, stream: TextIO) -> None:
    for item in items:
        stream.write(render(item, fmt) + "\n")


def execute(pipeline: Pipeline, config: AppConfig) -> tuple[Any, float]:
    """Run `pipeline`, returning its result and wall time without the warm-up run."""
    ctx: ExecutionContext | None = None
    if config.parallel.workers > 1:
        ctx = PoolContext(config.parallel)
    if config.output.warmup:
        warmup = replace(pipeline, transforms=pipeline.transforms + (TakeT(1),), action=Collect())
        warmup.run()
        logger.debug("Warm-up run finished")
    started = time.perf_counter()
    result = pipeline.run(ctx)
    return result, time.perf_counter() - started


def command_digraphs(args: argparse.Namespace, config: AppConfig, out: TextIO) -> int:
    domain = digraphs(args.nodes, loops=not args.no_loops)
    pipeline = with_method(Pipeline(domain), args.mode, config.sampling.seed)
    graphs, seconds = execute(pipeline, config)
    emit(graphs, config.output.format, out)
    print(ReportLoader().summary(len(graphs), seconds, config.parallel.workers), file=sys.stderr)
    return 0


def command_resetwords(args: argparse.Namespace, config: AppConfig, out: TextIO) -> int:
    table = AutomatonTable.create(args.states, args.symbols)
    unsynchronized = args.unsynchronized_value
    pipeline = (
        with_method(Pipeline(table.domain()), args.mode, config.sampling.seed)
        .map(lambda delta: check_automaton(delta, unsynchronized=unsynchronized))
        .max(size=1)
    )
    result, seconds = execute(pipeline, config)
    length = result[0] if result else unsynchronized
    if config.output.format == "json":
        out.write(json.dumps({"states": args.states, "symbols": args.symbols, "max_reset_length": length}) + "\n")
    else:
        out.write(ReportLoader().resetwords_report(args.states, args.symbols, length) + "\n")
    print(ReportLoader().summary(1, seconds, config.parallel.workers), file=sys.stderr)
    return 0


def command_run(args: argparse.Namespace, config: AppConfig, out: TextIO) -> int:
    pipeline = with_method(Pipeline(load_domain_spec(args.spec)), args.method, config.sampling.seed)
    if args.take is not None:
        pipeline = pipeline.take(args.take)
    match args.action:
        case "count":
            pipeline = pipeline.count()
        case "first":
            pipeline = pipeline.first()
        case "max":
            pipeline = pipeline.max()
    result, seconds = execute(pipeline, config)
    if args.action in ("collect", "max"):
        emit(result, config.output.format, out)
        count = len(result)
    else:
        emit([result], config.output.format, out)
        count = 1
    print(ReportLoader().summary(count, seconds, config.parallel.workers), file=sys.stderr)
    return 0


_COMMANDS = {
    "digraphs": command_digraphs,
    "resetwords": command_resetwords,
    "run": command_run,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = apply_arguments(load_config(args.config), args)
    setup_logging(config.logging)
    logger.info(f"Starting {args.command}")

    try:
        if args.out is not None:
            with open(args.out, "w") as out:
                return _COMMANDS[args.command](args, replace(config, output=replace(config.output, format="json")), out)
        return _COMMANDS[args.command](args, config, sys.stdout)
    except Exception:
        logger.exception("Fatal error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
