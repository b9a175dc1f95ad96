"""
Command-line surface: check, oracle, bench and gen sub-commands.
Exit codes: 0 ok, 2 input or configuration error, 3 internal invariant failure.
"""

from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence
import argparse
import logging
import sys

from ..core.config import BenchConfig, Config, RankingMode
from ..core.errors import (
    GenerationStuck,
    InvariantViolation,
    NamespaceCollision,
    ParseError,
    ValidationError,
)
from ..logio.eventlog import load_log, write_log_lines
from ..logio.generator import NoiseSpec, generate_log
from ..logio.pnml import load_pnml
from ..logio.writers import write_alignments
from ..services.alignment_service import AlignmentService, RunSummary
from ..services.benchmark_service import BenchmarkService, summarize, to_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _noise(text: str) -> NoiseSpec:
    try:
        return NoiseSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("model", type=Path, help="PNML model (final marking inline or in a .fm sidecar)")
    parser.add_argument("log", type=Path, help="event log (.xes, .csv or one trace per line)")
    parser.add_argument("--log-format", choices=("xes", "csv", "lines"), help="override format detection")
    parser.add_argument("--timeout", type=float, help="per-trace timeout in seconds")
    parser.add_argument("--state-cap", type=int, help="maximum explored markings per search")
    parser.add_argument("--jobs", type=int, help="traces aligned in parallel")
    parser.add_argument("--no-progress", action="store_true", help="hide the progress bar")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "tsv"), help="per-case output format")
    parser.add_argument("--output", type=Path, help="write results here instead of stdout")
    parser.add_argument("--omit-timings", action="store_true", help="zero wall-clock fields")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conles",
        description="Sliding-window alignment of event logs against Petri-net process models.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="align every trace with the sliding-window aligner")
    _add_search_flags(check)
    _add_output_flags(check)
    check.add_argument("--window-length", "-L", type=int, help="events per window")
    check.add_argument("--candidates", "-N", type=int, help="candidates kept between windows")
    check.add_argument("--ranking", choices=[m.value for m in RankingMode], help="candidate ranking key")
    check.add_argument("--oracle-fallback", action="store_true", help="exact search for traces fitting one window")

    oracle = commands.add_parser("oracle", help="align every trace with exact A*")
    _add_search_flags(oracle)
    _add_output_flags(oracle)

    bench = commands.add_parser("bench", help="window-length sweep against the oracle")
    _add_search_flags(bench)
    bench.add_argument("--windows", type=_int_list, help="window lengths, e.g. 5,10,25,50")
    bench.add_argument("--candidates", type=_int_list, help="candidate counts, e.g. 2,3")
    bench.add_argument("--ranking", choices=[m.value for m in RankingMode], help="candidate ranking key")
    bench.add_argument("--repeat", type=int, help="runs averaged per record")
    bench.add_argument("--omit-timings", action="store_true", help="zero wall-clock columns")
    bench.add_argument("--output", type=Path, help="CSV destination instead of stdout")
    bench.add_argument("--summary", type=Path, help="also write the per-setting summary CSV")

    gen = commands.add_parser("gen", help="generate a synthetic log from a model")
    gen.add_argument("model", type=Path)
    gen.add_argument("--traces", type=int, default=10)
    gen.add_argument("--noise", type=_noise, default=NoiseSpec(), help="insert,delete,substitute")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--max-len", type=int, default=50)
    gen.add_argument("--output", type=Path)

    return parser


def apply_overrides(config: Config, args: argparse.Namespace) -> Config:
    """Command-line values win over environment values."""
    def given(name: str):
        return getattr(args, name, None)

    search = config.conles.search
    if given("timeout") is not None:
        search = replace(search, timeout_seconds=args.timeout)
    if given("state_cap") is not None:
        search = replace(search, state_cap=args.state_cap)

    conles = replace(config.conles, search=search)
    if args.command == "check":
        if given("window_length") is not None:
            conles = replace(conles, window_length=args.window_length)
        if given("candidates") is not None:
            conles = replace(conles, candidates=args.candidates)
        if given("oracle_fallback"):
            conles = replace(conles, oracle_fallback=True)
    if given("ranking") is not None:
        conles = replace(conles, ranking=RankingMode(args.ranking))

    bench = config.bench
    if args.command == "bench":
        bench = BenchConfig(
            windows=args.windows or bench.windows,
            candidates=args.candidates or bench.candidates,
            repeat=args.repeat if args.repeat is not None else bench.repeat,
            omit_timings=args.omit_timings or bench.omit_timings,
        )

    run = config.run
    if given("jobs") is not None:
        run = replace(run, jobs=args.jobs)
    if given("format") is not None:
        run = replace(run, output_format=args.format)
    if given("no_progress"):
        run = replace(run, show_progress=False)
    if args.command in ("check", "oracle") and args.omit_timings:
        run = replace(run, omit_timings=True)

    log_config = config.log
    if args.verbose:
        log_config = replace(log_config, level="DEBUG" if args.verbose > 1 else "INFO")

    return replace(config, conles=conles, bench=bench, run=run, log=log_config)


def _emit(data: bytes, destination: Optional[Path]) -> None:
    if destination is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        destination.write_bytes(data)


def cmd_align(args: argparse.Namespace, config: Config, method: str) -> int:
    """check and oracle: one result per case plus a summary line on stderr."""
    model = load_pnml(args.model)
    log = load_log(args.log, args.log_format)
    if config.conles.search.timeout_seconds == 0:
        logger.warning("timeout is 0, every trace will time out")

    service = AlignmentService(model, config.conles, config.run)
    results = service.align_log(log, method)
    _emit(write_alignments(results, config.run.output_format), args.output)
    print(RunSummary.of(results).line(), file=sys.stderr)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, config: Config) -> int:
    model = load_pnml(args.model)
    log = load_log(args.log, args.log_format)
    frame = BenchmarkService(model, config.conles, config.bench, config.run).run(log)
    _emit(to_csv(frame), args.output)

    summary = summarize(frame)
    logger.info("bench summary:\n%s", summary.to_string(index=False))
    if args.summary is not None:
        args.summary.write_bytes(to_csv(summary))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, config: Config) -> int:
    if args.traces < 0 or args.max_len < 0:
        print("error: --traces and --max-len must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    model = load_pnml(args.model)
    log = generate_log(model, args.traces, args.noise, args.max_len, args.seed)
    _emit(write_log_lines(log), args.output)
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, config: Optional[Config] = None) -> int:
    """Parse, configure and dispatch. Returns the process exit code."""
    args = build_parser().parse_args(argv)
    config = apply_overrides(config or Config.from_environment(), args)

    is_valid, errors = config.validate()
    if not is_valid:
        print("Configuration errors:\n" + "\n".join(f"  {e}" for e in errors), file=sys.stderr)
        return EXIT_INPUT
    config.log.apply()
    logger.debug("configuration: %s", config.as_dict())

    try:
        if args.command == "check":
            return cmd_align(args, config, "conles")
        if args.command == "oracle":
            return cmd_align(args, config, "oracle")
        if args.command == "bench":
            return cmd_bench(args, config)
        return cmd_gen(args, config)

    except (InvariantViolation, NamespaceCollision) as e:
        logger.exception("internal error")
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ParseError, ValidationError, GenerationStuck, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
