"""
Centralized configuration management.
Single source of truth for all engine and command settings.
"""

from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Optional
import logging
import os


class RankingMode(Enum):
    """How retained candidates are ranked between windows."""

    UNREACHABLE = "unreachable"  # accumulated + unreachable remaining events
    MARGINAL = "marginal"        # accumulated + full marginal lower bound
    ACCUMULATED = "accumulated"  # accumulated cost only


@dataclass(frozen=True)
class SearchConfig:
    """Limits shared by every search."""

    state_cap: int = 1_000_000
    timeout_seconds: Optional[float] = 120.0


@dataclass(frozen=True)
class ConLESConfig:
    """Sliding-window aligner configuration."""

    window_length: int = 50
    candidates: int = 3
    ranking: RankingMode = RankingMode.UNREACHABLE
    oracle_fallback: bool = False
    search: SearchConfig = field(default_factory=SearchConfig)

    def echo(self) -> dict[str, Any]:
        """Flat view for result files."""
        return {
            "window_length": self.window_length,
            "candidates": self.candidates,
            "ranking": self.ranking.value,
            "oracle_fallback": self.oracle_fallback,
            "state_cap": self.search.state_cap,
            "timeout_seconds": self.search.timeout_seconds,
        }

    def validate(self) -> list[str]:
        errors = []
        if self.window_length < 1:
            errors.append("window length must be at least 1")
        if self.candidates < 1:
            errors.append("candidates must be at least 1")
        if self.search.state_cap < 1:
            errors.append("state cap must be positive")
        if self.search.timeout_seconds is not None and self.search.timeout_seconds < 0:
            errors.append("timeout must be non-negative")
        return errors


@dataclass(frozen=True)
class BenchConfig:
    """Window-sweep benchmark configuration."""

    windows: tuple[int, ...] = (5, 10, 25, 50)
    candidates: tuple[int, ...] = (2, 3)
    repeat: int = 1
    omit_timings: bool = False


@dataclass(frozen=True)
class RunConfig:
    """Command execution settings."""

    jobs: int = 1
    output_format: str = "json"
    show_progress: bool = True
    omit_timings: bool = False


@dataclass(frozen=True)
class LoggingConfig:
    """Logging configuration."""

    level: str = "WARNING"
    format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    def apply(self) -> None:
        logging.basicConfig(level=self.level.upper(), format=self.format)


@dataclass(frozen=True)
class Config:
    """
    Master configuration container.
    Immutable after initialization for thread safety.
    """

    conles: ConLESConfig = field(default_factory=ConLESConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)
    run: RunConfig = field(default_factory=RunConfig)
    log: LoggingConfig = field(default_factory=LoggingConfig)
    env_errors: tuple[str, ...] = ()

    @classmethod
    def from_environment(cls) -> "Config":
        """
        Build configuration from environment variables.
        Unparsable values are collected and reported by validate().
        """
        errors: list[str] = []

        def read(name: str, convert, default):
            raw = os.getenv(name)
            if raw is None or raw == "":
                return default
            try:
                return convert(raw)
            except ValueError:
                errors.append(f"{name}={raw!r} is not valid")
                return default

        search = SearchConfig(
            state_cap=read("CONLES_STATE_CAP", int, SearchConfig.state_cap),
            timeout_seconds=read("CONLES_TIMEOUT", float, SearchConfig.timeout_seconds),
        )
        conles = ConLESConfig(
            window_length=read("CONLES_WINDOW_LENGTH", int, ConLESConfig.window_length),
            candidates=read("CONLES_CANDIDATES", int, ConLESConfig.candidates),
            ranking=read("CONLES_RANKING", RankingMode, ConLESConfig.ranking),
            search=search,
        )
        run = RunConfig(jobs=read("CONLES_JOBS", int, RunConfig.jobs))
        log_config = LoggingConfig(level=os.getenv("CONLES_LOG_LEVEL", LoggingConfig.level))

        return cls(conles=conles, run=run, log=log_config, env_errors=tuple(errors))

    def validate(self) -> tuple[bool, list[str]]:
        """
        Validate configuration completeness.
        Returns (is_valid, error_messages).
        """
        errors = list(self.env_errors)
        errors.extend(self.conles.validate())

        if self.run.jobs < 1:
            errors.append("jobs must be at least 1")
        if self.run.output_format not in ("json", "tsv"):
            errors.append(f"unknown output format: {self.run.output_format}")
        if self.bench.repeat < 1:
            errors.append("repeat must be at least 1")
        if any(w < 1 for w in self.bench.windows):
            errors.append("benchmark window lengths must be positive")
        if any(c < 1 for c in self.bench.candidates):
            errors.append("benchmark candidate counts must be positive")
        if not isinstance(logging.getLevelName(self.log.level.upper()), int):
            errors.append(f"unknown log level: {self.log.level}")

        return len(errors) == 0, errors

    def as_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["conles"]["ranking"] = self.conles.ranking.value
        return data
