"""Configuration settings for the kRSP solver."""

import logging
from fractions import Fraction
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

SolveMode = Literal["exact", "scaled"]
Phase1Mode = Literal["mincost", "lp-round"]
CycleSource = Literal["lp", "enumerate", "hybrid"]


def parse_rational(value: object) -> Fraction:
    """Turn ints, floats, Fractions and strings like "1/2" or "0.5" into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("boolean is not a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float | str):
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e
    raise ValueError(f"not a rational number: {value!r}")


class KrspSettings(BaseSettings):
    """kRSP solver configuration.

    Every field can be set through a KRSP_-prefixed environment variable or a
    .env file; CLI flags and tool arguments override them per call.
    """

    model_config = SettingsConfigDict(
        env_prefix="KRSP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        arbitrary_types_allowed=True,
    )

    # Solver defaults
    mode: SolveMode = Field(default="exact")
    phase1_mode: Phase1Mode = Field(default="mincost")
    cycle_source: CycleSource = Field(default="hybrid")
    epsilon1: Fraction = Field(default=Fraction(1, 2))
    epsilon2: Fraction = Field(default=Fraction(1, 2))
    ladder_growth: Fraction = Field(
        default=Fraction(3, 2),
        description="Ratio between consecutive C_OPT estimate rungs",
    )
    refine_estimate: bool = Field(
        default=True,
        description="Bisect between the last failing and the first accepted estimate rung",
    )
    max_iterations: int | None = Field(
        default=None,
        description="Hard cap on cancellation iterations per rung (default: D * sum c * sum d)",
    )
    lp_cache_size: int = Field(default=4096)

    # Oracle caps
    oracle_max_vertices: int = Field(default=10)
    oracle_max_edges: int = Field(default=16)
    cycle_enum_max_vertices: int = Field(default=12)

    # Benchmark suite defaults
    bench_count: int = Field(default=200)
    bench_min_vertices: int = Field(default=4)
    bench_max_vertices: int = Field(default=8)
    bench_k: int = Field(default=2)
    bench_max_cost: int = Field(default=5)
    bench_max_delay: int = Field(default=5)
    bench_seed: int = Field(default=1)

    # Tool server
    result_cache_size: int = Field(default=64)
    result_cache_ttl: int = Field(default=300)

    log_level: str = Field(default="INFO")

    @field_validator("epsilon1", "epsilon2", "ladder_growth", mode="before")
    @classmethod
    def validate_rational(cls, v: object) -> Fraction:
        """Accept "1/2", "0.5" or numbers."""
        return parse_rational(v)

    @field_validator("ladder_growth")
    @classmethod
    def validate_growth(cls, v: Fraction) -> Fraction:
        """Ladder must actually grow."""
        if v <= 1:
            raise ValueError("ladder_growth must be greater than 1")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalise to an upper-case logging level name."""
        level = v.strip().upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level: {v}")
        return level


# Global settings instance
settings = KrspSettings()
