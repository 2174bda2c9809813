"""Solver options and result models."""

from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from krsp_solver.bicameral.classify import CycleClass
from krsp_solver.config import CycleSource, Phase1Mode, SolveMode, parse_rational, settings
from krsp_solver.graph.core import PathSet


class SolverOptions(BaseModel):
    """Per-call solver options; unset fields fall back to the global settings."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mode: SolveMode = Field(default_factory=lambda: settings.mode)
    epsilon1: Fraction = Field(default_factory=lambda: settings.epsilon1)
    epsilon2: Fraction = Field(default_factory=lambda: settings.epsilon2)
    phase1_mode: Phase1Mode = Field(default_factory=lambda: settings.phase1_mode)
    cycle_source: CycleSource = Field(default_factory=lambda: settings.cycle_source)
    bmax: int | None = Field(default=None, ge=1, description="Override for the largest B swept")
    binary_search_b: bool = False
    trace: bool = Field(default=False, description="Log every iteration record at INFO")
    refine_estimate: bool = Field(default_factory=lambda: settings.refine_estimate)
    max_iterations: int | None = Field(default_factory=lambda: settings.max_iterations, ge=1)

    @field_validator("epsilon1", "epsilon2", mode="before")
    @classmethod
    def validate_rational(cls, v: object) -> Fraction:
        return parse_rational(v)

    @model_validator(mode="after")
    def check_epsilons(self) -> "SolverOptions":
        """Scaled mode needs strictly positive epsilons."""
        if self.mode == "scaled" and (self.epsilon1 <= 0 or self.epsilon2 <= 0):
            raise ValueError("scaled mode requires epsilon1 > 0 and epsilon2 > 0")
        return self


class IterationRecord(BaseModel):
    """One cancellation step.

    D and C describe the state before the cycle is applied. Applying the
    cycle yields D + cycle_delay - dropped_delay, where ``dropped_*`` are the
    sums of the leftover cycles discarded while re-extracting paths.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: int
    D: int
    C: int
    delta_d: int
    delta_c: int
    r: Fraction | None
    cycle: tuple[int, ...]
    cycle_cost: int
    cycle_delay: int
    kind: CycleClass
    dropped_cost: int = 0
    dropped_delay: int = 0
    path_edge_ids: tuple[tuple[int, ...], ...] = ()


class Solution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: Literal["solved", "infeasible"]
    paths: PathSet | None = None
    trace: tuple[IterationRecord, ...] = ()
    cost_estimate_used: int | None = None
    rungs_tried: tuple[int, ...] = ()

    @property
    def iterations(self) -> int:
        return len(self.trace)
