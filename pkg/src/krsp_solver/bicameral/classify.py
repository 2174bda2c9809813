"""Bicameral cycle classification against the current delay/cost slack."""

from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from krsp_solver.flow.residual import ResidualGraph
from krsp_solver.graph.core import Cycle, PathSet


class CycleClass(StrEnum):
    TYPE0 = "type0"
    TYPE1 = "type1"
    TYPE2 = "type2"
    NON_BICAMERAL = "nonBicameral"

    @property
    def is_bicameral(self) -> bool:
        return self is not CycleClass.NON_BICAMERAL


@dataclass(frozen=True)
class SearchContext:
    """Residual graph plus the slack values a bicameral search is measured against.

    ``delta_d = D - delay`` is negative while a search is requested;
    ``delta_c = c_hat - cost`` uses the estimate ``c_hat`` in place of the
    unknown optimum.
    """

    residual: ResidualGraph
    delta_d: int
    c_hat: int
    delta_c: int
    bmax: int

    def __post_init__(self) -> None:
        if self.delta_d >= 0:
            raise ValueError(f"search requested with nonnegative delay slack {self.delta_d}")
        if self.bmax < 1:
            raise ValueError(f"bmax must be at least 1, got {self.bmax}")

    @classmethod
    def for_paths(
        cls,
        residual: ResidualGraph,
        paths: PathSet,
        c_hat: int,
        bmax: int | None = None,
    ) -> "SearchContext":
        return cls(
            residual=residual,
            delta_d=residual.base.D - paths.total_delay,
            c_hat=c_hat,
            delta_c=c_hat - paths.total_cost,
            bmax=bmax if bmax is not None else max(c_hat, 1),
        )

    @property
    def ratio(self) -> Fraction | None:
        """delta_d / delta_c, undefined when delta_c = 0."""
        return Fraction(self.delta_d, self.delta_c) if self.delta_c else None


def classify_cycle(o: Cycle, ctx: SearchContext) -> CycleClass:
    """Classify a residual cycle.

    type0: improves delay without raising cost or vice versa.
    type1: d < 0, 0 < c <= c_hat, d/c <= delta_d/delta_c.
    type2: d >= 0, -c_hat <= c < 0, d/c > delta_d/delta_c. The strict
    comparison keeps the ratio delta_d/delta_c strictly increasing whenever a
    type-2 cycle is applied.

    With delta_c = 0 the target ratio is minus infinity: no type-1 cycle
    exists and every type-2-shaped cycle qualifies.
    """
    d, c = o.delay, o.cost
    if d == 0 and c == 0:
        return CycleClass.NON_BICAMERAL
    if (d < 0 and c <= 0) or (d <= 0 and c < 0):
        return CycleClass.TYPE0
    ratio = ctx.ratio
    if d < 0 and 0 < c <= ctx.c_hat and ratio is not None and Fraction(d, c) <= ratio:
        return CycleClass.TYPE1
    if d >= 0 and -ctx.c_hat <= c < 0 and (ratio is None or Fraction(d, c) > ratio):
        return CycleClass.TYPE2
    return CycleClass.NON_BICAMERAL
