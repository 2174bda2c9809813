"""Independent re-check of the bicameral cycle definition."""

from typing import Protocol

from krsp_solver.graph.core import Cycle


class BicameralBudget(Protocol):
    @property
    def delta_d(self) -> int: ...

    @property
    def delta_c(self) -> int: ...

    @property
    def c_hat(self) -> int: ...


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def verify_bicameral(o: Cycle, ctx: BicameralBudget) -> bool:
    """True iff ``o`` is a type-0, type-1 or type-2 bicameral cycle under ``ctx``.

    Ratios are compared by integer cross-multiplication: the sign of
    d/c - dD/dC is sign(d*dC - dD*c) * sign(c*dC). When dC = 0 the target
    ratio is read as minus infinity.
    """
    d, c = o.delay, o.cost
    dD, dC, bound = ctx.delta_d, ctx.delta_c, ctx.c_hat
    if d == 0 and c == 0:
        return False
    if (d < 0 and c <= 0) or (d <= 0 and c < 0):
        return True
    if dC == 0:
        return d >= 0 and -bound <= c < 0
    above = _sign(d * dC - dD * c) * _sign(c * dC)
    if d < 0 and 0 < c <= bound and above <= 0:
        return True
    return d >= 0 and -bound <= c < 0 and above > 0
