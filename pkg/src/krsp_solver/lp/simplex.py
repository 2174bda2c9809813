"""Exact two-phase simplex over rationals with bounded variables and Bland's pivoting rule."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

logger = logging.getLogger(__name__)

LpStatus = Literal["optimal", "infeasible", "unbounded"]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LpRow:
    """A sparse constraint row ``sum coeffs[j] * x_j (= or <=) rhs``."""

    coeffs: dict[int, Fraction]
    rhs: Fraction


@dataclass
class LpProblem:
    """Minimise ``objective . x`` subject to equality, <= and bound constraints.

    Lower bounds default to 0 and upper bounds to none.
    """

    num_vars: int
    objective: list[Fraction]
    equalities: list[LpRow] = field(default_factory=list)
    inequalities: list[LpRow] = field(default_factory=list)
    lower: list[Fraction] = field(default_factory=list)
    upper: list[Fraction | None] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length does not match num_vars")
        if not self.lower:
            self.lower = [ZERO] * self.num_vars
        if not self.upper:
            self.upper = [None] * self.num_vars

    def add_equality(self, coeffs: dict[int, Fraction], rhs: Fraction | int) -> None:
        self.equalities.append(LpRow({j: Fraction(a) for j, a in coeffs.items() if a}, Fraction(rhs)))

    def add_inequality(self, coeffs: dict[int, Fraction], rhs: Fraction | int) -> None:
        self.inequalities.append(LpRow({j: Fraction(a) for j, a in coeffs.items() if a}, Fraction(rhs)))

    def is_feasible_point(self, x: list[Fraction]) -> bool:
        """Exact check of every row and bound at ``x``."""
        for j, value in enumerate(x):
            if value < self.lower[j]:
                return False
            bound = self.upper[j]
            if bound is not None and value > bound:
                return False
        for row in self.equalities:
            if sum(a * x[j] for j, a in row.coeffs.items()) != row.rhs:
                return False
        return all(
            sum(a * x[j] for j, a in row.coeffs.items()) <= row.rhs for row in self.inequalities
        )


@dataclass
class LpSolution:
    status: LpStatus
    values: list[Fraction] = field(default_factory=list)
    objective_value: Fraction | None = None


class _Tableau:
    """Dense simplex tableau; the last column holds the right-hand side.

    Upper bounds live in the ratio test. A column at its upper bound is
    stored complemented (u - y) and marked in ``flipped``, so every nonbasic
    column sits at 0.
    """

    def __init__(
        self,
        rows: list[list[Fraction]],
        basis: list[int],
        num_cols: int,
        upper: list[Fraction | None],
    ):
        self.rows = rows
        self.basis = basis
        self.num_cols = num_cols
        self.upper = upper
        self.flipped = [False] * num_cols
        self.obj: list[Fraction] = [ZERO] * (num_cols + 1)

    def price(self, costs: list[Fraction]) -> None:
        """Set the reduced-cost row for ``costs`` under the current basis."""
        costs = [-c if f else c for c, f in zip(costs, self.flipped, strict=True)]
        obj = list(costs) + [ZERO]
        for row, b in zip(self.rows, self.basis, strict=True):
            cb = costs[b]
            if cb:
                for j, a in enumerate(row):
                    if a:
                        obj[j] -= cb * a
        self.obj = obj

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        p = prow[c]
        if p != ONE:
            prow = [a / p for a in prow]
            self.rows[r] = prow
        support = [j for j, a in enumerate(prow) if a]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    for j in support:
                        row[j] -= f * prow[j]
        f = self.obj[c]
        if f:
            for j in support:
                self.obj[j] -= f * prow[j]
        self.basis[r] = c

    def flip(self, c: int) -> None:
        """Move nonbasic column ``c`` to its other bound."""
        bound = self.upper[c]
        assert bound is not None
        for row in self.rows:
            a = row[c]
            if a:
                row[-1] -= a * bound
                row[c] = -a
        d = self.obj[c]
        if d:
            self.obj[-1] -= d * bound
            self.obj[c] = -d
        self.flipped[c] = not self.flipped[c]

    def flip_basic(self, r: int) -> None:
        """Complement the basic column of row ``r`` so it can leave at its upper bound."""
        b = self.basis[r]
        bound = self.upper[b]
        assert bound is not None
        row = [-a for a in self.rows[r]]
        row[b] = ONE
        row[-1] += bound
        self.rows[r] = row
        self.flipped[b] = not self.flipped[b]

    def run(self, allowed: list[bool]) -> Literal["optimal", "unbounded"]:
        """Iterate Bland's rule to optimality or an unbounded ray."""
        while True:
            entering = next(
                (
                    j
                    for j in range(self.num_cols)
                    if allowed[j] and self.upper[j] != 0 and self.obj[j] < 0
                ),
                None,
            )
            if entering is None:
                return "optimal"
            best: tuple[Fraction, int, int, bool] | None = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                b = self.basis[i]
                if a > 0:
                    candidate = (row[-1] / a, b, i, False)
                elif a < 0 and self.upper[b] is not None:
                    candidate = ((self.upper[b] - row[-1]) / -a, b, i, True)
                else:
                    continue
                if best is None or candidate[:2] < best[:2]:
                    best = candidate
            own = self.upper[entering]
            if own is not None and (best is None or own <= best[0]):
                self.flip(entering)
                continue
            if best is None:
                return "unbounded"
            _, _, r, to_upper = best
            if to_upper:
                self.flip_basic(r)
            self.pivot(r, entering)

    def values(self) -> list[Fraction]:
        """Column values in the original (uncomplemented) orientation."""
        y = [ZERO] * self.num_cols
        for row, b in zip(self.rows, self.basis, strict=True):
            y[b] = row[-1]
        for j, f in enumerate(self.flipped):
            if f:
                bound = self.upper[j]
                assert bound is not None
                y[j] = bound - y[j]
        return y


def solve_lp(p: LpProblem) -> LpSolution:
    """Solve ``p`` exactly.

    Returns a basic optimal solution when one exists. Infeasible and
    unbounded problems are reported through ``status``; no tolerance is used
    anywhere.
    """
    n = p.num_vars
    shift = p.lower

    # Rows as (coeffs over y = x - lower, sense, rhs); sense is "=" or "<=".
    raw: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for row, sense in [(r, "=") for r in p.equalities] + [(r, "<=") for r in p.inequalities]:
        rhs = row.rhs - sum(a * shift[j] for j, a in row.coeffs.items())
        raw.append((row.coeffs, sense, rhs))
    upper: list[Fraction | None] = []
    for j in range(n):
        bound = p.upper[j]
        if bound is not None and bound < shift[j]:
            return LpSolution(status="infeasible")
        upper.append(None if bound is None else bound - shift[j])

    num_slack = sum(1 for _, sense, _ in raw if sense == "<=")
    slack_base = n
    art_base = n + num_slack
    needs_art = [sense == "=" or rhs < 0 for _, sense, rhs in raw]
    num_art = sum(needs_art)
    num_cols = art_base + num_art

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    slack_col = slack_base
    art_col = art_base
    for (coeffs, sense, rhs), artificial in zip(raw, needs_art, strict=True):
        row = [ZERO] * (num_cols + 1)
        for j, a in coeffs.items():
            row[j] = a
        slack = None
        if sense == "<=":
            slack = slack_col
            row[slack] = ONE
            slack_col += 1
        row[-1] = rhs
        if rhs < 0:
            row = [-a for a in row]
        if artificial:
            row[art_col] = ONE
            basis.append(art_col)
            art_col += 1
        else:
            basis.append(slack)  # type: ignore[arg-type]
        rows.append(row)

    tableau = _Tableau(rows, basis, num_cols, upper + [None] * (num_cols - n))

    if num_art:
        phase1 = [ZERO] * art_base + [ONE] * num_art
        tableau.price(phase1)
        tableau.run([True] * num_cols)
        residual = sum(
            (row[-1] for row, b in zip(tableau.rows, tableau.basis, strict=True) if b >= art_base),
            ZERO,
        )
        if residual > 0:
            logger.debug(f"LP infeasible: phase 1 residual {residual}")
            return LpSolution(status="infeasible")
        redundant = []
        for i in range(len(tableau.rows)):
            if tableau.basis[i] >= art_base:
                column = next(
                    (j for j in range(art_base) if tableau.rows[i][j] != 0), None
                )
                if column is None:
                    redundant.append(i)
                else:
                    tableau.pivot(i, column)
        for i in reversed(redundant):
            del tableau.rows[i]
            del tableau.basis[i]

    costs = list(p.objective) + [ZERO] * (num_cols - n)
    tableau.price(costs)
    allowed = [j < art_base for j in range(num_cols)]
    if tableau.run(allowed) == "unbounded":
        return LpSolution(status="unbounded")

    y = tableau.values()
    values = [shift[j] + y[j] for j in range(n)]
    objective_value = sum((c * x for c, x in zip(p.objective, values, strict=True)), ZERO)
    return LpSolution(status="optimal", values=values, objective_value=objective_value)
