"""Exact rational linear feasibility with constructive infeasibility proofs.

A `LinearSystem` mixes `>=` and `==` rows over variables that are either
sign-restricted to be nonnegative or free. `solve_feasibility` runs phase
one of a two-phase simplex on a dense Fraction tableau using Bland's
entering and leaving rule, so it terminates on every input without any
degeneracy tolerance. If the artificial objective cannot be driven to
zero, the phase-one dual multipliers are returned as a Farkas certificate:
nonnegative on inequality rows, free on equality rows, combining the rows
into `y.A <= 0` on nonnegative variables (`= 0` on free ones) while
`y.b > 0`. `verify_outcome` checks either arm by direct substitution.

`maximize` exposes phase two for callers that need a vertex of a feasible
system under a linear objective; feasibility testing itself never uses it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .games import as_fraction

GE = ">="
EQ = "=="

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Fraction, ...]
    sense: str
    rhs: Fraction

    def __post_init__(self):
        if self.sense not in (GE, EQ):
            raise ValueError(f"row sense must be {GE!r} or {EQ!r}")
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))


def ge(coeffs, rhs=0) -> Row:
    return Row(tuple(coeffs), GE, rhs)


def eq(coeffs, rhs) -> Row:
    return Row(tuple(coeffs), EQ, rhs)


@dataclass(frozen=True)
class LinearSystem:
    num_vars: int
    rows: tuple[Row, ...]
    nonneg: tuple[bool, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        nonneg = tuple(bool(v) for v in self.nonneg)
        if len(nonneg) != self.num_vars:
            raise ValueError("nonneg mask length does not match variable count")
        for k, row in enumerate(rows):
            if len(row.coeffs) != self.num_vars:
                raise ValueError(f"row {k} has {len(row.coeffs)} coefficients, "
                                 f"expected {self.num_vars}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nonneg", nonneg)


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    multipliers: tuple[Fraction, ...]


FeasibilityOutcome = Feasible | Infeasible


def verify_outcome(system: LinearSystem, outcome: FeasibilityOutcome) -> bool:
    """Check either arm against the system by direct substitution."""
    if isinstance(outcome, Feasible):
        x = outcome.point
        if len(x) != system.num_vars:
            return False
        if any(system.nonneg[j] and x[j] < 0 for j in range(system.num_vars)):
            return False
        for row in system.rows:
            value = sum(c * v for c, v in zip(row.coeffs, x) if c)
            if row.sense == GE:
                if value < row.rhs:
                    return False
            elif value != row.rhs:
                return False
        return True
    if isinstance(outcome, Infeasible):
        y = outcome.multipliers
        if len(y) != len(system.rows):
            return False
        if any(yk < 0 for yk, row in zip(y, system.rows) if row.sense == GE):
            return False
        combined = [_ZERO] * system.num_vars
        for yk, row in zip(y, system.rows):
            if yk:
                for j, c in enumerate(row.coeffs):
                    if c:
                        combined[j] += yk * c
        for j, total in enumerate(combined):
            if system.nonneg[j]:
                if total > 0:
                    return False
            elif total != 0:
                return False
        return sum(yk * row.rhs for yk, row in zip(y, system.rows)) > 0
    raise TypeError(f"not a feasibility outcome: {outcome!r}")


class _Simplex:
    """Dense rational tableau over the standard equality form of a system.

    Free variables are split into positive and negative parts, `>=` rows
    get a surplus column, rows are sign-flipped so the right-hand side is
    nonnegative, and one artificial column per row provides the starting
    basis. Artificial columns never re-enter the basis; their reduced
    costs at the phase-one optimum encode the dual multipliers.
    """

    def __init__(self, system: LinearSystem):
        self.system = system
        ncols = 0
        self.plus: list[int] = []
        self.minus: list[int | None] = []
        for j in range(system.num_vars):
            self.plus.append(ncols)
            ncols += 1
            if system.nonneg[j]:
                self.minus.append(None)
            else:
                self.minus.append(ncols)
                ncols += 1
        surplus: list[int | None] = []
        for row in system.rows:
            if row.sense == GE:
                surplus.append(ncols)
                ncols += 1
            else:
                surplus.append(None)
        m = len(system.rows)
        self.art = list(range(ncols, ncols + m))
        ncols += m
        self.ncols = ncols
        self.is_art = [False] * ncols
        for col in self.art:
            self.is_art[col] = True

        self.T: list[list[Fraction]] = []
        self.b: list[Fraction] = []
        self.flip: list[int] = []
        for k, row in enumerate(system.rows):
            vec = [_ZERO] * ncols
            for j, c in enumerate(row.coeffs):
                if c:
                    vec[self.plus[j]] = c
                    mcol = self.minus[j]
                    if mcol is not None:
                        vec[mcol] = -c
            scol = surplus[k]
            if scol is not None:
                vec[scol] = -_ONE
            rhs = row.rhs
            if rhs < 0:
                vec = [-v for v in vec]
                rhs = -rhs
                self.flip.append(-1)
            else:
                self.flip.append(1)
            vec[self.art[k]] = _ONE
            self.T.append(vec)
            self.b.append(rhs)
        self.basis = list(self.art)
        self.objrow: list[Fraction] = []

    def _pivot(self, r: int, col: int) -> None:
        row = self.T[r]
        piv = row[col]
        if piv != 1:
            inv = _ONE / piv
            row = [v * inv if v else v for v in row]
            self.T[r] = row
            self.b[r] *= inv
        nonzero = [j for j, v in enumerate(row) if v]
        br = self.b[r]
        for r2, row2 in enumerate(self.T):
            if r2 == r:
                continue
            factor = row2[col]
            if factor:
                for j in nonzero:
                    row2[j] -= factor * row[j]
                if br:
                    self.b[r2] -= factor * br
        factor = self.objrow[col]
        if factor:
            objrow = self.objrow
            for j in nonzero:
                objrow[j] -= factor * row[j]
        self.basis[r] = col

    def _run(self) -> None:
        # Bland: enter the lowest-index improving column, leave on the
        # minimum ratio breaking ties by lowest basic variable index.
        objrow = self.objrow
        while True:
            enter = -1
            for j in range(self.ncols):
                if objrow[j] < 0 and not self.is_art[j]:
                    enter = j
                    break
            if enter < 0:
                return
            leave = -1
            best_ratio = None
            for r, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    ratio = self.b[r] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[r] < self.basis[leave])
                    ):
                        best_ratio = ratio
                        leave = r
            if leave < 0:
                raise ArithmeticError("objective is unbounded")
            self._pivot(leave, enter)

    def phase_one(self) -> Fraction:
        """Minimize the artificial total; returns the optimal value."""
        objrow = [_ZERO] * self.ncols
        for j in range(self.ncols):
            if self.is_art[j]:
                continue
            total = _ZERO
            for row in self.T:
                v = row[j]
                if v:
                    total += v
            if total:
                objrow[j] = -total
        self.objrow = objrow
        self._run()
        return sum(
            (self.b[r] for r in range(len(self.T)) if self.is_art[self.basis[r]]),
            _ZERO,
        )

    def farkas(self) -> tuple[Fraction, ...]:
        # Artificial column k carries cost 1, so its reduced cost there is
        # 1 - y_k; undo the sign flips applied when building the tableau.
        return tuple(
            self.flip[k] * (_ONE - self.objrow[self.art[k]])
            for k in range(len(self.system.rows))
        )

    def point(self) -> tuple[Fraction, ...]:
        xstd = [_ZERO] * self.ncols
        for r, col in enumerate(self.basis):
            xstd[col] = self.b[r]
        out = []
        for j in range(self.system.num_vars):
            v = xstd[self.plus[j]]
            mcol = self.minus[j]
            if mcol is not None:
                v -= xstd[mcol]
            out.append(v)
        return tuple(out)

    def _purge_artificials(self) -> None:
        # A basic artificial sits at zero after a successful phase one, but
        # later pivots in other rows could push it positive and silently
        # leave the feasible set. Swap each one for a structural column in
        # its row; a row with no structural entry left is redundant and can
        # never change again, so it is safe to keep.
        for r in range(len(self.T)):
            if not self.is_art[self.basis[r]]:
                continue
            row = self.T[r]
            for j in range(self.ncols):
                if row[j] and not self.is_art[j]:
                    self._pivot(r, j)
                    break

    def phase_two_max(self, objective) -> Fraction:
        self._purge_artificials()
        cost = [_ZERO] * self.ncols
        for j, c in enumerate(objective):
            c = as_fraction(c)
            if c:
                cost[self.plus[j]] = -c
                mcol = self.minus[j]
                if mcol is not None:
                    cost[mcol] = c
        objrow = list(cost)
        for r, row in enumerate(self.T):
            cb = cost[self.basis[r]]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        objrow[j] -= cb * v
        self.objrow = objrow
        self._run()
        return -sum(
            (cost[self.basis[r]] * self.b[r] for r in range(len(self.T))), _ZERO
        )


def solve_feasibility(system: LinearSystem) -> FeasibilityOutcome:
    """Return a feasible point or a Farkas infeasibility certificate.

    Exactly one arm is produced and it is re-verified by substitution
    before being returned, so a bug in the pivoting can never escape as a
    wrong answer.
    """
    simplex = _Simplex(system)
    if simplex.phase_one() > 0:
        outcome: FeasibilityOutcome = Infeasible(simplex.farkas())
    else:
        outcome = Feasible(simplex.point())
    if not verify_outcome(system, outcome):
        raise RuntimeError("solver produced an outcome that fails verification")
    return outcome


def maximize(system: LinearSystem, objective) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Maximize a linear objective over a feasible system.

    Returns `(value, point)` at an optimal vertex. Raises ValueError if
    the system is infeasible or the objective unbounded.
    """
    objective = tuple(objective)
    if len(objective) != system.num_vars:
        raise ValueError("objective length does not match variable count")
    simplex = _Simplex(system)
    if simplex.phase_one() > 0:
        raise ValueError("system is infeasible")
    try:
        value = simplex.phase_two_max(objective)
    except ArithmeticError:
        raise ValueError("objective is unbounded over the feasible set") from None
    point = simplex.point()
    if not verify_outcome(system, Feasible(point)):
        raise RuntimeError("optimizer left the feasible set")
    return value, point
