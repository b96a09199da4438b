"""Dense linear programs and a two-phase tableau simplex solver.

The solver targets the small, highly degenerate LPs of the ski-rental
reduction (tens of variables). It always pivots with Bland's rule, so it
cannot cycle, and it checks the final point by direct substitution into the
original rows rather than trusting the tableau.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import NumericalFailure, ValidationError

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-7
REPORT_TOL = 1e-9
LOSS_TOL = 1e-6
MAX_ITER = 50_000

RELATIONS = ("<=", "=", ">=")


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class Constraint:
    coeffs: np.ndarray
    relation: str
    rhs: float
    name: str = ""


@dataclass
class LinearProgram:
    """``sense`` ``objective . x`` subject to rows and per-variable bounds.

    Variables are addressed by label. Lower bounds default to 0 and upper
    bounds to +inf; pass ``lower=-inf`` for a free variable.
    """

    labels: list[str]
    sense: str = "min"
    objective: np.ndarray = None
    constraints: list[Constraint] = field(default_factory=list)
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.labels = list(self.labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("LP variable labels must be unique")
        if self.sense not in ("min", "max"):
            raise ValidationError(f"unknown sense {self.sense!r}")
        n = len(self.labels)
        self.objective = np.zeros(n) if self.objective is None else np.asarray(self.objective, float)
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, float)
        self.upper = np.full(n, math.inf) if self.upper is None else np.asarray(self.upper, float)
        for arr, what in ((self.objective, "objective"), (self.lower, "lower"), (self.upper, "upper")):
            if arr.shape != (n,):
                raise ValidationError(f"{what} has shape {arr.shape}, expected ({n},)")
        self._index = {lab: k for k, lab in enumerate(self.labels)}

    @property
    def num_vars(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    def _vector(self, coeffs) -> np.ndarray:
        if isinstance(coeffs, Mapping):
            row = np.zeros(self.num_vars)
            for lab, a in coeffs.items():
                row[self._index[lab]] += a
            return row
        row = np.asarray(coeffs, float)
        if row.shape != (self.num_vars,):
            raise ValidationError(f"row has length {row.size}, expected {self.num_vars}")
        return row

    def set_objective(self, coeffs, sense: str | None = None) -> None:
        self.objective = self._vector(coeffs)
        if sense is not None:
            if sense not in ("min", "max"):
                raise ValidationError(f"unknown sense {sense!r}")
            self.sense = sense

    def add_constraint(self, coeffs, relation: str, rhs: float, name: str = "") -> None:
        if relation not in RELATIONS:
            raise ValidationError(f"unknown relation {relation!r}")
        self.constraints.append(Constraint(self._vector(coeffs), relation, float(rhs), name))

    def set_bounds(self, label: str, lower: float = 0.0, upper: float = math.inf) -> None:
        if lower > upper:
            raise ValidationError(f"empty bounds for {label}: [{lower}, {upper}]")
        k = self._index[label]
        self.lower[k] = lower
        self.upper[k] = upper

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Per-row constraint violation at ``x`` (0 when satisfied)."""
        out = np.empty(len(self.constraints))
        for r, con in enumerate(self.constraints):
            lhs = float(con.coeffs @ x)
            if con.relation == "<=":
                out[r] = max(0.0, lhs - con.rhs)
            elif con.relation == ">=":
                out[r] = max(0.0, con.rhs - lhs)
            else:
                out[r] = abs(lhs - con.rhs)
        return out

    def bound_violation(self, x: np.ndarray) -> float:
        if x.size == 0:
            return 0.0
        return float(max(np.max(self.lower - x, initial=0.0), np.max(x - self.upper, initial=0.0)))

    def value(self, x: np.ndarray) -> float:
        return float(self.objective @ x)

    def dumps(self, title: str = "") -> str:
        """Equation-per-line text rendering in the usual LP-file layout."""

        def expr(row) -> str:
            terms = [(a, lab) for a, lab in zip(row, self.labels) if a != 0.0]
            if not terms:
                return "0"
            parts = []
            for k, (a, lab) in enumerate(terms):
                sign = "-" if a < 0 else ("+" if k else "")
                mag = abs(a)
                coef = "" if mag == 1.0 else f"{mag:.9g} "
                parts.append(f"{sign} {coef}{lab}".strip() if sign else f"{coef}{lab}")
            return " ".join(parts)

        lines = []
        if title:
            lines.append(f"\\ {title}")
        lines.append("Minimize" if self.sense == "min" else "Maximize")
        lines.append(f" obj: {expr(self.objective)}")
        lines.append("Subject To")
        for r, con in enumerate(self.constraints):
            name = con.name or f"r{r}"
            lines.append(f" {name}: {expr(con.coeffs)} {con.relation} {con.rhs:.9g}")
        lines.append("Bounds")
        for lab, lo, hi in zip(self.labels, self.lower, self.upper):
            if lo == 0.0 and math.isinf(hi):
                continue
            if math.isinf(lo) and math.isinf(hi):
                lines.append(f" {lab} free")
            elif lo == hi:
                lines.append(f" {lab} = {lo:.9g}")
            else:
                lo_s = "-inf" if math.isinf(lo) else f"{lo:.9g}"
                hi_s = "+inf" if math.isinf(hi) else f"{hi:.9g}"
                lines.append(f" {lo_s} <= {lab} <= {hi_s}")
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass
class LpSolution:
    status: Status
    values: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0
    labels: Sequence[str] = ()

    @property
    def ok(self) -> bool:
        return self.status is Status.OPTIMAL

    def __getitem__(self, label: str) -> float:
        return float(self.values[list(self.labels).index(label)])

    def as_dict(self) -> dict[str, float]:
        return {lab: float(v) for lab, v in zip(self.labels, self.values)}


class _StandardForm:
    """``min c.y  s.t.  A y = b, y >= 0, b >= 0`` plus the map back to ``x``.

    Each original variable is ``x_j = offset_j + sum_k M[j, k] y_k``.
    """

    def __init__(self, lp: LinearProgram):
        n = lp.num_vars
        cols: list[tuple[int, float]] = []  # (original var, sign)
        offset = np.zeros(n)
        extra_rows: list[tuple[int, float]] = []  # (column, upper bound on it)
        for j in range(n):
            lo, hi = lp.lower[j], lp.upper[j]
            if math.isfinite(lo):
                offset[j] = lo
                cols.append((j, 1.0))
                if math.isfinite(hi):
                    extra_rows.append((len(cols) - 1, hi - lo))
            elif math.isfinite(hi):
                offset[j] = hi
                cols.append((j, -1.0))
            else:
                cols.append((j, 1.0))
                cols.append((j, -1.0))
        M = np.zeros((n, len(cols)))
        for k, (j, s) in enumerate(cols):
            M[j, k] = s
        self.M = M
        self.offset = offset

        rows, rels, rhs = [], [], []
        for con in lp.constraints:
            rows.append(con.coeffs @ M)
            rels.append(con.relation)
            rhs.append(con.rhs - float(con.coeffs @ offset))
        for k, ub in extra_rows:
            row = np.zeros(len(cols))
            row[k] = 1.0
            rows.append(row)
            rels.append("<=")
            rhs.append(ub)

        sign = 1.0 if lp.sense == "min" else -1.0
        self.cost = sign * (lp.objective @ M)
        self.const = sign * float(lp.objective @ offset)
        self.sign = sign
        self.A = np.array(rows).reshape(len(rows), len(cols))
        self.rels = rels
        self.b = np.array(rhs, dtype=float)

    def to_original(self, y: np.ndarray) -> np.ndarray:
        return self.offset + self.M @ y


class _Tableau:
    def __init__(self, A: np.ndarray, rels: list[str], b: np.ndarray, n_struct: int):
        m = A.shape[0]
        A = A.copy()
        b = b.copy()
        rels = list(rels)
        for r in range(m):
            if b[r] < 0:
                A[r] *= -1.0
                b[r] *= -1.0
                rels[r] = {"<=": ">=", ">=": "<=", "=": "="}[rels[r]]

        n_slack = sum(1 for rel in rels if rel != "=")
        n_art = sum(1 for rel in rels if rel != "<=")
        width = n_struct + n_slack + n_art
        T = np.zeros((m, width + 1))
        T[:, :n_struct] = A
        T[:, -1] = b
        basis = np.empty(m, dtype=int)
        s = n_struct
        a = n_struct + n_slack
        for r, rel in enumerate(rels):
            if rel == "<=":
                T[r, s] = 1.0
                basis[r] = s
                s += 1
            elif rel == ">=":
                T[r, s] = -1.0
                s += 1
                T[r, a] = 1.0
                basis[r] = a
                a += 1
            else:
                T[r, a] = 1.0
                basis[r] = a
                a += 1
        self.T = T
        self.basis = basis
        self.n_struct = n_struct
        self.first_art = n_struct + n_slack
        self.iterations = 0

    @property
    def rhs(self) -> np.ndarray:
        return self.T[:, -1]

    def pivot(self, r: int, k: int) -> None:
        T = self.T
        T[r] /= T[r, k]
        col = T[:, k].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, k] = 0.0
        T[r, k] = 1.0
        T[np.abs(T) < 1e-14] = 0.0
        self.basis[r] = k
        self.iterations += 1

    def run(self, cost: np.ndarray, allowed: int) -> str:
        """Minimize ``cost`` over the first ``allowed`` columns with Bland's rule."""
        while True:
            if self.iterations > MAX_ITER:
                raise NumericalFailure("simplex iteration limit reached")
            cb = cost[self.basis]
            reduced = cost[:allowed] - cb @ self.T[:, :allowed]
            scale = max(1.0, float(np.max(np.abs(cost[:allowed]), initial=0.0)))
            candidates = np.flatnonzero(reduced < -PIVOT_TOL * scale)
            if candidates.size == 0:
                return "optimal"
            k = int(candidates[0])
            col = self.T[:, k]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return "unbounded"
            ratios = self.rhs[rows] / col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(tied[np.argmin(self.basis[tied])])
            self.pivot(r, k)

    def values(self, width: int) -> np.ndarray:
        y = np.zeros(self.T.shape[1] - 1)
        y[self.basis] = self.rhs
        return y[:width]

    def phase_one(self) -> float:
        """Drive artificials to zero; returns the remaining infeasibility."""
        width = self.T.shape[1] - 1
        if self.first_art == width:
            return 0.0
        cost = np.zeros(width)
        cost[self.first_art :] = 1.0
        self.run(cost, width)
        infeas = float(np.sum(self.values(width)[self.first_art :]))
        # pivot artificials out of the basis, dropping redundant rows
        keep = []
        for r in range(self.T.shape[0]):
            if self.basis[r] < self.first_art:
                keep.append(r)
                continue
            row = self.T[r, : self.first_art]
            nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
            if nz.size:
                self.pivot(r, int(nz[0]))
                keep.append(r)
        self.T = self.T[keep]
        self.basis = self.basis[keep]
        return infeas


def _phase_one(lp: LinearProgram):
    sf = _StandardForm(lp)
    tab = _Tableau(sf.A, sf.rels, sf.b, sf.A.shape[1])
    infeas = tab.phase_one()
    scale = max(1.0, float(np.max(np.abs(sf.b), initial=0.0)))
    return sf, tab, infeas <= FEAS_TOL * scale


def _check(lp: LinearProgram, x: np.ndarray) -> None:
    worst = float(np.max(lp.residuals(x), initial=0.0))
    if worst > LOSS_TOL:
        raise NumericalFailure(f"solution violates a constraint by {worst:.3g}")
    if lp.bound_violation(x) > LOSS_TOL:
        raise NumericalFailure("solution violates a variable bound")


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` with the two-phase simplex method."""
    sf, tab, feasible_ = _phase_one(lp)
    if not feasible_:
        return LpSolution(Status.INFEASIBLE, iterations=tab.iterations, labels=lp.labels)
    n_struct = sf.A.shape[1]
    cost = np.zeros(tab.T.shape[1] - 1)
    cost[:n_struct] = sf.cost
    outcome = tab.run(cost, tab.first_art)
    if outcome == "unbounded":
        return LpSolution(Status.UNBOUNDED, iterations=tab.iterations, labels=lp.labels)
    x = sf.to_original(tab.values(n_struct))
    # snap onto bounds that were hit up to rounding
    x = np.minimum(np.maximum(x, lp.lower), lp.upper)
    _check(lp, x)
    return LpSolution(Status.OPTIMAL, x, lp.value(x), tab.iterations, lp.labels)


def feasible(lp: LinearProgram) -> tuple[bool, np.ndarray | None]:
    """Phase one only: whether ``lp`` has a feasible point, and a witness."""
    sf, tab, ok = _phase_one(lp)
    if not ok:
        return False, None
    x = sf.to_original(tab.values(sf.A.shape[1]))
    x = np.minimum(np.maximum(x, lp.lower), lp.upper)
    _check(lp, x)
    return True, x
