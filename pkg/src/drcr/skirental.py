"""LP formulations of the ski-rental problem with prediction intervals.

The optimal randomized algorithm is the solution of a finite LP over
purchase-day probabilities ``f_t`` (``t`` in ``S``) and consistencies
``c_1..c_{n+1}``, with one cost constraint per instance day ``tau`` in
``T``. Its dual, with the objective turned into a target constraint, gives
a linear description of the accuracies ``delta`` for which the optimal DRCR
is at least a given value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


from . import evaluate, lp
from .errors import InfeasibleInput, NumericalFailure, SolverError
from .model import (
    ProblemSpec,
    PurchaseDistribution,
    interval_shell,
    shell_index,
    validate_intervals,
)

CHECK_TOL = 1e-7


def robustness_optimum(B: int) -> float:
    """Best competitive ratio of any randomized algorithm, ``B^B / (B^B - (B-1)^B)``."""
    if B < 2:
        raise ValueError(f"buy cost must be at least 2, got {B}")
    # 1 - (1 - 1/B)^B, without cancellation for large B
    return -1.0 / math.expm1(B * math.log1p(-1.0 / B))


@dataclass(frozen=True)
class SupportSets:
    S: tuple[int, ...]
    T: tuple[int, ...]
    case_tag: str  # "B<u_n" or "u_n<=B"


def _support_sets(B: int, intervals: Sequence[tuple[int, int]]) -> SupportSets:
    uppers = [hi for _, hi in intervals]
    if uppers and B < uppers[-1]:
        j = next(k for k, u in enumerate(uppers) if u > B)
        S = set(range(1, B + 1)) | {u + 1 for u in uppers[j:]}
        T = set(range(1, B + 1)) | {lo - 1 for lo, _ in intervals} | set(uppers) | {uppers[-1] + 1}
        tag = "B<u_n"
    else:
        S = set(range(1, B + 1))
        T = set(range(1, B + 2))
        tag = "u_n<=B"
    # When some u_i equals B, day B+1 sits in a strictly wider shell than
    # day B, so mass bought after B cannot always be pulled back onto B.
    if B in uppers:
        S.add(B + 1)
    T.discard(0)
    return SupportSets(tuple(sorted(S)), tuple(sorted(T)), tag)


def support_sets(spec: ProblemSpec) -> SupportSets:
    return _support_sets(spec.buy_cost, spec.profile.intervals)


def _primal(spec: ProblemSpec, S: Sequence[int], T: Sequence[int]) -> lp.LinearProgram:
    B = spec.buy_cost
    n = spec.profile.n
    f = [f"f_{t}" for t in S]
    c = [f"c_{i}" for i in range(1, n + 2)]
    prog = lp.LinearProgram(f + c, sense="min")
    prog.set_objective(dict(zip(c, spec.profile.weights())))
    for tau in T:
        i = shell_index(spec.profile, tau)
        # sum_{t<=tau} (t-1+B) f_t + tau (1 - sum_{t<=tau} f_t) <= min(tau,B) c_i
        row = {f"f_{t}": (t - 1 + B) - tau for t in S if t <= tau}
        row[f"c_{i}"] = -min(tau, B)
        prog.add_constraint(row, "<=", -tau, name=f"x_{tau}")
    for i in range(1, n + 1):
        prog.add_constraint({f"c_{i}": 1.0, f"c_{i + 1}": -1.0}, "<=", 0.0, name=f"y_{i}")
    prog.add_constraint({name: 1.0 for name in f}, "=", 1.0, name="z")
    return prog


def build_primal(spec: ProblemSpec) -> lp.LinearProgram:
    """The reduced LP over ``S`` and ``T``."""
    sets = support_sets(spec)
    return _primal(spec, sets.S, sets.T)


def dense_horizon(spec: ProblemSpec) -> int:
    u = spec.profile.outer_upper or 0
    return max(spec.buy_cost, u) + 1


def build_dense_oracle(spec: ProblemSpec, horizon: int | None = None) -> lp.LinearProgram:
    """Truncation of the infinite LP to every day ``1..H``.

    With ``H = max(B, u_n) + 1`` nothing is lost: past ``u_n`` and ``B`` all
    constraints share the right-hand side ``B c_{n+1}``, so purchase mass can
    be pushed down to ``H`` and later constraints repeat the one at ``H``.
    """
    H = dense_horizon(spec) if horizon is None else horizon
    days = range(1, H + 1)
    return _primal(spec, days, days)


def build_dual(spec: ProblemSpec) -> lp.LinearProgram:
    B = spec.buy_cost
    prof = spec.profile
    n = prof.n
    sets = support_sets(spec)
    x = [f"x_{tau}" for tau in sets.T]
    y = [f"y_{i}" for i in range(1, n + 1)]
    prog = lp.LinearProgram(x + y + ["z"], sense="max")
    prog.set_bounds("z", -math.inf, math.inf)
    prog.set_objective({"z": 1.0, **{f"x_{tau}": float(tau) for tau in sets.T}})
    for t in sets.S:
        row = {f"x_{tau}": tau - (t - 1 + B) for tau in sets.T if tau >= t}
        row["z"] = 1.0
        prog.add_constraint(row, "<=", 0.0, name=f"f_{t}")
    shell = {tau: shell_index(prof, tau) for tau in sets.T}
    for i, w in enumerate(prof.weights(), start=1):
        row = {f"x_{tau}": float(min(tau, B)) for tau in sets.T if shell[tau] == i}
        if i > 1:
            row[f"y_{i - 1}"] = 1.0
        if i <= n:
            row[f"y_{i}"] = -1.0
        prog.add_constraint(row, "<=", w, name=f"c_{i}")
    return prog


@dataclass
class AccuracySystem:
    """Linear system in ``(x, y, delta)`` whose ``delta``-projection is the set
    of accuracies with optimal DRCR at least ``target``."""

    program: lp.LinearProgram
    target: float | None
    intervals: tuple[tuple[int, int], ...]
    sets: SupportSets

    @property
    def n(self) -> int:
        return len(self.intervals)

    def fixed(self, deltas: Sequence[float]) -> lp.LinearProgram:
        """Copy of the system with every ``delta_i`` pinned."""
        if len(deltas) != self.n:
            raise ValueError(f"expected {self.n} deltas, got {len(deltas)}")
        prog = lp.LinearProgram(
            self.program.labels,
            self.program.sense,
            self.program.objective.copy(),
            list(self.program.constraints),
            self.program.lower.copy(),
            self.program.upper.copy(),
        )
        for i, d in enumerate(deltas, start=1):
            prog.set_bounds(f"d_{i}", float(d), float(d))
        return prog

    def is_feasible(self, deltas: Sequence[float]) -> bool:
        ok, _ = lp.feasible(self.fixed(deltas))
        return ok


def build_accuracy_system(B: int, intervals, v: float | None) -> AccuracySystem:
    """Dual constraints with ``z`` eliminated and ``delta`` as variables.

    The purchase-day rows read
    ``v <= sum_{tau<t} tau x_tau + (t-1+B) sum_{tau>=t} x_tau``.
    With ``v=None`` the target becomes a variable ``v`` instead, so that
    maximizing it at fixed accuracies recovers the optimal DRCR.
    """
    intervals = validate_intervals(intervals)
    n = len(intervals)
    sets = _support_sets(B, intervals)
    x = [f"x_{tau}" for tau in sets.T]
    y = [f"y_{i}" for i in range(1, n + 1)]
    d = [f"d_{i}" for i in range(1, n + 1)]
    prog = lp.LinearProgram(x + y + d + ([] if v is not None else ["v"]), sense="min")
    for name in d:
        prog.set_bounds(name, 0.0, 1.0)
    for t in sets.S:
        row = {f"x_{tau}": float(tau if tau < t else t - 1 + B) for tau in sets.T}
        if v is None:
            row["v"] = -1.0
        prog.add_constraint(row, ">=", 0.0 if v is None else v, name=f"f_{t}")
    shell = {tau: interval_shell(intervals, tau) for tau in sets.T}
    for i in range(1, n + 2):
        row = {f"x_{tau}": float(min(tau, B)) for tau in sets.T if shell[tau] == i}
        rhs = 0.0
        # ... + y_{i-1} - y_i <= delta_{i-1} - delta_i, with delta_0 = 1, delta_{n+1} = 0
        if i > 1:
            row[f"y_{i - 1}"] = 1.0
            row[f"d_{i - 1}"] = -1.0
        else:
            rhs += 1.0
        if i <= n:
            row[f"y_{i}"] = -1.0
            row[f"d_{i}"] = 1.0
        prog.add_constraint(row, "<=", rhs, name=f"c_{i}")
    for i in range(1, n):
        prog.add_constraint({f"d_{i + 1}": 1.0, f"d_{i}": -1.0}, "<=", 0.0, name=f"chain_{i}")
    return AccuracySystem(prog, None if v is None else float(v), intervals, sets)


def build_critical_lp(B: int, lo: int, hi: int) -> lp.LinearProgram:
    """Minimize ``delta`` subject to the accuracy system at the optimal robustness."""
    system = build_accuracy_system(B, [(lo, hi)], robustness_optimum(B))
    prog = system.program
    prog.set_objective({"d_1": 1.0}, sense="min")
    return prog


def _lhs(f: dict[int, float], B: int, tau: int) -> float:
    bought = sum(p for t, p in f.items() if t <= tau)
    return sum((t - 1 + B) * p for t, p in f.items() if t <= tau) + tau * (1.0 - bought)


def canonicalize_distribution(
    dist: PurchaseDistribution, spec: ProblemSpec, c: Sequence[float] | None = None
) -> PurchaseDistribution:
    """Move purchase mass onto the support set without touching ``c``.

    Uses the elementary move "merge day ``tau+1`` into day ``tau``", which
    keeps every cost constraint satisfied whenever the right-hand side at
    ``tau`` is at least the one at ``tau+1``. ``c`` defaults to the
    algorithm's own consistencies.
    """
    B = spec.buy_cost
    prof = spec.profile
    c = evaluate.consistencies(dist, spec) if c is None else tuple(float(v) for v in c)
    if len(c) != prof.n + 1:
        raise InfeasibleInput(f"expected {prof.n + 1} consistencies, got {len(c)}")
    if any(a > b for a, b in zip(c, c[1:])):
        raise InfeasibleInput("consistencies must be non-decreasing")

    def rhs(tau: int) -> float:
        return min(tau, B) * c[shell_index(prof, tau) - 1]

    H = evaluate.horizon(dist, spec)
    f = dist.as_dict()

    def check() -> None:
        for tau in range(1, H + 1):
            gap = _lhs(f, B, tau) - rhs(tau)
            if gap > 1e-9 * max(1.0, rhs(tau)):
                raise InfeasibleInput(f"cost constraint at day {tau} violated by {gap:.3g}")

    check()

    def merge_down(top: int, bottom: int) -> None:
        # sweep tau* = top-1 .. bottom, folding f[tau*+1] into f[tau*]
        for tau in range(top - 1, bottom - 1, -1):
            mass = f.get(tau + 1, 0.0)
            if mass == 0.0:
                continue
            if rhs(tau) < rhs(tau + 1):
                return
            f[tau] = f.get(tau, 0.0) + mass
            del f[tau + 1]

    uppers = [hi for _, hi in prof.intervals]
    if uppers and B < uppers[-1]:
        j = next(k for k, u in enumerate(uppers) if u > B)
        merge_down(max(H, uppers[-1] + 1), uppers[-1] + 1)
        for k in range(len(uppers) - 2, j - 1, -1):
            merge_down(uppers[k + 1], uppers[k] + 1)
        merge_down(uppers[j], B)
    else:
        merge_down(max(H, B), B)

    check()
    target = set(support_sets(spec).S)
    stray = [t for t, p in f.items() if p > 0.0 and t not in target]
    if stray:
        raise NumericalFailure(f"canonical form left mass on days {stray}")
    return PurchaseDistribution.from_mapping(f)


@dataclass(frozen=True)
class OptimalDrcr:
    value: float
    algorithm: PurchaseDistribution
    breakdown: evaluate.DrcrBreakdown

    def to_json(self) -> dict:
        return {
            "drcr": self.value,
            "consistencies": list(self.breakdown.consistencies),
            "distribution": {str(t): p for t, p in self.algorithm.entries},
        }


def extract_algorithm(spec: ProblemSpec, sol: lp.LpSolution, S: Sequence[int]) -> PurchaseDistribution:
    probs = {t: max(sol[f"f_{t}"], 0.0) for t in S}
    total = sum(probs.values())
    return PurchaseDistribution.from_mapping({t: p / total for t, p in probs.items()})


def optimal_drcr(spec: ProblemSpec) -> OptimalDrcr:
    """Optimal randomized algorithm and its DRCR, cross-checked by direct evaluation."""
    sets = support_sets(spec)
    sol = lp.solve(_primal(spec, sets.S, sets.T))
    if not sol.ok:
        raise SolverError(f"primal LP reported {sol.status.value}")
    alg = extract_algorithm(spec, sol, sets.S)
    breakdown = evaluate.drcr(alg, spec)
    if abs(breakdown.drcr - sol.objective_value) > CHECK_TOL:
        raise NumericalFailure(
            f"LP value {sol.objective_value!r} disagrees with evaluated DRCR {breakdown.drcr!r}"
        )
    return OptimalDrcr(sol.objective_value, alg, breakdown)


def objective_value(prog: lp.LinearProgram) -> float:
    sol = lp.solve(prog)
    if not sol.ok:
        raise SolverError(f"LP reported {sol.status.value}")
    return sol.objective_value
