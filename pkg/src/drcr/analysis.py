"""Sweeps of the optimal DRCR over accuracy, shape checks and the critical
accuracy below which a single prediction interval starts to pay off."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import lp
from .errors import SolverError
from .model import ProblemSpec, validate_intervals
from .skirental import build_critical_lp, optimal_drcr, robustness_optimum

__all__ = [
    "CurveSeries",
    "ShapeReport",
    "robustness_optimum",
    "parse_grid",
    "drcr_curve",
    "check_shape",
    "critical_accuracy",
    "critical_accuracy_bisection",
]

BISECTION_ITERS = 60
PLATEAU_TOL = 1e-6


@dataclass(frozen=True)
class CurveSeries:
    deltas: tuple[float, ...]
    values: tuple[float, ...]
    spec_id: str

    def __post_init__(self):
        if len(self.deltas) != len(self.values):
            raise ValueError("deltas and values differ in length")
        if any(b <= a for a, b in zip(self.deltas, self.deltas[1:])):
            raise ValueError("curve deltas must be strictly increasing")

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.deltas, self.values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["delta", "optimal_drcr"])
        for d, v in self.points:
            w.writerow([f"{d:.9g}", f"{v:.9g}"])
        return buf.getvalue()


@dataclass(frozen=True)
class ShapeReport:
    monotone_ok: bool
    concave_ok: bool
    plateau_start: float | None
    max_violation: float


def parse_grid(text: str) -> list[float]:
    """``"a:b:step"`` -> ``[a, a+step, ..., b]`` (endpoint included when hit)."""
    try:
        a, b, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise ValueError(f"grid must look like a:b:step, got {text!r}") from None
    if step <= 0 or b < a:
        raise ValueError(f"grid {text!r} needs step > 0 and a <= b")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    # rounding keeps 0:1:0.01 on the decimal grid
    return [round(a + k * step, 12) for k in range(count)]


def drcr_curve(
    B: int,
    intervals,
    grid: Sequence[float],
    base_deltas: Sequence[float] | None = None,
    axis: int = 0,
    workers: int = 1,
) -> CurveSeries:
    """Optimal DRCR along one accuracy axis.

    For a single interval ``base_deltas`` is not needed. With several
    intervals, ``delta_{axis+1}`` sweeps ``grid`` while the others keep
    their ``base_deltas`` values; every point must stay monotone.
    """
    intervals = validate_intervals(intervals)
    n = len(intervals)
    if base_deltas is None:
        if n != 1:
            raise ValueError("base_deltas are required with more than one interval")
        base_deltas = [0.0]
    if not 0 <= axis < n:
        raise ValueError(f"axis {axis} outside 0..{n - 1}")
    grid = [float(g) for g in grid]
    if any(not 0.0 <= g <= 1.0 for g in grid):
        raise ValueError("grid values must lie in [0, 1]")

    def point(d: float) -> float:
        deltas = list(base_deltas)
        deltas[axis] = d
        return optimal_drcr(ProblemSpec.build(B, intervals, deltas)).value

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(point, grid))
    else:
        values = [point(d) for d in grid]
    spec_id = f"B={B} intervals={list(intervals)}"
    if n > 1:
        spec_id += f" sweep=delta_{axis + 1} base={list(base_deltas)}"
    return CurveSeries(tuple(grid), tuple(values), spec_id)


def check_shape(series: CurveSeries, tol: float = 1e-6) -> ShapeReport:
    """Monotonicity and chord concavity of a sampled curve.

    Every interior sample is compared with the chord between every pair of
    samples bracketing it.
    """
    x = np.asarray(series.deltas)
    y = np.asarray(series.values)
    if x.size < 3:
        raise ValueError("shape check needs at least three points")
    mono_gap = float(np.max(-(np.diff(y)), initial=0.0))

    worst_conc = 0.0
    for k in range(1, x.size - 1):
        left = np.arange(k)
        right = np.arange(k + 1, x.size)
        xl, yl = x[left][:, None], y[left][:, None]
        xr, yr = x[right][None, :], y[right][None, :]
        chord = yl + (yr - yl) * (x[k] - xl) / (xr - xl)
        worst_conc = max(worst_conc, float(np.max(chord - y[k])))

    final = y[-1]
    near = np.flatnonzero(np.abs(y - final) <= tol)
    # first index from which the curve stays at its final value
    plateau = None
    for k in near:
        if np.all(np.abs(y[k:] - final) <= tol):
            plateau = float(x[k])
            break
    return ShapeReport(
        monotone_ok=mono_gap <= tol,
        concave_ok=worst_conc <= tol,
        plateau_start=plateau,
        max_violation=max(mono_gap, worst_conc),
    )


def critical_accuracy(B: int, lo: int, hi: int) -> float:
    """Smallest ``delta`` at which the optimal DRCR reaches the optimal robustness."""
    sol = lp.solve(build_critical_lp(B, lo, hi))
    if not sol.ok:
        raise SolverError(f"critical-accuracy LP reported {sol.status.value}")
    return float(sol["d_1"])


def critical_accuracy_bisection(B: int, lo: int, hi: int, tol: float = 1e-9) -> float:
    """Bisection for the same threshold using only primal solves.

    Relies on the optimal DRCR being non-decreasing in ``delta``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    target = robustness_optimum(B) - 1e-9

    def saturated(d: float) -> bool:
        return optimal_drcr(ProblemSpec.build(B, [(lo, hi)], [d])).value >= target

    if saturated(0.0):
        return 0.0
    a, b = 0.0, 1.0
    for _ in range(BISECTION_ITERS):
        if b - a <= tol:
            break
        mid = 0.5 * (a + b)
        if saturated(mid):
            b = mid
        else:
            a = mid
    return b
