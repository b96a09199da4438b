"""Domain types: ski-rental instances, hierarchical prediction profiles and
randomized purchase-day algorithms.

Days are positive integers. A prediction is an integer interval
``[lo, hi]`` of last skiing days together with ``delta``, the probability
mass the adversary may place outside that interval. Predictions are stored
innermost-first, so ``intervals[0]`` is the tightest set.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import HierarchyViolation, RangeError, UnboundedInterval, ValidationError

PROB_TOL = 1e-9


def _as_day(value, what: str) -> int:
    if isinstance(value, float):
        if math.isinf(value):
            raise UnboundedInterval(f"{what} is infinite; only bounded intervals are supported")
        if not value.is_integer():
            raise RangeError(f"{what} must be an integer day, got {value!r}")
    try:
        day = int(value)
    except (TypeError, ValueError):
        raise RangeError(f"{what} must be an integer day, got {value!r}") from None
    if day < 1:
        raise RangeError(f"{what} must be a positive day, got {day}")
    return day


@dataclass(frozen=True)
class PredictionProfile:
    """Nested intervals ``[lo_i, hi_i]`` with accuracy parameters ``delta_i``.

    The sentinels ``delta_0 = 1`` and ``delta_{n+1} = 0`` are exposed through
    :meth:`delta`; ``Theta_0`` is empty and ``Theta_{n+1}`` is every day.
    """

    intervals: tuple[tuple[int, int], ...]
    deltas: tuple[float, ...]

    def __post_init__(self):
        if len(self.intervals) != len(self.deltas):
            raise ValidationError(
                f"{len(self.intervals)} intervals but {len(self.deltas)} deltas"
            )
        for k, ((lo, hi), d) in enumerate(zip(self.intervals, self.deltas), start=1):
            if not (isinstance(lo, int) and isinstance(hi, int)) or lo < 1 or hi < 1:
                raise RangeError(f"interval {k} must have positive integer endpoints")
            if lo > hi:
                raise RangeError(f"interval {k} has lower end {lo} > upper end {hi}")
            if not 0.0 <= d <= 1.0:
                raise RangeError(f"delta_{k} = {d} outside [0, 1]")
        for k in range(len(self.intervals) - 1):
            (lo_a, hi_a), (lo_b, hi_b) = self.intervals[k], self.intervals[k + 1]
            if not (lo_b <= lo_a and hi_a <= hi_b):
                raise HierarchyViolation(
                    f"interval {k + 2} [{lo_b},{hi_b}] does not contain interval {k + 1} [{lo_a},{hi_a}]"
                )
            if self.deltas[k + 1] > self.deltas[k]:
                raise HierarchyViolation(
                    f"delta_{k + 2} = {self.deltas[k + 1]} exceeds delta_{k + 1} = {self.deltas[k]}"
                )
            if self.intervals[k] == self.intervals[k + 1] and self.deltas[k] == self.deltas[k + 1]:
                raise ValidationError(f"predictions {k + 1} and {k + 2} are duplicates")

    @property
    def n(self) -> int:
        return len(self.intervals)

    def delta(self, i: int) -> float:
        """``delta_i`` for ``0 <= i <= n+1``, sentinels included."""
        if i == 0:
            return 1.0
        if i == self.n + 1:
            return 0.0
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.deltas[i - 1]

    def weights(self) -> tuple[float, ...]:
        """Shell weights ``delta_{i-1} - delta_i`` for ``i = 1..n+1``."""
        return tuple(self.delta(i - 1) - self.delta(i) for i in range(1, self.n + 2))

    def contains(self, i: int, day: int) -> bool:
        if i <= 0:
            return False
        if i > self.n:
            return True
        lo, hi = self.intervals[i - 1]
        return lo <= day <= hi

    @property
    def outer_upper(self) -> int | None:
        return self.intervals[-1][1] if self.intervals else None

    def with_deltas(self, deltas: Sequence[float]) -> "PredictionProfile":
        return validate_profile(self.intervals, deltas)


@dataclass(frozen=True)
class ProblemSpec:
    buy_cost: int
    profile: PredictionProfile

    def __post_init__(self):
        if isinstance(self.buy_cost, bool) or not isinstance(self.buy_cost, int):
            raise RangeError(f"buy cost must be an integer, got {self.buy_cost!r}")
        if self.buy_cost < 2:
            raise RangeError(f"buy cost must be at least 2, got {self.buy_cost}")

    @classmethod
    def build(cls, buy_cost: int, intervals=(), deltas=()) -> "ProblemSpec":
        return cls(int(buy_cost), validate_profile(intervals, deltas))

    def with_deltas(self, deltas: Sequence[float]) -> "ProblemSpec":
        return ProblemSpec(self.buy_cost, self.profile.with_deltas(deltas))

    def to_json(self) -> dict:
        p = self.profile
        return {"B": self.buy_cost, "intervals": [list(iv) for iv in p.intervals], "deltas": list(p.deltas)}

    @classmethod
    def from_json(cls, data: Mapping) -> "ProblemSpec":
        try:
            return cls.build(data["B"], data.get("intervals", []), data.get("deltas", []))
        except KeyError as exc:
            raise ValidationError(f"profile JSON is missing key {exc}") from None

    @classmethod
    def load(cls, path) -> "ProblemSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def validate_profile(intervals: Iterable, deltas: Iterable) -> PredictionProfile:
    """Normalize raw predictions into a :class:`PredictionProfile`.

    Consecutive identical predictions are merged; everything else is checked
    and passed through in the given (innermost-first) order.
    """
    intervals = list(intervals)
    deltas = list(deltas)
    if len(intervals) != len(deltas):
        raise ValidationError(f"{len(intervals)} intervals but {len(deltas)} deltas")

    checked = validate_intervals(intervals)
    clean: list[tuple[tuple[int, int], float]] = []
    for k, (iv, d) in enumerate(zip(checked, deltas), start=1):
        try:
            d = float(d)
        except (TypeError, ValueError):
            raise RangeError(f"delta_{k} must be numeric, got {d!r}") from None
        if math.isnan(d) or not 0.0 <= d <= 1.0:
            raise RangeError(f"delta_{k} = {d} outside [0, 1]")
        if clean and clean[-1] == (iv, d):
            continue
        clean.append((iv, d))

    return PredictionProfile(tuple(iv for iv, _ in clean), tuple(d for _, d in clean))


def validate_intervals(intervals: Iterable) -> tuple[tuple[int, int], ...]:
    """Check a nested interval chain on its own (no accuracies, no merging)."""
    out = []
    for k, iv in enumerate(intervals, start=1):
        try:
            lo_raw, hi_raw = iv
        except (TypeError, ValueError):
            raise ValidationError(f"interval {k} must be a (lower, upper) pair") from None
        lo = _as_day(lo_raw, f"lower end of interval {k}")
        hi = _as_day(hi_raw, f"upper end of interval {k}")
        if lo > hi:
            raise RangeError(f"interval {k} has lower end {lo} > upper end {hi}")
        if out and not (lo <= out[-1][0] and out[-1][1] <= hi):
            raise HierarchyViolation(f"interval {k} [{lo},{hi}] does not contain interval {k - 1}")
        out.append((lo, hi))
    return tuple(out)


def interval_shell(intervals: Sequence[tuple[int, int]], day: int) -> int:
    for i, (lo, hi) in enumerate(intervals, start=1):
        if lo <= day <= hi:
            return i
    return len(intervals) + 1


def shell_index(profile: PredictionProfile, day: int) -> int:
    """Smallest ``i`` in ``1..n+1`` with ``day`` in ``Theta_i``."""
    return interval_shell(profile.intervals, day)


@dataclass(frozen=True)
class PurchaseDistribution:
    """Randomized algorithm given as purchase-day probabilities ``f_t``.

    ``entries`` is a tuple of ``(day, prob)`` pairs sorted by day, zero
    entries dropped. Build instances through :meth:`from_mapping`, which
    validates and renormalizes.
    """

    entries: tuple[tuple[int, float], ...]

    @classmethod
    def from_mapping(cls, probs: Mapping, tol: float = PROB_TOL) -> "PurchaseDistribution":
        merged: dict[int, float] = {}
        for day, p in probs.items():
            t = _as_day(day, "purchase day")
            p = float(p)
            if math.isnan(p) or p < -tol or p > 1.0 + tol:
                raise RangeError(f"probability f_{t} = {p} outside [0, 1]")
            merged[t] = merged.get(t, 0.0) + max(p, 0.0)
        total = math.fsum(merged.values())
        if abs(total - 1.0) > tol:
            raise ValidationError(
                f"purchase probabilities sum to {total!r}; renting forever is not allowed"
            )
        return cls(tuple((t, merged[t] / total) for t in sorted(merged) if merged[t] > 0.0))

    @classmethod
    def point(cls, day: int) -> "PurchaseDistribution":
        return cls.from_mapping({day: 1.0})

    def as_dict(self) -> dict[int, float]:
        return dict(self.entries)

    def __getitem__(self, day: int) -> float:
        return self.as_dict().get(day, 0.0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.entries)

    @property
    def max_day(self) -> int:
        return self.entries[-1][0]

    def to_json(self) -> dict:
        return {"entries": {str(t): p for t, p in self.entries}}

    @classmethod
    def from_json(cls, data: Mapping) -> "PurchaseDistribution":
        # solution files carry the algorithm under "distribution"
        for key in ("entries", "distribution"):
            if key in data:
                return cls.from_mapping(data[key])
        raise ValidationError("distribution JSON needs an 'entries' or 'distribution' object")

    @classmethod
    def load(cls, path) -> "PurchaseDistribution":
        with open(path) as fh:
            return cls.from_json(json.load(fh))
