"""Exact evaluation of a fixed randomized algorithm.

Everything here works over a finite window of days ``1..H``. Past
``H = max(last purchase day, B, u_n + 1)`` the algorithm has bought with
certainty and OPT equals ``B``, so the cost ratio is constant and the
window loses nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import EmptyShellMass, ValidationError
from .model import PROB_TOL, ProblemSpec, PurchaseDistribution, shell_index

RATIO_TOL = 1e-9


def algorithm_cost(dist: PurchaseDistribution, day: int, B: int) -> float:
    """Expected cost when skiing stops after ``day`` days."""
    bought = 0.0
    cost = 0.0
    for t, p in dist.entries:
        if t > day:
            break
        cost += (t - 1 + B) * p
        bought += p
    return cost + day * (1.0 - bought)


def opt_cost(day: int, B: int) -> int:
    return min(day, B)


def horizon(dist: PurchaseDistribution, spec: ProblemSpec) -> int:
    H = max(dist.max_day, spec.buy_cost)
    if spec.profile.n:
        H = max(H, spec.profile.outer_upper + 1)
    return H


def cost_ratios(dist: PurchaseDistribution, B: int, H: int) -> np.ndarray:
    """ALG/OPT for days ``1..H`` (index 0 is day 1)."""
    f = np.zeros(H + 1)
    for t, p in dist.entries:
        if t <= H:
            f[t] = p
    days = np.arange(H + 1, dtype=float)
    bought = np.cumsum(f)
    paid = np.cumsum((days - 1 + B) * f)
    alg = paid + days * (1.0 - bought)
    return alg[1:] / np.minimum(days[1:], B)


def _shell_of_days(spec: ProblemSpec, H: int) -> np.ndarray:
    return np.array([shell_index(spec.profile, d) for d in range(1, H + 1)])


def consistencies(dist: PurchaseDistribution, spec: ProblemSpec) -> tuple[float, ...]:
    """``(c_1, ..., c_n, r)`` through the running-maximum recurrence over shells."""
    H = horizon(dist, spec)
    ratios = cost_ratios(dist, spec.buy_cost, H)
    shells = _shell_of_days(spec, H)
    out = []
    running = 1.0
    for i in range(1, spec.profile.n + 2):
        in_shell = ratios[shells == i]
        if in_shell.size:
            running = max(running, float(in_shell.max()))
        out.append(running)
    return tuple(out)


def consistency(dist: PurchaseDistribution, spec: ProblemSpec, i: int) -> float:
    if not 1 <= i <= spec.profile.n + 1:
        raise ValidationError(f"shell index {i} outside 1..{spec.profile.n + 1}")
    return consistencies(dist, spec)[i - 1]


def robustness(dist: PurchaseDistribution, spec: ProblemSpec) -> float:
    return consistencies(dist, spec)[-1]


@dataclass(frozen=True)
class DrcrBreakdown:
    consistencies: tuple[float, ...]
    weights: tuple[float, ...]
    drcr: float

    @property
    def robustness(self) -> float:
        return self.consistencies[-1]


def drcr(dist: PurchaseDistribution, spec: ProblemSpec) -> DrcrBreakdown:
    """DRCR as the shell-weighted combination of consistencies and robustness."""
    c = consistencies(dist, spec)
    w = spec.profile.weights()
    return DrcrBreakdown(c, w, float(sum(wi * ci for wi, ci in zip(w, c))))


@dataclass(frozen=True)
class AdversaryDistribution:
    """Finite distribution over last skiing days."""

    atoms: tuple[tuple[int, float], ...]

    @classmethod
    def from_mapping(cls, atoms: Mapping[int, float]) -> "AdversaryDistribution":
        merged: dict[int, float] = {}
        for day, p in atoms.items():
            if p < -PROB_TOL:
                raise ValidationError(f"negative mass {p} on day {day}")
            merged[int(day)] = merged.get(int(day), 0.0) + max(float(p), 0.0)
        total = sum(merged.values())
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"adversary masses sum to {total!r}")
        return cls(tuple((d, merged[d]) for d in sorted(merged) if merged[d] > 0.0))

    def as_dict(self) -> dict[int, float]:
        return dict(self.atoms)

    def is_admissible(self, spec: ProblemSpec, tol: float = PROB_TOL) -> bool:
        """Whether every prediction's accuracy requirement holds."""
        prof = spec.profile
        for i in range(1, prof.n + 1):
            inside = sum(p for d, p in self.atoms if prof.contains(i, d))
            if inside < 1.0 - prof.delta(i) - tol:
                return False
        return True


def worst_case_distribution(
    dist: PurchaseDistribution, spec: ProblemSpec, eps: float = 0.0
) -> AdversaryDistribution:
    """Adversary putting mass ``delta_{i-1} - delta_i`` on a near-worst day of ``Theta_i``.

    For each ``i`` the chosen day is the smallest one in ``Theta_i`` whose
    ratio reaches ``(1 - eps) * c_i`` (up to ``RATIO_TOL``); with ``eps = 0``
    this is the argmax. Its expected ratio equals the DRCR.
    """
    if eps < 0:
        raise ValidationError(f"eps must be non-negative, got {eps}")
    prof = spec.profile
    H = horizon(dist, spec)
    ratios = cost_ratios(dist, spec.buy_cost, H)
    c = consistencies(dist, spec)
    atoms: dict[int, float] = {}
    for i, w in enumerate(prof.weights(), start=1):
        if w <= 0.0:
            continue
        lo, hi = prof.intervals[i - 1] if i <= prof.n else (1, H)
        window = ratios[lo - 1 : min(hi, H)]
        if window.size == 0:
            raise EmptyShellMass(f"Theta_{i} has weight {w} but no admissible day")
        hits = np.flatnonzero(window >= (1.0 - eps) * c[i - 1] - RATIO_TOL)
        if hits.size == 0:
            raise EmptyShellMass(f"no day in Theta_{i} reaches its consistency")
        day = lo + int(hits[0])
        atoms[day] = atoms.get(day, 0.0) + w
    return AdversaryDistribution.from_mapping(atoms)


def adversary_value(adv: AdversaryDistribution, dist: PurchaseDistribution, B: int) -> float:
    """Expected ALG/OPT when the last day is drawn from ``adv``."""
    return float(sum(p * algorithm_cost(dist, d, B) / opt_cost(d, B) for d, p in adv.atoms))
