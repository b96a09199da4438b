import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from drcr.errors import ValidationError
from drcr.evaluate import (
    AdversaryDistribution,
    adversary_value,
    algorithm_cost,
    consistencies,
    consistency,
    drcr,
    horizon,
    opt_cost,
    robustness,
    worst_case_distribution,
)
from drcr.model import ProblemSpec, PurchaseDistribution

from conftest import random_algorithm, random_spec

BUY1 = PurchaseDistribution.point(1)
BUY5 = PurchaseDistribution.point(5)


def brute_ratio(dist, day, B):
    # direct sum over purchase days, no cumulative arrays
    cost = 0.0
    for t, p in dist.entries:
        cost += p * ((t - 1 + B) if t <= day else day)
    return cost / min(day, B)


def brute_consistencies(dist, spec, far):
    prof = spec.profile
    out = []
    for i in range(1, prof.n + 2):
        days = [d for d in range(1, far + 1) if prof.contains(i, d)]
        out.append(max([1.0] + [brute_ratio(dist, d, spec.buy_cost) for d in days]))
    return out


def definition_drcr(dist, spec, far):
    """sup over admissible last-day distributions on 1..far, as an LP."""
    prof = spec.profile
    ratios = np.array([brute_ratio(dist, d, spec.buy_cost) for d in range(1, far + 1)])
    A_ub, b_ub = [], []
    for i in range(1, prof.n + 1):
        A_ub.append([-1.0 if prof.contains(i, d) else 0.0 for d in range(1, far + 1)])
        b_ub.append(-(1.0 - prof.delta(i)))
    res = linprog(
        -ratios,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.ones((1, far)),
        b_eq=[1.0],
        bounds=[(0, None)] * far,
        method="highs",
    )
    assert res.status == 0
    return -res.fun


def test_algorithm_cost_examples():
    assert algorithm_cost(BUY1, 7, 5) == 5
    assert algorithm_cost(BUY5, 3, 5) == 3
    mixed = PurchaseDistribution.from_mapping({1: 0.5, 5: 0.5})
    assert algorithm_cost(mixed, 6, 5) == pytest.approx(0.5 * 5 + 0.5 * 9)


@pytest.mark.parametrize("day, expected", [(3, 3), (5, 5), (100, 5)])
def test_opt_cost(day, expected):
    assert opt_cost(day, 5) == expected


def test_consistency_examples():
    spec = ProblemSpec.build(5, [(3, 8)], [0.3])
    assert consistency(BUY5, spec, 1) == pytest.approx(9 / 5)
    assert consistency(BUY1, spec, 1) == pytest.approx(5 / 3)
    assert consistency(BUY1, spec, 2) == pytest.approx(5.0)
    with pytest.raises(ValidationError):
        consistency(BUY1, spec, 3)


def test_robustness_examples():
    B = 5
    spec = ProblemSpec.build(B, [(3, 8)], [0.3])
    assert robustness(PurchaseDistribution.point(B), spec) == pytest.approx(2 - 1 / B)
    assert robustness(BUY1, spec) == pytest.approx(5.0)


@pytest.mark.parametrize("B", [2, 5, 10])
def test_classical_randomized_algorithm_matches_closed_form(B):
    w = {t: ((B - 1) / B) ** (B - t) for t in range(1, B + 1)}
    total = sum(w.values())
    dist = PurchaseDistribution.from_mapping({t: v / total for t, v in w.items()})
    spec = ProblemSpec.build(B, [(3, 8)], [0.3])
    exact = Fraction(B**B, B**B - (B - 1) ** B)
    assert robustness(dist, spec) == pytest.approx(float(exact), abs=1e-12)
    # the ratio is the same on every day
    assert max(brute_ratio(dist, d, B) for d in range(1, 4 * B)) == pytest.approx(float(exact), abs=1e-12)


def test_drcr_examples():
    spec = ProblemSpec.build(5, [(3, 8)], [0.3])
    assert drcr(BUY5, spec).drcr == pytest.approx(1.8)
    assert drcr(BUY1, spec).drcr == pytest.approx(0.7 * 5 / 3 + 0.3 * 5)
    full = ProblemSpec.build(5, [(4, 6), (2, 9)], [1.0, 1.0])
    dist = PurchaseDistribution.from_mapping({2: 0.3, 6: 0.7})
    assert drcr(dist, full).drcr == pytest.approx(robustness(dist, full))


def test_worst_case_distribution_examples():
    spec = ProblemSpec.build(5, [(3, 8)], [0.3])
    adv = worst_case_distribution(BUY1, spec, 0.0)
    assert adv.as_dict() == pytest.approx({3: 0.7, 1: 0.3})
    assert adversary_value(adv, BUY1, 5) == pytest.approx(0.7 * 5 / 3 + 0.3 * 5)

    alg = PurchaseDistribution.from_mapping({2: 0.4, 7: 0.6})
    zero = ProblemSpec.build(5, [(3, 8)], [0.0])
    adv0 = worst_case_distribution(alg, zero)
    (day, mass), = adv0.atoms
    assert mass == 1.0 and 3 <= day <= 8
    one = ProblemSpec.build(5, [(3, 8)], [1.0])
    adv1 = worst_case_distribution(alg, one)
    (day, _), = adv1.atoms
    assert brute_ratio(alg, day, 5) == pytest.approx(robustness(alg, one))
    with pytest.raises(ValidationError):
        worst_case_distribution(alg, one, -0.1)


def test_worst_case_with_slack_still_bounds_drcr():
    spec = ProblemSpec.build(6, [(3, 8), (2, 12)], [0.5, 0.2])
    alg = PurchaseDistribution.from_mapping({2: 0.2, 5: 0.5, 9: 0.3})
    eps = 0.05
    adv = worst_case_distribution(alg, spec, eps)
    assert adv.is_admissible(spec)
    assert adversary_value(adv, alg, 6) >= (1 - eps) * drcr(alg, spec).drcr - 1e-12


def test_adversary_value_examples():
    assert adversary_value(AdversaryDistribution.from_mapping({3: 1.0}), BUY1, 5) == pytest.approx(5 / 3)
    adv = AdversaryDistribution.from_mapping({3: 0.7, 1: 0.3})
    assert adversary_value(adv, BUY1, 5) == pytest.approx(0.7 * 5 / 3 + 0.3 * 5)
    uni = AdversaryDistribution.from_mapping({d: 0.25 for d in (5, 6, 7, 8)})
    assert adversary_value(uni, BUY5, 5) == pytest.approx(1.8)


def test_admissibility():
    spec = ProblemSpec.build(5, [(3, 8)], [0.3])
    assert AdversaryDistribution.from_mapping({3: 0.7, 1: 0.3}).is_admissible(spec)
    assert not AdversaryDistribution.from_mapping({3: 0.6, 1: 0.4}).is_admissible(spec)


@pytest.mark.parametrize("seed", range(40))
def test_breakdown_matches_definition_oracle(seed):
    rng = random.Random(seed)
    spec = random_spec(rng)
    alg = random_algorithm(rng, max_day=(spec.profile.outer_upper or 0) + spec.buy_cost + 3)
    far = horizon(alg, spec) + 15
    br = drcr(alg, spec)
    assert list(br.consistencies) == pytest.approx(brute_consistencies(alg, spec, far), abs=1e-12)
    assert all(a <= b + 1e-12 for a, b in zip(br.consistencies, br.consistencies[1:]))
    assert br.consistencies[0] >= 1.0
    assert br.drcr == pytest.approx(definition_drcr(alg, spec, far), abs=1e-8)
    adv = worst_case_distribution(alg, spec)
    assert adv.is_admissible(spec)
    assert adversary_value(adv, alg, spec.buy_cost) == pytest.approx(br.drcr, abs=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_single_prediction_drcr_is_linear_in_delta(seed):
    rng = random.Random(1000 + seed)
    B = rng.randint(2, 10)
    lo = rng.randint(1, 2 * B)
    hi = rng.randint(lo, 2 * B + 4)
    alg = random_algorithm(rng, 3 * B)
    d1, d2 = sorted(rng.random() for _ in range(2))
    dm = 0.5 * (d1 + d2)
    vals = [drcr(alg, ProblemSpec.build(B, [(lo, hi)], [d])).drcr for d in (d1, dm, d2)]
    assert vals[1] == pytest.approx(0.5 * (vals[0] + vals[2]), abs=1e-12)
    br = drcr(alg, ProblemSpec.build(B, [(lo, hi)], [d1]))
    c1, r = br.consistencies
    assert br.drcr == pytest.approx((1 - d1) * c1 + d1 * r, abs=1e-12)


def test_hierarchical_drcr_is_affine_in_each_delta():
    alg = PurchaseDistribution.from_mapping({1: 0.1, 4: 0.5, 11: 0.4})
    base = [0.6, 0.3]
    c = consistencies(alg, ProblemSpec.build(6, [(4, 7), (2, 10)], base))
    for k in range(2):
        pts = []
        for d in (0.3, 0.45, 0.6) if k == 0 else (0.0, 0.15, 0.3):
            deltas = list(base)
            deltas[k] = d
            pts.append(drcr(alg, ProblemSpec.build(6, [(4, 7), (2, 10)], deltas)).drcr)
        slope = (pts[2] - pts[0]) / 0.3
        assert pts[1] == pytest.approx(0.5 * (pts[0] + pts[2]), abs=1e-12)
        # d DRCR / d delta_k = c_{k+1} - c_k >= 0
        assert slope == pytest.approx(c[k + 1] - c[k], abs=1e-9)
        assert slope >= 0


def test_horizon_extension_changes_nothing():
    spec = ProblemSpec.build(4, [(5, 9)], [0.4])
    alg = PurchaseDistribution.from_mapping({3: 0.5, 12: 0.5})
    H = horizon(alg, spec)
    assert brute_consistencies(alg, spec, H) == pytest.approx(brute_consistencies(alg, spec, 5 * H), abs=0)
