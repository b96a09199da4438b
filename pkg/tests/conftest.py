import random

import pytest

from drcr.model import ProblemSpec, PurchaseDistribution

ACCEPTANCE_LINES: list[str] = []


def random_spec(rng: random.Random, B_range=(2, 12), n_range=(1, 3)) -> ProblemSpec:
    """Nested intervals grown outward from a random innermost one."""
    B = rng.randint(*B_range)
    n = rng.randint(*n_range)
    lo = rng.randint(1, 2 * B)
    hi = rng.randint(lo, 2 * B + 3)
    intervals = [(lo, hi)]
    for _ in range(n - 1):
        lo = rng.randint(max(1, lo - B), lo)
        hi = rng.randint(hi, hi + B)
        intervals.append((lo, hi))
    # coarse deltas make ties and zero shell weights show up
    deltas = sorted((rng.choice([0.0, 0.25, 0.5, 1.0, rng.random()]) for _ in range(n)), reverse=True)
    return ProblemSpec.build(B, intervals, deltas)


def random_algorithm(rng: random.Random, max_day: int) -> PurchaseDistribution:
    k = rng.randint(1, min(6, max_day))
    days = rng.sample(range(1, max_day + 1), k)
    weights = [rng.random() + 1e-3 for _ in days]
    total = sum(weights)
    return PurchaseDistribution.from_mapping({d: w / total for d, w in zip(days, weights)})


@pytest.fixture(scope="session")
def spec_corpus() -> list[ProblemSpec]:
    rng = random.Random(20240601)
    return [random_spec(rng) for _ in range(120)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
