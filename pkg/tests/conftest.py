import random
from fractions import Fraction
from pathlib import Path

import pytest

from lindisc import Matrix

FIXTURES = Path(__file__).parent / "fixtures"


def random_row(rng, n, mag=1000):
    row = []
    for _ in range(n):
        num = rng.randint(-mag, mag)
        den = rng.randint(1, mag)
        row.append(Fraction(num, den))
    return row


def onerow_corpus(seed=20240501, count=500):
    rng = random.Random(seed)
    return [Matrix([random_row(rng, rng.randint(1, 16))]) for _ in range(count)]


def integer_matrix(rng, d, n, delta):
    return Matrix([[rng.randint(-delta, delta) for _ in range(n)] for _ in range(d)])


def lowdim_corpus(seed=777, count=100):
    rng = random.Random(seed)
    return [integer_matrix(rng, 2, rng.randint(1, 6), rng.randint(1, 3)) for _ in range(count)]


def random_weight(rng, n, den=12):
    return tuple(Fraction(rng.randint(0, den), den) for _ in range(n))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(label, ok, detail=""):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
