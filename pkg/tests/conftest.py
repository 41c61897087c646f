import random

import gmpy2
import pytest
from hypothesis import HealthCheck, settings

from dynhull.numkernel import SquareMatrix

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_int_matrix(rng: random.Random, n: int, lo: int = -9, hi: int = 9) -> SquareMatrix:
    return SquareMatrix([[gmpy2.mpz(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)])


def random_rat_matrix(rng: random.Random, n: int) -> SquareMatrix:
    return SquareMatrix([[gmpy2.mpq(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(n)]
                         for _ in range(n)])


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: list = []


def report(name: str, ok: bool, detail: str = "") -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
