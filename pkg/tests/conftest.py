import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from kothe.seq import FinSeq

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)

finseqs = st.dictionaries(
    st.integers(min_value=1, max_value=40), rationals, max_size=8
).map(FinSeq)


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-50, 50), rng.randint(1, 20))


def random_finseq(rng: random.Random, max_support: int = 30, max_index: int = 60) -> FinSeq:
    size = rng.randint(0, max_support)
    return FinSeq({rng.randint(1, max_index): random_rational(rng) for _ in range(size)})


@pytest.fixture
def rng():
    return random.Random(20261018)


# acceptance criteria register a one-line outcome here
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key:>2}: {msg}")
