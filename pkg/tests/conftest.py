import random

import pytest
from hypothesis import strategies as st

from wecken.freegroup import Word
from wecken.montecarlo import sample_endomorphism, trial_rng
from wecken.wagner import Endomorphism


def words(n, max_size=12):
    letters = st.integers(1, n).flatmap(lambda g: st.sampled_from([g, -g]))
    return st.lists(letters, max_size=max_size).map(Word)


def endomorphisms(n, max_size=10):
    return st.tuples(*[words(n, max_size)] * n).map(lambda ims: Endomorphism(n, ims))


def random_maps(count, ns=(2, 3, 5), ps=(4, 8, 14), seed=0):
    """Deterministic mix of uniform random endomorphisms over the given grid."""
    combos = [(n, p) for n in ns for p in ps]
    out = []
    for t in range(count):
        n, p = combos[t % len(combos)]
        out.append(sample_endomorphism(n, p, trial_rng(seed, t)))
    return out


@pytest.fixture(scope="session")
def random_sample():
    return random_maps(10_000)


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
