from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from stochdom.constructions import example_counter_pair
from stochdom.dist import make_distribution

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints them in criterion order."""

    def record(number: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE[number] = (ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def example():
    return example_counter_pair(Fraction(1, 100))


def rationals(lo: int = -4, hi: int = 4, max_den: int = 12):
    return st.builds(
        lambda num, den: Fraction(num, den),
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    ).filter(lambda q: lo <= q <= hi)


@st.composite
def distributions(draw, lo: int = 0, hi: int = 1, max_atoms: int = 4, max_den: int = 12):
    k = draw(st.integers(1, max_atoms))
    xs = draw(st.lists(rationals(lo, hi, max_den), min_size=k, max_size=k))
    ws = draw(st.lists(st.integers(1, 9), min_size=k, max_size=k))
    total = sum(ws)
    return make_distribution([(x, Fraction(w, total)) for x, w in zip(xs, ws)])


@st.composite
def polynomials(draw, max_degree: int = 6, lo: int = -6, hi: int = 6, max_den: int = 8):
    coeffs = draw(st.lists(rationals(lo, hi, max_den), min_size=0, max_size=max_degree + 1))
    from stochdom.exactalg import Polynomial

    return Polynomial(tuple(coeffs))


@lru_cache(maxsize=None)
def seeded_pairs(count: int, seed: int = 0, lo: int = 0, hi: int = 1, max_atoms: int = 4):
    """Structured random pairs (spreads, shifts, independent draws) from the harness generator."""
    from stochdom.exactalg import RealInterval
    from stochdom.harness import ExperimentConfig, random_pair

    cfg = ExperimentConfig(
        seed=seed, trials=count, max_atoms=max_atoms, interval=RealInterval.closed(lo, hi), injection_rate=Fraction(0)
    )
    return tuple(random_pair(cfg, t)[:2] for t in range(count))
