import pytest
from hypothesis import strategies as st

from dimscale.corpus import all_scales, espalier_corpus, scale_corpus
from dimscale.monoid import MonoidTable
from dimscale.targets import chain, lower_subset_scale, product_scale, two_gamma


@pytest.fixture(scope="session")
def scales():
    return scale_corpus()


@pytest.fixture(scope="session")
def every_scale():
    return all_scales()


@pytest.fixture(scope="session")
def espaliers():
    return espalier_corpus()


def by_label(t: MonoidTable, *labels: str):
    return tuple(t.index(s) for s in labels)


@st.composite
def small_scales(draw, max_size: int = 24):
    """Products of chains and 2_gamma, optionally cut down to a random lower subset."""
    factors = []
    size = 1
    for _ in range(draw(st.integers(1, 3))):
        if draw(st.booleans()):
            f = chain(draw(st.integers(0, 3)))
        else:
            f = two_gamma(draw(st.integers(0, 2)))
        if size * f.n > max_size:
            break
        factors.append(f)
        size *= f.n
    if not factors:
        factors = [chain(1)]
    t = product_scale(factors)
    if draw(st.booleans()):
        tops = draw(st.sets(st.integers(0, t.n - 1), min_size=1, max_size=3))
        mask = 0
        for x in tops:
            mask |= t.down[x]
        t = lower_subset_scale(t, lambda x: mask >> x & 1)
    return t


@st.composite
def partial_tables(draw, max_n: int = 5):
    """Arbitrary partial operation tables (mostly not monoids)."""
    n = draw(st.integers(1, max_n))
    rows = tuple(
        tuple(draw(st.integers(-1, n - 1)) for _ in range(n)) for _ in range(n)
    )
    return MonoidTable(tuple(f"e{i}" for i in range(n)), rows)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
