import pytest

from zerocycles.cycles import Chain
from zerocycles.decompose import DecompositionChain
from zerocycles.polycore import Poly, compose_all

Z = Poly.x()


def P(*coeffs):
    return Poly(coeffs)


CUBIC_OUTER = P(0, 1, -1, 1)        # z^3 - z^2 + z
CUBIC_INNER = P(-1, 0, 2, 1)        # z^3 + 2 z^2 - 1
SEXTIC = Poly.monomial(6)


@pytest.fixture(scope="session")
def cubic_pair():
    """f = (z^3 - z^2 + z) o (z^3 + 2 z^2 - 1) with C = (1,-1,0) repeated."""
    chain = DecompositionChain.from_factors([CUBIC_OUTER, CUBIC_INNER], normalize=False)
    C = Chain([1, -1, 0] * 3)
    return chain, C


@pytest.fixture(scope="session")
def cubic_sextic():
    """f = (w^3 - w^2 + w) o z^6 with C = (1,-1,0,0,0,0) repeated."""
    chain = DecompositionChain.from_factors([CUBIC_OUTER, SEXTIC], normalize=False)
    C = Chain([1, -1, 0, 0, 0, 0] * 3)
    return chain, C


def composed(*factors):
    return compose_all(list(factors))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
