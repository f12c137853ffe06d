from fractions import Fraction

import pytest

from shadowcert.constants import derive_constants
from shadowcert.orbit import PseudoOrbit
from shadowcert.systems import get_system


def revalidate_witness(system, outcome, delta, alpha, epsilon):
    """Re-derive a falsification witness's claims from its serialized
    artifacts only: both pseudo-orbits are parsed back from text and every
    admissibility condition plus the closeness claim is recomputed."""
    w = outcome.witness
    xi = PseudoOrbit.parse(w.xi_text, system)
    eta = PseudoOrbit.parse(w.eta_text, system)
    v = outcome.window
    worst = system.zero_dist
    for n in range(-v, v + 1):
        d = system.dist(xi.entry(n), eta.entry(n))
        worst = max(worst, d)
        assert d <= alpha
    assert worst == w.closeness >= epsilon
    assert system.dist(xi.entry(w.index), eta.entry(w.index)) == w.closeness
    for n in range(-v + 1, v + 1):
        assert system.dist(system.apply(eta.entry(n - 1)), eta.entry(n)) < delta
    for side, edge in (("left", -v), ("right", v)):
        ok, bound, _ = system.tail_evidence(xi.entry(edge), eta.entry(edge), side)
        assert ok and bound <= alpha


@pytest.fixture(scope="session")
def shift():
    return get_system("shift")


@pytest.fixture(scope="session")
def toral():
    return get_system("toral")


@pytest.fixture(scope="session")
def shift_constants(shift):
    return derive_constants(shift, Fraction(1, 64))


@pytest.fixture(scope="session")
def toral_constants(toral):
    return derive_constants(toral, Fraction(1, 64))
