import pytest

from bezmf import parse_potential, validate_potential


@pytest.fixture
def w8():
    return parse_potential("8")


@pytest.fixture
def w72():
    return parse_potential("72")


@pytest.fixture
def w216():
    return parse_potential("216")


@pytest.fixture
def wp2():
    return parse_potential("p^2")


@pytest.fixture
def wp3():
    return parse_potential("p^3")


@pytest.fixture
def wp5():
    return parse_potential("p^5")


@pytest.fixture
def wp2q2():
    return parse_potential("p^2*q^2")


@pytest.fixture
def wp3q3():
    return parse_potential("p^3*q^3")


@pytest.fixture
def wp2q3():
    return parse_potential("p^2*q^3")


def small_potentials(max_r=2, n_range=(2, 6), extra=()):
    """Ordered-tuple family of abstract potentials for exhaustive tests."""
    import itertools

    syms = ["p", "q", "t"]
    out = []
    for r in range(1, max_r + 1):
        for orders in itertools.product(range(n_range[0], n_range[1] + 1), repeat=r):
            out.append(validate_potential(list(zip(syms[:r], orders))))
    out.extend(extra)
    return out
