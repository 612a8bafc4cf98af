import random
from fractions import Fraction

import pytest

from noethops.gallery import (
    pinched_plane,
    pinched_plane_data,
    thick_line,
    thick_line_data,
    thick_line_mixed_partials,
)
from noethops.polys import Poly


@pytest.fixture(scope="session")
def thick1():
    return thick_line(1)


@pytest.fixture(scope="session")
def thick2():
    return thick_line(2)


@pytest.fixture(scope="session")
def pinched():
    return pinched_plane()


@pytest.fixture(scope="session")
def pinched_data():
    return pinched_plane_data()


def random_poly(rng, n, p, degree=3, terms=4, coeff_range=6):
    """Deterministic random polynomial with small rational coefficients."""
    out = Poly.zero(n, p)
    for _ in range(rng.randint(1, terms)):
        ze = [0] * n
        we = [0] * p
        budget = rng.randint(0, degree)
        for _ in range(budget):
            slot = rng.randrange(n + p)
            if slot < n:
                ze[slot] += 1
            else:
                we[slot - n] += 1
        num = rng.randint(-coeff_range, coeff_range)
        den = rng.randint(1, 3)
        out = out + Poly.monomial(tuple(ze), tuple(we), Fraction(num, den))
    return out


def random_ideal_element(rng, ideal, degree=3):
    """Random combination of the ideal generators; guaranteed member."""
    n, p = ideal.dims
    out = Poly.zero(n, p)
    while out.is_zero():
        for f in ideal.gens:
            if rng.random() < 0.7:
                out = out + random_poly(rng, n, p, degree=degree, terms=3) * f
    return out


@pytest.fixture
def rng():
    return random.Random(20240817)
