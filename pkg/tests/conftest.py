"""Shared fixtures: reference expansions and a seeded pool of random irrationals."""

import random
from fractions import Fraction

import pytest

from cfpow.cfrac import binet_data, expand
from cfpow.quadfield import make_quadnum


@pytest.fixture(scope="session")
def golden_cf():
    return expand(make_quadnum(Fraction(1, 2), Fraction(1, 2), 5))


@pytest.fixture(scope="session")
def root2_cf():
    return expand(make_quadnum(0, 1, 2))


@pytest.fixture(scope="session")
def golden_bd(golden_cf):
    return binet_data(golden_cf)


@pytest.fixture(scope="session")
def root2_bd(root2_cf):
    return binet_data(root2_cf)


def sample_irrationals(count, seed, coeff_bound=10, d_max=50):
    """Rejection-sample (p + q*sqrt(D))/r until `count` survive the
    rational-collapse filter."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = rng.randint(-coeff_bound, coeff_bound)
        q = rng.randint(-coeff_bound, coeff_bound)
        r = rng.randint(1, coeff_bound)
        d = rng.randint(2, d_max)
        if q == 0:
            continue
        x = make_quadnum(Fraction(p, r), Fraction(q, r), d)
        if x.d == 1:
            continue
        out.append(x)
    return out


@pytest.fixture(scope="session")
def random_cf_pool():
    """Twenty random quadratic irrationals with their expansions."""
    return [(x, expand(x)) for x in sample_irrationals(20, seed=20260818)]
