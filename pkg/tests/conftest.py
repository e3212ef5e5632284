import numpy as np
import pytest

import liemetric as lm


@pytest.fixture(scope="session")
def gellmann3():
    return lm.build_gellmann(3)


@pytest.fixture(scope="session")
def qutrit_half():
    # halved d=3 generators, Tr = delta/2
    return lm.build_full_observable_basis(3)


@pytest.fixture(scope="session")
def g1_n10():
    return lm.build_spin1_dipole(10)


@pytest.fixture(scope="session")
def g2_n10():
    return lm.build_su3_collective(10)


@pytest.fixture(scope="session")
def g2_n4():
    return lm.build_su3_collective(4)


def random_density(dim, rank, seed):
    rng = np.random.default_rng(seed)
    return lm.random_mixed_state(dim, rank, rng)


def random_pure(dim, seed):
    rng = np.random.default_rng(seed)
    return lm.PureState(dim, lm.random_pure_state(dim, rng))
