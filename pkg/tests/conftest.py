# tests/conftest.py

import pytest

from core.curves import NormalCoordinates
from core.mcg import boundary_word, braid_word, compose, identity, named_curve, twist
from core.surface import SurfaceSpec, standard_triangulation


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: boucles d'oracle plus longues")


@pytest.fixture(scope="session")
def torus_spec():
    return SurfaceSpec(genus=1, boundary=("C1",))


@pytest.fixture(scope="session")
def torus(torus_spec):
    return standard_triangulation(torus_spec)


@pytest.fixture(scope="session")
def curve_a(torus):
    return named_curve(torus, "a")


@pytest.fixture(scope="session")
def curve_b(torus):
    return named_curve(torus, "b")


@pytest.fixture(scope="session")
def t_a(curve_a):
    return twist(curve_a, name="a")


@pytest.fixture(scope="session")
def t_b(curve_b):
    return twist(curve_b, name="b")


@pytest.fixture(scope="session")
def t_ab(t_a, t_b):
    return compose(t_a, t_b)


@pytest.fixture(scope="session")
def t_boundary(torus):
    return boundary_word(torus, "C1")


@pytest.fixture(scope="session")
def torus_identity(torus):
    return identity(torus)


@pytest.fixture(scope="session")
def two_punctured_disc():
    return standard_triangulation(SurfaceSpec(genus=0, boundary=("C1",), punctures=2))


@pytest.fixture(scope="session")
def three_punctured_disc():
    return standard_triangulation(SurfaceSpec(genus=0, boundary=("C1",), punctures=3))


@pytest.fixture(scope="session")
def sigma1(two_punctured_disc):
    return braid_word(two_punctured_disc, 1)


@pytest.fixture(scope="session")
def annulus():
    return standard_triangulation(SurfaceSpec(genus=0, boundary=("C1", "C2")))


def weights_of(coords: NormalCoordinates):
    return coords.weights
