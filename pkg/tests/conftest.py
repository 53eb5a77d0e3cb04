import numpy as np
import pytest

from dualcr.surfaces import make_surface, random_surface_points


@pytest.fixture(scope="session")
def sphere():
    return make_surface("sphere")


@pytest.fixture(scope="session")
def ellipsoid():
    return make_surface("hermitian:[[1,0],[0,2]]")


@pytest.fixture(scope="session")
def skew():
    # non-diagonal hermitian form, exercises the generic code paths
    return make_surface("hermitian:[[2,0.3+0.1i],[0.3-0.1i,1]]")


@pytest.fixture(scope="session")
def perturbed():
    return make_surface("perturbed:[[1,0],[0,2]];0.05")


@pytest.fixture(scope="session")
def sphere_points(sphere):
    return random_surface_points(sphere, 25, 11)


@pytest.fixture(scope="session")
def ellipsoid_points(ellipsoid):
    return random_surface_points(ellipsoid, 25, 12)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(2718)
