import math

import numpy as np
import pytest

from flatsphere.builders import (
    doubled_30_60_90,
    doubled_equilateral,
    doubled_square,
    random_doubled_polygon,
)


@pytest.fixture(scope="session")
def eq_double():
    return doubled_equilateral()


@pytest.fixture(scope="session")
def tri_306090():
    return doubled_30_60_90()


@pytest.fixture(scope="session")
def pillowcase():
    return doubled_square()


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)


def random_surface(rng, n=None):
    n = n if n is not None else int(rng.integers(3, 7))
    return random_doubled_polygon(n, rng)


def random_interior_point(surface, rng):
    f = int(rng.integers(surface.num_faces))
    lam = rng.dirichlet([2.0, 2.0, 2.0])
    p = lam @ surface.verts[f]
    return f, (float(p[0]), float(p[1]))


def random_direction(rng):
    a = float(rng.uniform(0.0, 2.0 * math.pi))
    return (math.cos(a), math.sin(a))
