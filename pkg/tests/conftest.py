"""Shared fixtures: the domain zoo used across the test modules."""

import numpy as np
import pytest

from confmap.geometry import (
    ArcSegment,
    build_domain,
    circle_chain,
    disk_domain,
    polygon,
)

L_SHAPE = [0, 2, 2 + 1j, 1 + 1j, 1 + 2j, 2j]
HEXAGON = [0, 2, 2.5 + 1.2j, 1.5 + 2.4j, 0.2 + 2.1j, -0.8 + 0.9j]


@pytest.fixture(scope="session")
def unit_disk():
    return disk_domain()


@pytest.fixture(scope="session")
def blob_domain():
    """Image of the unit disk under w + 0.2 w^2 (smooth analytic boundary)."""
    return build_domain([ArcSegment.trig([0j, 1.0 + 0j, 0j, 0.2 + 0j])])


@pytest.fixture(scope="session")
def l_shape():
    return polygon(L_SHAPE)


@pytest.fixture(scope="session")
def hexagon():
    return polygon(HEXAGON)


@pytest.fixture(scope="session")
def unit_square_quad():
    return polygon([0, 1, 1 + 1j, 1j], quad=[0, 1, 2, 3])


@pytest.fixture(scope="session")
def concentric_annulus():
    return build_domain(circle_chain(0j, 2.0), holes=[circle_chain(0j, 1.0)])


def rectangle_quad(aspect: float):
    """Aspect-L rectangle marked so sides 0 and 2 are the short ends."""
    return polygon([aspect, aspect + 1j, 1j, 0], quad=[0, 1, 2, 3])


def rng(seed: int = 0):
    return np.random.default_rng(seed)
