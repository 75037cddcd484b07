"""Fixtures compartidas: dominios con solución cerrada."""

import pytest

from utils.voronoi import build


@pytest.fixture
def perforado():
    """Plano perforado en el origen."""
    return build([[0.0, 0.0]])


@pytest.fixture
def dos_nucleos():
    """Núcleos (-1, 0) y (1, 0): la arista es el eje y, con h = 1."""
    return build([[-1.0, 0.0], [1.0, 0.0]])


@pytest.fixture
def triangulo():
    return build([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

