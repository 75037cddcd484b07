"""Pruebas del diagrama de Voronoi y la función distancia."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tests.estrategias import fronteras
from utils.errores import AdjacencyError, DomainError, InputError
from utils.voronoi import CORNER, EDGE, INTERIOR, build, delta, locate, mirror_nucleus, reflect


class TestBuild:

    def test_un_nucleo(self, perforado):
        assert perforado.n == 1
        assert perforado.edges == ()
        assert locate(perforado, (3.0, 4.0)).kind == INTERIOR

    def test_dos_nucleos(self, dos_nucleos):
        assert len(dos_nucleos.edges) == 1
        arista = dos_nucleos.edges[0]
        np.testing.assert_allclose(arista.point, [0.0, 0.0])
        np.testing.assert_allclose(arista.direction, [0.0, 1.0])
        assert math.isinf(arista.lo) and math.isinf(arista.hi)
        assert arista.h == pytest.approx(1.0)
        # La normal apunta de neighbors[0] (x < 0) a neighbors[1]
        np.testing.assert_allclose(arista.unit_normal, [1.0, 0.0])

    def test_triangulo(self, triangulo):
        assert len(triangulo.edges) == 3
        assert len(triangulo.corners) == 1
        np.testing.assert_allclose(triangulo.corners[0], [0.5, 0.5])
        assert triangulo.corner_cells[0] == (0, 1, 2)

    def test_orden_lexicografico(self):
        d = build([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        np.testing.assert_array_equal(d.boundary, [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]])

    def test_json_independiente_del_orden(self):
        a = build([[0.0, 0.0], [1.0, 0.2], [0.3, 1.0], [0.9, 0.8]])
        b = build([[0.9, 0.8], [0.3, 1.0], [0.0, 0.0], [1.0, 0.2]])
        assert a.to_json() == b.to_json()

    def test_frontera_vacia(self):
        with pytest.raises(InputError):
            build([])

    def test_duplicados(self):
        with pytest.raises(InputError):
            build([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0]])

    def test_no_finitos(self):
        with pytest.raises(InputError):
            build([[0.0, float('nan')]])


class TestDelta:

    def test_valores(self, dos_nucleos):
        assert delta(dos_nucleos, (0.0, 0.0)) == pytest.approx(1.0)
        assert delta(dos_nucleos, (1.0, 0.0)) == 0.0
        assert dos_nucleos.delta((0.0, 1.0)) == pytest.approx(math.sqrt(2.0))

    def test_lote(self, triangulo):
        puntos = np.array([[0.2, 0.2], [2.0, 2.0], [0.5, 0.5]])
        esperado = [delta(triangulo, p) for p in puntos]
        np.testing.assert_allclose(triangulo.delta_many(puntos), esperado)

    @settings(max_examples=30, deadline=None)
    @given(fronteras(), st.floats(min_value=-1.0, max_value=2.0), st.floats(min_value=-1.0, max_value=2.0))
    def test_celda_del_mas_cercano(self, puntos, a, b):
        d = build(puntos)
        z = np.array([a, b])
        assert d.cells[d.nearest(z)].contains(z, tol=1e-9)
        assert d.delta(z) == pytest.approx(float(np.min(np.hypot(*(puntos - z).T))))


class TestLocate:

    def test_arista(self, dos_nucleos):
        loc = locate(dos_nucleos, (0.0, 0.3))
        assert loc.kind == EDGE
        assert loc.edge == 0
        assert loc.cells == (0, 1)

    def test_interior(self, dos_nucleos):
        loc = locate(dos_nucleos, (-0.2, 0.0))
        assert loc.kind == INTERIOR
        assert loc.cell == 0

    def test_esquina(self, triangulo):
        loc = locate(triangulo, (0.5, 0.5 + 1e-12))
        assert loc.kind == CORNER
        assert loc.cells == (0, 1, 2)

    def test_tolerancia_no_positiva(self, triangulo):
        with pytest.raises(DomainError):
            locate(triangulo, (0.1, 0.1), tol=0.0)


class TestEspejo:

    def test_mirror_nucleus(self, dos_nucleos):
        arista = dos_nucleos.edges[0]
        np.testing.assert_allclose(mirror_nucleus(arista, 0), [1.0, 0.0])
        np.testing.assert_allclose(mirror_nucleus(arista, 1), [-1.0, 0.0])

    def test_celda_no_vecina(self, triangulo):
        arista = next(e for e in triangulo.edges if 2 not in e.neighbors)
        with pytest.raises(AdjacencyError):
            mirror_nucleus(arista, 2)

    def test_reflect(self, dos_nucleos):
        arista = dos_nucleos.edges[0]
        np.testing.assert_allclose(reflect(arista, (-1.0, 0.0)), [1.0, 0.0])
        np.testing.assert_allclose(reflect(arista, (-0.3, 2.0)), [0.3, 2.0])

    @settings(max_examples=25, deadline=None)
    @given(fronteras(n_min=2, n_max=8))
    def test_reflejo_de_nucleos(self, puntos):
        d = build(puntos)
        for arista in d.edges:
            i, j = arista.neighbors
            np.testing.assert_allclose(reflect(arista, d.boundary[i]), d.boundary[j], atol=1e-9)
