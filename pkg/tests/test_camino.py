"""Pruebas de los caminos compuestos: recorte, concatenación, inversión y JSON."""

import math

import numpy as np
import pytest

from utils.camino import CROSSING, GeodesicPath
from utils.motor_geodesico import shoot

LOG2 = math.log(2.0)


def _resto(cruce, inicio):
    """Piezas de cruce posteriores a la primera como camino propio."""
    return GeodesicPath.from_pieces(inicio.endpoint, inicio.end_tangent, cruce.pieces[1:], cells=cruce.cells[1:])


@pytest.fixture
def cruce(dos_nucleos):
    """Radial de (-0.5, 0) a (0.5, 0): sale del núcleo izquierdo y entra hacia el derecho."""
    return shoot(dos_nucleos, (-0.5, 0.0), (1.0, 0.0), 2 * LOG2)


class TestComposicion:

    def test_piezas_y_celdas(self, cruce):
        assert len(cruce.pieces) == 2
        assert cruce.cell_sequence() == [0, 1]
        np.testing.assert_allclose(cruce.junctions(), [LOG2], atol=1e-9)
        np.testing.assert_allclose(cruce.endpoint, [0.5, 0.0], atol=1e-9)

    def test_suceso_de_cruce(self, cruce):
        (suceso,) = cruce.events
        assert suceso.kind == CROSSING
        assert suceso.cells == (0, 1)
        assert suceso.t == pytest.approx(LOG2, abs=1e-9)
        assert not suceso.flagged

    def test_continuidad_c1(self, cruce):
        salto_c0, salto_c1 = cruce.max_junction_gaps()
        assert salto_c0 <= 1e-9
        assert salto_c1 <= 1e-7

    def test_parametrizacion_canonica(self, cruce, dos_nucleos):
        for t in np.linspace(0.0, cruce.total_qh_len, 25):
            p = cruce.point(t)
            assert math.hypot(*cruce.velocity(t)) == pytest.approx(dos_nucleos.delta(p), rel=1e-7)

    def test_longitud_aditiva(self, cruce):
        assert cruce.total_qh_len == sum(p.qh_len for p in cruce.pieces)
        assert cruce.piece_offsets[-1] == pytest.approx(cruce.total_qh_len)


class TestOperaciones:

    def test_truncar(self, cruce):
        mitad = cruce.truncate(LOG2)
        assert mitad.total_qh_len == pytest.approx(LOG2, abs=1e-9)
        np.testing.assert_allclose(mitad.endpoint, [0.0, 0.0], atol=1e-9)
        parte = cruce.truncate(LOG2 / 2)
        assert len(parte.pieces) == 1
        np.testing.assert_allclose(parte.endpoint, [-1.0 + math.sqrt(2.0) / 2, 0.0], atol=1e-9)

    def test_truncar_fuera_de_rango(self, cruce):
        assert cruce.truncate(10.0).total_qh_len == pytest.approx(cruce.total_qh_len)
        assert cruce.truncate(-1.0).pieces == ()

    def test_invertido(self, cruce):
        vuelta = cruce.reversed()
        np.testing.assert_allclose(vuelta.start, cruce.endpoint)
        np.testing.assert_allclose(vuelta.endpoint, cruce.start, atol=1e-9)
        np.testing.assert_allclose(vuelta.direction, [-1.0, 0.0], atol=1e-9)
        assert vuelta.cell_sequence() == [1, 0]
        assert vuelta.events[0].cells == (1, 0)

    def test_concatenar(self, cruce):
        a = cruce.truncate(LOG2)
        b = _resto(cruce, a)
        unido = a.concatenate(b)
        assert unido.total_qh_len == pytest.approx(cruce.total_qh_len)
        np.testing.assert_allclose(unido.endpoint, cruce.endpoint, atol=1e-9)

    def test_muestreo(self, cruce):
        ts, puntos = cruce.sample(11)
        assert ts[0] == 0.0 and ts[-1] == cruce.total_qh_len
        assert puntos.shape == (11, 2)
        densos = cruce.dense_points(por_pieza=8)
        assert densos.shape == (17, 2)

    def test_camino_vacio(self):
        vacio = GeodesicPath.from_pieces((1.0, 2.0), (0.0, 3.0), ())
        assert vacio.total_qh_len == 0.0
        np.testing.assert_allclose(vacio.endpoint, [1.0, 2.0])
        np.testing.assert_allclose(vacio.end_tangent, [0.0, 1.0])
        np.testing.assert_allclose(vacio.velocity(0.0), [0.0, 0.0])
        assert vacio.dense_points().shape == (1, 2)


class TestJson:

    def test_campos_en_orden(self, cruce):
        datos = cruce.to_dict()
        assert list(datos) == ['start', 'direction', 'total_qh_len', 'endpoint', 'pieces', 'events']
        assert [p['cell'] for p in datos['pieces']] == [0, 1]
        assert datos['events'][0]['kind'] == CROSSING
