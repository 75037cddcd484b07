"""Pruebas del motor geodésico contra las soluciones cerradas."""

import math

import numpy as np
import pytest

from utils.camino import SLIDING_START
from utils.config import LIMITES
from utils.errores import ConvergenceError, DomainError, GeodesicError, InputError
from utils.espiral import SpiralArc, StraightArc, qh_length_of_polyline
from utils.geometria import Polyline, winding_number
from utils.motor_geodesico import connect, exp_map, prolong, qh_distance, shoot, trace_ball, validate_ball
from utils.voronoi import build

ASINH2 = math.asinh(2.0)


@pytest.fixture
def horizontal():
    """Núcleos (0, ±1): la arista es el eje x."""
    return build([[0.0, -1.0], [0.0, 1.0]])


class TestShoot:

    def test_radial(self, perforado):
        camino = shoot(perforado, (1.0, 0.0), (1.0, 0.0), 1.0)
        assert len(camino.pieces) == 1
        assert isinstance(camino.pieces[0], SpiralArc)
        np.testing.assert_allclose(camino.endpoint, [math.e, 0.0])
        assert camino.events == ()

    def test_circular(self, perforado):
        np.testing.assert_allclose(exp_map(perforado, (1.0, 0.0), math.pi / 2, math.pi / 2), [0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(exp_map(perforado, (1.0, 0.0), 0.0, 1.0), [math.e, 0.0])

    def test_normaliza_la_direccion(self, perforado):
        camino = shoot(perforado, (1.0, 0.0), (3.0, 0.0), 1.0)
        np.testing.assert_allclose(camino.endpoint, [math.e, 0.0])

    def test_longitud_cero(self, perforado):
        camino = shoot(perforado, (1.0, 0.0), (0.0, 1.0), 0.0)
        assert camino.total_qh_len == 0.0
        np.testing.assert_allclose(camino.endpoint, [1.0, 0.0])

    def test_desliza_por_la_bisectriz(self, horizontal):
        camino = shoot(horizontal, (-2.0, 0.0), (1.0, 0.0), 2 * ASINH2)
        assert len(camino.pieces) == 1
        assert isinstance(camino.pieces[0], StraightArc)
        np.testing.assert_allclose(camino.endpoint, [2.0, 0.0], atol=1e-9)
        assert camino.events[0].kind == SLIDING_START

    def test_cruce_entre_celdas(self, dos_nucleos):
        camino = shoot(dos_nucleos, (-0.5, 0.0), (1.0, 0.0), 2 * math.log(2.0))
        np.testing.assert_allclose(camino.endpoint, [0.5, 0.0], atol=1e-9)

    def test_sobre_la_frontera(self, perforado):
        with pytest.raises(DomainError):
            shoot(perforado, (0.0, 0.0), (1.0, 0.0), 1.0)

    def test_longitud_negativa(self, perforado):
        with pytest.raises(DomainError):
            shoot(perforado, (1.0, 0.0), (1.0, 0.0), -0.5)

    def test_tope_de_piezas(self, dos_nucleos, monkeypatch):
        monkeypatch.setitem(LIMITES, 'max_piezas', 1)
        with pytest.raises(GeodesicError):
            shoot(dos_nucleos, (-0.5, 0.0), (1.0, 0.0), 2 * math.log(2.0))

    @pytest.mark.slow
    def test_longitud_por_cuadratura(self):
        rng = np.random.default_rng(7)
        d = build(rng.uniform(0.0, 1.0, size=(10, 2)))
        x = np.array([0.5, 0.5]) + 0.01 * rng.standard_normal(2)
        for phi in rng.uniform(-math.pi, math.pi, size=5):
            camino = shoot(d, x, (math.cos(phi), math.sin(phi)), 1.5)
            assert camino.total_qh_len == pytest.approx(1.5)
            salto_c0, salto_c1 = camino.max_junction_gaps()
            assert salto_c0 <= 1e-9 and salto_c1 <= 1e-7
            assert qh_length_of_polyline(d, camino.dense_points(256)) == pytest.approx(1.5, rel=1e-5)


class TestConnect:

    def test_cuarto_de_vuelta(self, perforado):
        resultado = connect(perforado, (1.0, 0.0), (0.0, 1.0))
        assert resultado.unique
        assert resultado.distance == pytest.approx(math.pi / 2, abs=1e-8)
        np.testing.assert_allclose(resultado.paths[0].endpoint, [0.0, 1.0], atol=1e-8)

    def test_antipodas(self, perforado):
        resultado = connect(perforado, (1.0, 0.0), (-1.0, 0.0))
        assert not resultado.unique
        assert len(resultado.paths) == 2
        for camino in resultado.paths:
            assert camino.total_qh_len == pytest.approx(math.pi, abs=1e-8)

    def test_bisectriz(self, horizontal):
        resultado = connect(horizontal, (-2.0, 0.0), (2.0, 0.0))
        assert resultado.unique
        assert resultado.distance == pytest.approx(2 * ASINH2, abs=1e-8)

    def test_mismo_punto(self, perforado):
        assert qh_distance(perforado, (0.3, 0.4), (0.3, 0.4)) == 0.0

    def test_simetria(self, perforado):
        a, b = (1.0, 0.0), (0.0, 2.0)
        assert qh_distance(perforado, a, b) == pytest.approx(qh_distance(perforado, b, a), abs=1e-8)

    def test_gehring_palka(self, dos_nucleos):
        x, y = np.array([-0.5, 0.2]), np.array([0.4, -0.3])
        d = qh_distance(dos_nucleos, x, y)
        dx, dy = dos_nucleos.delta(x), dos_nucleos.delta(y)
        assert d >= abs(math.log(dx / dy)) - 1e-9
        assert math.hypot(*(x - y)) <= math.expm1(d) * min(dx, dy) + 1e-9

    def test_extremo_en_un_nucleo(self, perforado):
        with pytest.raises(DomainError):
            connect(perforado, (1.0, 0.0), (0.0, 0.0))

    @pytest.mark.slow
    def test_semilla_del_oraculo(self, perforado, monkeypatch):
        # Sin candidatos del anillo ni grafo de uniones solo queda el oráculo
        monkeypatch.setitem(LIMITES, 'candidatos_refinar', 0)

        def sin_grafo(self):
            raise ConvergenceError("grafo deshabilitado", 1.0)

        monkeypatch.setattr('utils.motor_geodesico.GrafoUniones.resolver', sin_grafo)
        x, y = (1.0, 0.0), (0.0, 1.0)
        with pytest.raises(ConvergenceError):
            connect(perforado, x, y, usar_oraculo=False)
        assert connect(perforado, x, y).distance == pytest.approx(math.pi / 2, abs=1e-8)
        assert connect(perforado, x, y, usar_oraculo=True).distance == pytest.approx(math.pi / 2, abs=1e-8)

    @pytest.mark.slow
    def test_optimalidad_local(self, dos_nucleos):
        resultado = connect(dos_nucleos, (-0.5, 0.0), (0.5, 0.3))
        camino = resultado.paths[0]
        assert len(camino.cell_sequence()) == 2
        ts, puntos = camino.sample(201)
        perfil = np.sin(np.linspace(0.0, math.pi, 41)) ** 2
        centros = [int(np.argmin(np.abs(ts - t))) for t in camino.junctions()] + [60, 140]
        for k in centros:
            k = min(max(k, 21), 179)
            tangente = camino.tangent(ts[k])
            normal = np.array([-tangente[1], tangente[0]])
            for signo in (1.0, -1.0):
                desplazados = puntos.copy()
                desplazados[k - 20:k + 21] += signo * 1e-3 * dos_nucleos.delta(puntos[k]) * perfil[:, None] * normal
                assert qh_length_of_polyline(dos_nucleos, desplazados) >= resultado.distance * (1.0 - 1e-7)

    @pytest.mark.slow
    def test_lazo_de_dos_geodesicas(self, perforado):
        resultado = connect(perforado, (1.0, 0.0), (-1.0, 0.0))
        ida, vuelta = (c.dense_points() for c in resultado.paths)
        lazo = Polyline(np.vstack([ida, vuelta[::-1][1:-1]]), closed=True)
        vueltas = winding_number(lazo, (0.0, 0.0))
        assert vueltas != 0
        assert qh_length_of_polyline(perforado, lazo) >= 2 * math.pi * abs(vueltas) - 1e-3


class TestTraceBall:

    def test_pocas_muestras(self, perforado):
        with pytest.raises(InputError):
            trace_ball(perforado, (1.0, 0.0), 0.5, n_samples=8)

    def test_radio_no_positivo(self, perforado):
        with pytest.raises(DomainError):
            trace_ball(perforado, (1.0, 0.0), 0.0)

    def test_plano_perforado(self, perforado):
        bola = trace_ball(perforado, (1.0, 0.0), 0.5, n_samples=16)
        puntos = bola.boundary
        radios_log = np.hypot(np.log(np.hypot(*puntos.T)), np.arctan2(puntos[:, 1], puntos[:, 0]))
        np.testing.assert_allclose(radios_log, 0.5, atol=1e-8)
        assert np.all(np.diff(bola.angles) > 0.0)
        for _, _, camino in bola.samples:
            assert camino.total_qh_len == pytest.approx(0.5, abs=1e-9)

    def test_refinamiento_adaptativo(self, perforado):
        bola = trace_ball(perforado, (1.0, 0.0), 0.5, n_samples=16)
        assert len(bola.samples) > 16
        huecos = np.hypot(*(np.roll(bola.boundary, -1, axis=0) - bola.boundary).T)
        assert huecos.max() <= 0.01 + 1e-12

    def test_radio_pequeno(self, perforado):
        r = 1e-3
        bola = trace_ball(perforado, (1.0, 0.0), r, n_samples=32)
        separaciones = np.hypot(*(bola.boundary - [1.0, 0.0]).T)
        np.testing.assert_allclose(separaciones, r, rtol=1e-3)

    def test_validacion_por_distancia(self, perforado):
        bola = trace_ball(perforado, (1.0, 0.0), 0.5, n_samples=16)
        assert validate_ball(perforado, bola, subsample=4) <= 1e-6

    def test_convexa_con_radio_pequeno(self, perforado):
        assert trace_ball(perforado, (1.0, 0.0), 0.009, n_samples=64).is_convex()

    def test_paralelo_igual_que_secuencial(self, dos_nucleos):
        serie = trace_ball(dos_nucleos, (-0.5, 0.1), 0.6, n_samples=16)
        hilos = trace_ball(dos_nucleos, (-0.5, 0.1), 0.6, n_samples=16, workers=4)
        np.testing.assert_array_equal(serie.angles, hilos.angles)
        np.testing.assert_array_equal(serie.boundary, hilos.boundary)


class TestProlong:

    def test_radial(self, perforado):
        camino = shoot(perforado, (1.0, 0.0), (1.0, 0.0), 1.0)
        np.testing.assert_allclose(prolong(perforado, camino, 1.0).endpoint, [math.e ** 2, 0.0])

    def test_cero_devuelve_el_mismo(self, perforado):
        camino = shoot(perforado, (1.0, 0.0), (0.0, 1.0), 0.7)
        assert prolong(perforado, camino, 0.0) is camino

    def test_prolongar_y_truncar(self, dos_nucleos):
        corto = shoot(dos_nucleos, (-0.5, 0.2), (1.0, 0.3), 0.8)
        largo = prolong(dos_nucleos, corto, 0.9)
        assert largo.total_qh_len == pytest.approx(1.7)
        recortado = largo.truncate(corto.total_qh_len)
        for t in np.linspace(0.0, corto.total_qh_len, 100):
            np.testing.assert_allclose(recortado.point(t), corto.point(t), atol=1e-9)
        salto_c0, salto_c1 = largo.max_junction_gaps()
        assert salto_c0 <= 1e-9 and salto_c1 <= 1e-7

    def test_extra_negativo(self, perforado):
        camino = shoot(perforado, (1.0, 0.0), (1.0, 0.0), 1.0)
        with pytest.raises(DomainError):
            prolong(perforado, camino, -1.0)
