"""Pruebas de las espirales logarítmicas, los arcos rectos y el plano perforado."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from utils.errores import DomainError, ParameterError, SingularityError
from utils.espiral import (
    SpiralArc,
    StraightArc,
    punctured_distance,
    punctured_geodesic,
    qh_length_of_polyline,
    spiral_line_intersections,
    straight_qh_length,
)
from utils.geometria import Orientacion, ang

ORIGEN = np.zeros(2)


def espiral(alpha, largo=10.0):
    return SpiralArc(ORIGEN, 1.0, 0.0, alpha, largo)


class TestSpiralArc:

    def test_radial(self):
        arco = espiral(0.0)
        np.testing.assert_allclose(arco.point(1.0), [math.e, 0.0])
        np.testing.assert_allclose(arco.tangent(1.0), [1.0, 0.0])

    def test_circular(self):
        arco = espiral(math.pi / 2, 2 * math.pi)
        for t in (0.3, 1.0, 2.5):
            np.testing.assert_allclose(arco.point(t), [math.cos(t), math.sin(t)], atol=1e-14)
        assert arco.qh_length == pytest.approx(2 * math.pi)

    def test_pi_cuartos(self):
        arco = espiral(math.pi / 4)
        p = arco.point(1.0)
        assert math.hypot(*p) == pytest.approx(math.exp(math.cos(math.pi / 4)))
        assert math.atan2(p[1], p[0]) == pytest.approx(math.sin(math.pi / 4))

    def test_longitud_por_cuadratura(self):
        arco = espiral(math.pi / 4, 1.0)
        # |γ'(t)| / |γ(t)| integrado con la derivada por diferencias
        def integrando(t, h=1e-6):
            derivada = (arco.points([t + h])[0] - arco.points([t - h])[0]) / (2 * h)
            return math.hypot(*derivada) / math.hypot(*arco.points([t])[0])

        valor, _ = quad(integrando, 0.0, 1.0)
        assert valor == pytest.approx(1.0, rel=1e-8)

    @settings(max_examples=40)
    @given(st.floats(min_value=-3.1, max_value=3.1), st.floats(min_value=0.0, max_value=3.0))
    def test_angulo_constante_y_velocidad_canonica(self, alpha, t):
        arco = espiral(alpha, 3.0)
        punto = arco.point(t)
        assert ang(arco.tangent(t), punto) == pytest.approx(alpha, abs=1e-10)
        assert math.hypot(*arco.velocity(t)) == pytest.approx(math.hypot(*punto), rel=1e-10)

    def test_parametro_fuera_de_rango(self):
        with pytest.raises(ParameterError):
            espiral(0.3, 1.0).point(1.5)
        with pytest.raises(ParameterError):
            espiral(0.3, 1.0).tangent(-0.1)

    def test_desde_punto_y_direccion(self):
        arco = SpiralArc.from_point_direction(ORIGEN, (2.0, 0.0), (0.0, 1.0), 1.0)
        assert arco.alpha == pytest.approx(math.pi / 2)
        assert arco.rho0 == pytest.approx(2.0)
        with pytest.raises(DomainError):
            SpiralArc.from_point_direction(ORIGEN, (0.0, 0.0), (1.0, 0.0), 1.0)

    def test_sentido_de_curvatura(self):
        assert espiral(0.5).curving() == Orientacion.LEFT
        assert espiral(-0.5).curving() == Orientacion.RIGHT
        assert espiral(0.0).curving() == Orientacion.LEFT

    def test_invertida(self):
        arco = espiral(0.7, 1.3)
        vuelta = arco.reversed()
        np.testing.assert_allclose(vuelta.start_point, arco.end_point, atol=1e-12)
        np.testing.assert_allclose(vuelta.end_point, arco.start_point, atol=1e-12)

    def test_punto_logaritmico(self):
        arco = espiral(math.pi / 4, 2.0)
        np.testing.assert_allclose(arco.log_point(2.0), [2 * math.cos(math.pi / 4), 2 * math.sin(math.pi / 4)])


class TestStraightArc:

    def _arco(self, s0, s1, h=1.0):
        return StraightArc(0, ORIGEN, np.array([0.0, 1.0]), s0, s1, h)

    def test_longitudes(self):
        assert straight_qh_length(self._arco(0.0, 1.0)) == pytest.approx(0.881373587019543)
        assert straight_qh_length(self._arco(-1.0, 1.0)) == pytest.approx(2 * math.asinh(1.0))
        assert straight_qh_length(self._arco(0.4, 0.4)) == 0.0

    def test_longitud_por_cuadratura(self):
        valor, _ = quad(lambda s: 1.0 / math.hypot(1.0, s), 0.0, 1.0, epsabs=1e-13)
        assert straight_qh_length(self._arco(0.0, 1.0)) == pytest.approx(valor, abs=1e-10)

    def test_h_no_positivo(self):
        with pytest.raises(DomainError):
            self._arco(0.0, 1.0, h=0.0)

    def test_parametrizacion_canonica(self):
        arco = self._arco(-0.5, 2.0)
        largo = arco.qh_len
        np.testing.assert_allclose(arco.point(largo), [0.0, 2.0], atol=1e-12)
        for t in np.linspace(0.0, largo, 7):
            s = arco.point(t)[1]
            assert math.hypot(*arco.velocity(t)) == pytest.approx(math.hypot(1.0, s))

    def test_pie_y_punto(self):
        arco = StraightArc(edge=3, foot=np.array([1.0, 0.0]), direction=np.array([0.0, 1.0]),
                           s_start=0.0, s_end=1.0, h=1.0)
        assert callable(arco.point)
        np.testing.assert_allclose(arco.point(0.0), [1.0, 0.0])
        np.testing.assert_allclose(arco.truncated(arco.qh_len / 2).foot, [1.0, 0.0])
        assert arco.to_dict()['foot'] == [1.0, 0.0]
        assert arco.reversed().start_point.tolist() == [1.0, 1.0]

    def test_sentido_negativo(self):
        arco = self._arco(1.0, -1.0)
        np.testing.assert_allclose(arco.tangent(0.0), [0.0, -1.0])
        np.testing.assert_allclose(arco.end_point, [0.0, -1.0])


class TestPlanoPerforado:

    def test_distancias(self):
        assert punctured_distance(ORIGEN, (1.0, 0.0), (math.e, 0.0)) == pytest.approx(1.0)
        assert punctured_distance(ORIGEN, (1.0, 0.0), (0.0, 1.0)) == pytest.approx(math.pi / 2)
        assert punctured_distance(ORIGEN, (0.3, 0.2), (0.3, 0.2)) == 0.0

    def test_nucleo(self):
        with pytest.raises(DomainError):
            punctured_distance(ORIGEN, ORIGEN, (1.0, 0.0))

    def test_geodesica_radial(self):
        geo = punctured_geodesic(ORIGEN, (1.0, 0.0), (math.e, 0.0))
        assert geo.unique
        assert geo.arcs[0].alpha == pytest.approx(0.0)
        np.testing.assert_allclose(geo.arcs[0].end_point, [math.e, 0.0], atol=1e-10)

    def test_antipodal(self):
        geo = punctured_geodesic(ORIGEN, (1.0, 0.0), (-1.0, 0.0))
        assert not geo.unique
        assert len(geo.arcs) == 2
        for arco in geo.arcs:
            assert arco.qh_len == pytest.approx(math.pi)
            np.testing.assert_allclose(arco.end_point, [-1.0, 0.0], atol=1e-10)

    def test_pi_cuartos(self):
        y = (math.e * math.cos(1.0), math.e * math.sin(1.0))
        geo = punctured_geodesic(ORIGEN, (1.0, 0.0), y)
        assert geo.arcs[0].alpha == pytest.approx(math.pi / 4)
        assert geo.qh_len == pytest.approx(math.sqrt(2.0))

    @settings(max_examples=60)
    @given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=-3.1, max_value=3.1),
           st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=-3.1, max_value=3.1))
    def test_extremos_y_longitud(self, r1, t1, r2, t2):
        x = np.array([r1 * math.cos(t1), r1 * math.sin(t1)])
        y = np.array([r2 * math.cos(t2), r2 * math.sin(t2)])
        geo = punctured_geodesic(ORIGEN, x, y)
        arco = geo.arcs[0]
        assert arco.qh_len == pytest.approx(punctured_distance(ORIGEN, x, y), abs=1e-10)
        np.testing.assert_allclose(arco.end_point, y, atol=1e-9 * max(1.0, r2))

    @settings(max_examples=60)
    @given(st.lists(st.tuples(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=-3.1, max_value=3.1)),
                    min_size=3, max_size=3))
    def test_desigualdad_triangular(self, polares):
        a, b, c = (np.array([r * math.cos(t), r * math.sin(t)]) for r, t in polares)
        assert punctured_distance(ORIGEN, a, c) <= (punctured_distance(ORIGEN, a, b)
                                                     + punctured_distance(ORIGEN, b, c) + 1e-12)

    @settings(max_examples=60)
    @given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=-3.1, max_value=3.1),
           st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=-3.1, max_value=3.1))
    def test_gehring_palka(self, r1, t1, r2, t2):
        a = np.array([r1 * math.cos(t1), r1 * math.sin(t1)])
        b = np.array([r2 * math.cos(t2), r2 * math.sin(t2)])
        d = punctured_distance(ORIGEN, a, b)
        assert d >= math.log(r1 / r2) - 1e-12
        assert math.hypot(*(a - b)) <= math.expm1(d) * r1 * (1 + 1e-12) + 1e-12


class TestIntersecciones:

    def test_circular_contra_eje_vertical(self):
        raices = spiral_line_intersections(espiral(math.pi / 2), (0.0, 0.0), (0.0, 1.0), 3.0)
        assert raices[0] == pytest.approx(math.pi / 2, abs=1e-12)

    def test_radial_contra_recta(self):
        raices = spiral_line_intersections(espiral(0.0), (math.e, 0.0), (0.0, 1.0), 3.0)
        assert raices == [pytest.approx(1.0, abs=1e-12)]

    def test_sin_cortes(self):
        assert spiral_line_intersections(espiral(0.0), (0.0, 1.0), (1.0, 0.0), 3.0) == []

    def test_barrido_denso(self):
        arco = espiral(math.pi / 4)
        punto, direccion = np.array([0.2, -0.4]), np.array([1.0, 2.0]) / math.sqrt(5.0)
        normal = np.array([-direccion[1], direccion[0]])
        raices = spiral_line_intersections(arco, punto, direccion, 6.0)
        ts = np.arange(0.0, 6.0, 1e-4)
        valores = (arco.points(ts) - punto) @ normal
        cambios = ts[1:][np.sign(valores[1:]) != np.sign(valores[:-1])]
        assert len(raices) == len(cambios)
        np.testing.assert_allclose(raices, cambios, atol=2e-4)


class TestLongitudPoligonal:

    def test_radial(self, perforado):
        tramo = np.column_stack([np.linspace(1.0, math.e, 5), np.zeros(5)])
        assert qh_length_of_polyline(perforado, tramo) == pytest.approx(1.0, rel=1e-8)

    def test_circulo(self, perforado):
        t = np.linspace(0.0, 2 * math.pi, 4097)
        circulo = np.column_stack([np.cos(t), np.sin(t)])
        # La cuerda queda dentro del círculo: la longitud poligonal supera ligeramente 2π
        assert qh_length_of_polyline(perforado, circulo) == pytest.approx(2 * math.pi, rel=1e-6)

    def test_un_punto(self, perforado):
        assert qh_length_of_polyline(perforado, [[1.0, 1.0]]) == 0.0

    def test_por_el_nucleo(self, perforado):
        with pytest.raises(SingularityError):
            qh_length_of_polyline(perforado, [[-1.0, 0.0], [1.0, 0.0]])

    def test_dos_nucleos(self, dos_nucleos):
        # Sobre la arista δ = √(1 + s²)
        tramo = [[0.0, 0.0], [0.0, 1.0]]
        assert qh_length_of_polyline(dos_nucleos, tramo) == pytest.approx(math.asinh(1.0), rel=1e-8)
