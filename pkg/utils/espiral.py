"""
Piezas geodésicas exactas.

Dentro de una celda de Voronoi la métrica es la del plano perforado en su
núcleo S, y la aplicación exponencial compleja es una isometría entre el
plano euclídeo y el plano perforado. Las geodésicas son por tanto imágenes
de rectas del plano logarítmico w = log|z - S| + i·arg(z - S): espirales
logarítmicas parametrizadas directamente por longitud cuasihiperbólica,

    γ(t) = S + ρ0·e^{t cos α}·(cos(θ0 + t sin α), sin(θ0 + t sin α)),

con α el ángulo constante entre la tangente y el radio saliente γ - S.
Sobre una arista la geodésica es un segmento recto con δ(s) = √(h² + s²).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from utils.config import TOLERANCIAS
from utils.errores import DomainError, ParameterError, SingularityError
from utils.geometria import Orientacion, Polyline, ang, como_punto, como_vector, cruz, pr, unitario

logger = logging.getLogger(__name__)


def _verificar_parametro(t, largo):
    holgura = 1e-12 * max(1.0, largo)
    if not (-holgura <= t <= largo + holgura):
        raise ParameterError(f"t = {t} fuera de [0, {largo}]")
    return min(max(float(t), 0.0), largo)


@dataclass(frozen=True)
class SpiralArc:
    """
    Arco de espiral logarítmica alrededor de center.

    Attributes:
        center: Núcleo S
        rho0: Radio inicial |γ(0) - S| > 0
        theta0: Argumento inicial de γ(0) - S
        alpha: Ángulo constante ang(γ', γ - S) en (-π, π]
        qh_len: Longitud cuasihiperbólica (rango del parámetro)
    """
    center: np.ndarray
    rho0: float
    theta0: float
    alpha: float
    qh_len: float

    def __post_init__(self):
        if not self.rho0 > 0.0:
            raise DomainError("El radio inicial de la espiral debe ser positivo")
        if self.qh_len < 0.0:
            raise ParameterError("Longitud negativa")
        centro = np.array(self.center, dtype=float)
        centro.setflags(write=False)
        object.__setattr__(self, 'center', centro)

    @classmethod
    def from_point_direction(cls, center, punto, direccion, qh_len):
        """Espiral que sale de punto con la tangente dada."""
        center = como_punto(center, 'S')
        radial = como_punto(punto) - center
        rho0 = math.hypot(*radial)
        if rho0 == 0.0:
            raise DomainError("El punto coincide con el núcleo")
        return cls(center, rho0, math.atan2(radial[1], radial[0]),
                   ang(como_vector(direccion, 'dirección'), radial), float(qh_len))

    @property
    def qh_length(self):
        return self.qh_len

    def _polares(self, t):
        return self.rho0 * np.exp(t * math.cos(self.alpha)), self.theta0 + t * math.sin(self.alpha)

    def points(self, ts):
        """Evaluación vectorizada sin control de rango: array (n, 2)."""
        rho, theta = self._polares(np.asarray(ts, dtype=float))
        return self.center + np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])

    def tangents(self, ts):
        _, theta = self._polares(np.asarray(ts, dtype=float))
        return np.column_stack([np.cos(theta + self.alpha), np.sin(theta + self.alpha)])

    def point(self, t):
        t = _verificar_parametro(t, self.qh_len)
        return self.points([t])[0]

    def tangent(self, t):
        t = _verificar_parametro(t, self.qh_len)
        return self.tangents([t])[0]

    def velocity(self, t):
        """γ'(t) = |γ(t) - S|·tangente (parametrización canónica)."""
        t = _verificar_parametro(t, self.qh_len)
        rho, _ = self._polares(t)
        return rho * self.tangent(t)

    def log_point(self, t):
        """Coordenadas (log ρ, θ) en el plano logarítmico, θ sin reducir."""
        t = _verificar_parametro(t, self.qh_len)
        return np.array([math.log(self.rho0) + t * math.cos(self.alpha), self.theta0 + t * math.sin(self.alpha)])

    @property
    def start_point(self):
        return self.points([0.0])[0]

    @property
    def end_point(self):
        return self.points([self.qh_len])[0]

    @property
    def end_tangent(self):
        return self.tangents([self.qh_len])[0]

    def curving(self):
        """Izquierda si sin α > 0, derecha si sin α < 0; las rectas (radiales) se informan izquierda."""
        s = math.sin(self.alpha)
        return Orientacion.RIGHT if s < 0.0 else Orientacion.LEFT

    def truncated(self, t):
        return SpiralArc(self.center, self.rho0, self.theta0, self.alpha, _verificar_parametro(t, self.qh_len))

    def with_length(self, largo):
        return SpiralArc(self.center, self.rho0, self.theta0, self.alpha, float(largo))

    def reversed(self):
        rho, theta = self._polares(self.qh_len)
        return SpiralArc(self.center, float(rho), float(theta), pr(self.alpha + math.pi), self.qh_len)

    def to_dict(self):
        return {
            'type': 'spiral',
            'center': self.center.tolist(),
            'rho0': self.rho0,
            'theta0': self.theta0,
            'alpha': self.alpha,
            'qh_len': self.qh_len,
        }


@dataclass(frozen=True)
class StraightArc:
    """
    Segmento recorrido sobre una arista.

    Los desplazamientos s se miden desde el pie de la perpendicular del
    núcleo sobre la recta soporte (foot); h es la distancia de los
    núcleos vecinos a esa recta.
    """
    edge: int
    foot: np.ndarray
    direction: np.ndarray
    s_start: float
    s_end: float
    h: float

    def __post_init__(self):
        if not self.h > 0.0:
            raise DomainError("h debe ser positivo")
        for nombre in ('foot', 'direction'):
            arr = np.array(getattr(self, nombre), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, nombre, arr)

    @classmethod
    def on_edge(cls, arista, s_start, s_end):
        return cls(arista.index, arista.point, arista.direction, float(s_start), float(s_end), arista.h)

    @property
    def sentido(self):
        return 1.0 if self.s_end >= self.s_start else -1.0

    @property
    def qh_len(self):
        return straight_qh_length(self)

    @property
    def qh_length(self):
        return self.qh_len

    def offset_at(self, t):
        """Desplazamiento s(t) = h·sinh(asinh(s0/h) ± t)."""
        u0 = math.asinh(self.s_start / self.h)
        return self.h * np.sinh(u0 + self.sentido * np.asarray(t, dtype=float))

    def points(self, ts):
        s = np.atleast_1d(self.offset_at(ts))
        return self.foot + s[:, None] * self.direction

    def tangents(self, ts):
        n = len(np.atleast_1d(ts))
        return np.tile(self.sentido * self.direction, (n, 1))

    def point(self, t):
        t = _verificar_parametro(t, self.qh_len)
        return self.points([t])[0]

    def tangent(self, t):
        _verificar_parametro(t, self.qh_len)
        return self.sentido * self.direction

    def velocity(self, t):
        t = _verificar_parametro(t, self.qh_len)
        s = float(self.offset_at(t))
        return math.hypot(self.h, s) * self.tangent(t)

    @property
    def start_point(self):
        return self.foot + self.s_start * self.direction

    @property
    def end_point(self):
        return self.foot + self.s_end * self.direction

    @property
    def end_tangent(self):
        return self.sentido * self.direction

    def truncated(self, t):
        t = _verificar_parametro(t, self.qh_len)
        return StraightArc(self.edge, self.foot, self.direction, self.s_start, float(self.offset_at(t)), self.h)

    def reversed(self):
        return StraightArc(self.edge, self.foot, self.direction, self.s_end, self.s_start, self.h)

    def to_dict(self):
        return {
            'type': 'straight',
            'edge': self.edge,
            'foot': self.foot.tolist(),
            'direction': self.direction.tolist(),
            's_start': self.s_start,
            's_end': self.s_end,
            'h': self.h,
        }


@dataclass(frozen=True)
class PuncturedGeodesic:
    """Geodésica(s) del plano perforado entre dos puntos."""
    arcs: tuple
    unique: bool

    @property
    def qh_len(self):
        return self.arcs[0].qh_len


def _coordenadas_log(S, z):
    radial = z - S
    rho = math.hypot(*radial)
    if rho == 0.0:
        raise DomainError(f"El punto {z} coincide con el núcleo {S}")
    return math.log(rho), math.atan2(radial[1], radial[0])


def punctured_distance(S, x, y):
    """
    Distancia cuasihiperbólica en el plano perforado en S.

        √(log²(|x-S|/|y-S|) + φ²),  φ ∈ [0, π] ángulo en S entre x-S e y-S

    Raises:
        DomainError: Si x o y coinciden con S
    """
    S, x, y = como_punto(S, 'S'), como_punto(x, 'x'), como_punto(y, 'y')
    lx, tx = _coordenadas_log(S, x)
    ly, ty = _coordenadas_log(S, y)
    return math.hypot(ly - lx, abs(pr(ty - tx)))


def punctured_geodesic(S, x, y):
    """
    Geodésica del plano perforado de x a y.

    Es la imagen del segmento del plano logarítmico; cuando el ángulo en S
    vale π (tolerancia 1e-12) hay dos geodésicas simétricas y se devuelven
    ambas con unique=False.

    Returns:
        PuncturedGeodesic
    """
    S, x, y = como_punto(S, 'S'), como_punto(x, 'x'), como_punto(y, 'y')
    lx, tx = _coordenadas_log(S, x)
    ly, ty = _coordenadas_log(S, y)
    rho0 = math.exp(lx)
    dlog = ly - lx
    dtheta = pr(ty - tx)

    def arco(giro):
        largo = math.hypot(dlog, giro)
        alpha = math.atan2(giro, dlog) if largo > 0.0 else 0.0
        return SpiralArc(S, rho0, tx, pr(alpha), largo)

    if abs(abs(dtheta) - math.pi) <= TOLERANCIAS['antipodal']:
        return PuncturedGeodesic((arco(math.pi), arco(-math.pi)), False)
    return PuncturedGeodesic((arco(dtheta),), True)


def straight_qh_length(arc):
    """
    Longitud cuasihiperbólica de un arco recto: |asinh(s_end/h) - asinh(s_start/h)|.

    Raises:
        DomainError: Si h <= 0
    """
    if not arc.h > 0.0:
        raise DomainError("h debe ser positivo")
    return abs(math.asinh(arc.s_end / arc.h) - math.asinh(arc.s_start / arc.h))


def malla_parametros(alpha, t_max):
    """
    Parámetros de muestreo de una espiral en [0, t_max].

    El paso garantiza un giro angular <= π/64 y un crecimiento radial
    acotado entre muestras consecutivas.
    """
    seno = abs(math.sin(alpha))
    paso = TOLERANCIAS['paso_radial']
    if seno > 0.0:
        paso = min(paso, TOLERANCIAS['paso_angular'] / seno)
    n = max(2, int(math.ceil(t_max / paso)) + 1)
    return np.linspace(0.0, t_max, n)


def refinar_raiz(f, a, b):
    """Raíz de f en [a, b] (con cambio de signo) mediante brentq."""
    return brentq(f, a, b, xtol=1e-15, maxiter=200)


def primeras_raices(arc, anclas, normales, t_max, todas=False):
    """
    Cruces de la espiral con varias rectas n·(z - p) = 0.

    Args:
        arc: SpiralArc (se evalúa sin control de rango)
        anclas: Array (E, 2) con un punto de cada recta
        normales: Array (E, 2) con la normal unitaria de cada recta
        t_max: Parámetro máximo
        todas: Si es False solo se devuelve la primera raíz de cada recta

    Returns:
        Lista (por recta) de listas de raíces t en (0, t_max] crecientes
    """
    anclas = np.atleast_2d(anclas)
    normales = np.atleast_2d(normales)
    ts = malla_parametros(arc.alpha, t_max)
    puntos = arc.points(ts)
    valores = np.einsum('nek,ek->ne', puntos[:, None, :] - anclas[None, :, :], normales)
    escala = max(arc.rho0, float(np.max(np.abs(puntos - arc.center))) if len(puntos) else arc.rho0)
    tol0 = TOLERANCIAS['raiz_linea'] * max(1.0, escala)
    tangente0 = arc.tangents([0.0])[0]

    resultado = []
    for k in range(len(anclas)):
        p, n = anclas[k], normales[k]

        def f(t, p=p, n=n):
            return float((arc.points([t])[0] - p) @ n)

        g = valores[:, k]
        signo0 = np.sign(g[0])
        if abs(g[0]) <= tol0:
            derivada = float(tangente0 @ n)
            signo0 = np.sign(derivada) if derivada != 0.0 else np.sign(g[1])
        raices = []
        previo_t, previo_signo = 0.0, signo0
        for j in range(1, len(ts)):
            signo = np.sign(g[j])
            if signo == 0.0:
                raices.append(float(ts[j]))
            elif previo_signo != 0.0 and signo != previo_signo:
                a = previo_t
                if a == 0.0 and np.sign(f(0.0)) != signo0:
                    a = _desplazar_inicio(f, ts[j], signo0)
                if a is not None:
                    raices.append(float(refinar_raiz(f, a, ts[j])))
            previo_t, previo_signo = float(ts[j]), signo
            if raices and not todas:
                break
        resultado.append(raices)
    return resultado


def _desplazar_inicio(f, t1, signo):
    """Primer t pequeño con f(t) del signo esperado (la raíz en t = 0 se excluye)."""
    t = t1
    for _ in range(60):
        t *= 0.5
        if np.sign(f(t)) == signo:
            return t
    return None


def spiral_line_intersections(arc, point, direction, t_max):
    """
    Parámetros t en (0, t_max] donde la espiral corta una recta.

    Args:
        arc: SpiralArc (su qh_len no limita la búsqueda)
        point: Punto de la recta
        direction: Dirección de la recta
        t_max: Extremo de la ventana

    Returns:
        Lista creciente de raíces; vacía si no hay cruces
    """
    d = unitario(direction)
    normal = np.array([-d[1], d[0]])
    return primeras_raices(arc, como_punto(point), normal, float(t_max), todas=True)[0]


def _cortes_bisectrices(domain, a, b):
    """Parámetros en (0, 1) donde el segmento [a, b] cambia de núcleo más cercano."""
    muestras = np.linspace(0.0, 1.0, 33)
    cercanos = domain.nearest_many(a + muestras[:, None] * (b - a))
    cortes = []
    for k in np.flatnonzero(cercanos[1:] != cercanos[:-1]):
        ni, nj = domain.boundary[cercanos[k]], domain.boundary[cercanos[k + 1]]
        u = nj - ni
        denominador = float(u @ (b - a))
        if denominador != 0.0:
            s = float(u @ ((ni + nj) / 2.0 - a)) / denominador
            if 0.0 < s < 1.0:
                cortes.append(s)
    return sorted(set(cortes))


def qh_length_of_polyline(domain, p, rel_tol=None):
    """
    Longitud cuasihiperbólica de una poligonal por cuadratura adaptativa.

    Args:
        domain: VoronoiDomain
        p: Polyline o array (n, 2) de vértices
        rel_tol: Error relativo objetivo (1e-8 por defecto)

    Returns:
        Suma de ∫ |dz|/δ(z) sobre los lados

    Raises:
        SingularityError: Si algún lado pasa por un núcleo
    """
    rel_tol = TOLERANCIAS['cuadratura_rel'] if rel_tol is None else rel_tol
    if isinstance(p, Polyline):
        inicio, fin = p.segmentos()
    else:
        vertices = np.asarray(p, dtype=float).reshape(-1, 2)
        if len(vertices) < 2:
            return 0.0
        inicio, fin = vertices[:-1], vertices[1:]

    limite = TOLERANCIAS['singularidad'] * domain.escala
    total = 0.0
    for a, b in zip(inicio, fin):
        largo = math.hypot(*(b - a))
        if largo == 0.0:
            continue
        tramo = (b - a) / largo
        relativos = domain.boundary - a
        proyeccion = np.clip(relativos @ tramo, 0.0, largo)
        cercania = np.hypot(*(relativos - proyeccion[:, None] * tramo).T)
        if float(cercania.min()) <= limite:
            raise SingularityError(f"El segmento {a} -> {b} pasa por un núcleo")

        def densidad(s, a=a, b=b, largo=largo):
            return largo / domain.delta(a + s * (b - a))

        cortes = _cortes_bisectrices(domain, a, b)
        valor, _ = quad(densidad, 0.0, 1.0, points=cortes or None, epsabs=0.0,
                        epsrel=rel_tol / 10.0, limit=200)
        total += valor
    return total
