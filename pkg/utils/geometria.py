"""
Primitivas planas y cálculo de ángulos.

Los puntos son arrays de numpy de forma (2,); los ángulos son floats.
Incluye el valor principal pr, el ángulo orientado ang entre vectores,
la orientación izquierda/derecha, el número de vueltas de una poligonal
cerrada y la clasificación del sentido de curvatura de una curva muestreada.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from utils.config import TOLERANCIAS
from utils.errores import AmbiguousPositionError, DomainError, InsufficientDataError

DOS_PI = 2.0 * math.pi


class Orientacion(str, Enum):
    """Resultado de points_left y curving_sign."""
    LEFT = 'left'
    RIGHT = 'right'
    PARALLEL = 'parallel'
    MIXED = 'mixed'


def como_punto(p, nombre='punto'):
    """
    Convierte p en un array float de forma (2,) y verifica que sea finito.

    Raises:
        DomainError: Si la forma no es (2,) o alguna coordenada no es finita
    """
    arr = np.asarray(p, dtype=float)
    if arr.shape != (2,):
        raise DomainError(f"{nombre} debe tener dos coordenadas, forma {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{nombre} tiene coordenadas no finitas: {arr}")
    return arr


def como_vector(v, nombre='vector'):
    """Como como_punto, pero además exige que v no sea el vector nulo."""
    arr = como_punto(v, nombre)
    if arr[0] == 0.0 and arr[1] == 0.0:
        raise DomainError(f"{nombre} es el vector nulo")
    return arr


def unitario(v):
    """Normaliza v; lanza DomainError si es nulo."""
    arr = como_vector(v)
    return arr / math.hypot(arr[0], arr[1])


def perpendicular(v):
    """Gira v un cuarto de vuelta en sentido antihorario."""
    return np.array([-v[1], v[0]], dtype=float)


def cruz(a, b):
    """Componente z del producto vectorial de dos vectores del plano."""
    return float(a[0] * b[1] - a[1] * b[0])


def distancia_a_segmento(z, a, b):
    """Distancia euclídea de z al segmento [a, b]."""
    ab = b - a
    largo2 = float(ab @ ab)
    if largo2 == 0.0:
        return float(math.hypot(*(z - a)))
    s = min(1.0, max(0.0, float((z - a) @ ab) / largo2))
    proy = a + s * ab
    return float(math.hypot(*(z - proy)))


def pr(theta):
    """
    Valor principal de theta módulo 2π en (-π, π].

    Args:
        theta: Ángulo en radianes

    Returns:
        Ángulo equivalente en (-π, π]

    Raises:
        DomainError: Si theta no es finito
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError(f"Ángulo no finito: {theta}")
    r = math.remainder(theta, DOS_PI)
    if r <= -math.pi + TOLERANCIAS['pr_frontera']:
        return min(r + DOS_PI, math.pi)
    return r


def pr_array(theta):
    """Versión vectorizada de pr para arrays de numpy."""
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise DomainError("Ángulos no finitos")
    r = np.remainder(theta + math.pi, DOS_PI) - math.pi
    cerca = r <= -math.pi + TOLERANCIAS['pr_frontera']
    return np.where(cerca, np.minimum(r + DOS_PI, math.pi), r)


def arg(v):
    """Argumento principal de un vector no nulo."""
    v = como_vector(v)
    return math.atan2(v[1], v[0])


def ang(x, y):
    """
    Ángulo orientado desde y hasta x: pr(arg(x) - arg(y)).

    Raises:
        DomainError: Si alguno de los vectores es nulo
    """
    x = como_vector(x, 'x')
    y = como_vector(y, 'y')
    return pr(math.atan2(x[1], x[0]) - math.atan2(y[1], y[0]))


def points_left(x, y):
    """
    Indica si x apunta a la izquierda de y.

    Returns:
        Orientacion.LEFT, Orientacion.RIGHT u Orientacion.PARALLEL
    """
    a = ang(x, y)
    if a == 0.0 or a == math.pi:
        return Orientacion.PARALLEL
    return Orientacion.LEFT if a > 0.0 else Orientacion.RIGHT


@dataclass(frozen=True)
class Polyline:
    """
    Poligonal ordenada, abierta o cerrada.

    Attributes:
        vertices: Array (n, 2) de vértices, n >= 2, consecutivos distintos
        closed: Si es cerrada, el último vértice se une con el primero
    """
    vertices: np.ndarray
    closed: bool = False

    def __post_init__(self):
        vert = np.array(self.vertices, dtype=float)
        if vert.ndim != 2 or vert.shape[1] != 2 or len(vert) < 2:
            raise DomainError("Una poligonal necesita al menos dos vértices")
        if not np.all(np.isfinite(vert)):
            raise DomainError("Vértices no finitos en la poligonal")
        pasos = np.diff(vert, axis=0)
        if np.any(np.all(pasos == 0.0, axis=1)):
            raise DomainError("Vértices consecutivos repetidos en la poligonal")
        vert.setflags(write=False)
        object.__setattr__(self, 'vertices', vert)

    def segmentos(self):
        """Pares (inicio, fin) de cada lado, incluido el de cierre."""
        v = self.vertices
        if self.closed and not np.array_equal(v[0], v[-1]):
            v = np.vstack([v, v[:1]])
        return v[:-1], v[1:]

    def longitud(self):
        a, b = self.segmentos()
        return float(np.sum(np.hypot(*(b - a).T)))

    def invertida(self):
        return Polyline(self.vertices[::-1].copy(), self.closed)

    def rotada(self, k):
        """Misma poligonal cerrada empezando en el vértice k."""
        return Polyline(np.roll(self.vertices, -k, axis=0), self.closed)


def winding_number(loop, z, tol=None):
    """
    Número de vueltas de una poligonal cerrada alrededor de z.

    Suma los incrementos pr(ang(v_{k+1} - z, v_k - z)) de cada lado y
    redondea a entero; no hay cuadratura.

    Args:
        loop: Polyline cerrada
        z: Punto de consulta
        tol: Distancia mínima admitida entre z y la poligonal

    Returns:
        Entero con el número de vueltas

    Raises:
        DomainError: Si la poligonal no es cerrada
        AmbiguousPositionError: Si z está a menos de tol de la poligonal
    """
    tol = TOLERANCIAS['vueltas'] if tol is None else tol
    if not loop.closed:
        raise DomainError("El número de vueltas requiere una poligonal cerrada")
    z = como_punto(z, 'z')
    inicio, fin = loop.segmentos()
    for a, b in zip(inicio, fin):
        if distancia_a_segmento(z, a, b) <= tol:
            raise AmbiguousPositionError(f"El punto {z} está sobre la poligonal")
    ra = inicio - z
    rb = fin - z
    giros = pr_array(np.arctan2(rb[:, 1], rb[:, 0]) - np.arctan2(ra[:, 1], ra[:, 0]))
    return int(round(float(np.sum(giros)) / DOS_PI))


@dataclass(frozen=True)
class Curvatura:
    """Sentido de curvatura y bandera de tramo recto (compatible con ambos sentidos)."""
    sentido: Orientacion
    recta: bool = False


def curving_sign(tangentes, tol=None):
    """
    Clasifica el sentido de curvatura a partir de tangentes unitarias muestreadas.

    Una curva es izquierda si todos los incrementos pr(ang(τ_{k+1}, τ_k)) son
    >= -tol y derecha si todos son <= tol. Los tramos rectos cumplen ambas
    condiciones; se informan como izquierda con recta=True.

    Args:
        tangentes: Array (n, 2) de tangentes en parámetros crecientes
        tol: Tolerancia en radianes por paso

    Returns:
        Curvatura

    Raises:
        InsufficientDataError: Si hay menos de tres muestras
    """
    tol = TOLERANCIAS['curvatura'] if tol is None else tol
    tang = np.asarray(tangentes, dtype=float)
    if tang.ndim != 2 or len(tang) < 3:
        raise InsufficientDataError("curving_sign necesita al menos tres tangentes")
    if np.any(np.hypot(tang[:, 0], tang[:, 1]) == 0.0):
        raise DomainError("Tangente nula en la muestra")
    angulos = np.arctan2(tang[:, 1], tang[:, 0])
    incrementos = pr_array(np.diff(angulos))
    izquierda = bool(np.all(incrementos >= -tol))
    derecha = bool(np.all(incrementos <= tol))
    if izquierda:
        return Curvatura(Orientacion.LEFT, recta=derecha)
    if derecha:
        return Curvatura(Orientacion.RIGHT)
    return Curvatura(Orientacion.MIXED)
