"""
Motor geodésico: integración por disparo a través de las celdas de Voronoi.

Una geodésica cuasihiperbólica de un dominio de Voronoi está formada por
arcos de espiral logarítmica (uno por visita a una celda, alrededor de su
núcleo) pegados de forma C¹ sobre las aristas, y por segmentos rectos que
deslizan a lo largo de una arista. shoot integra el problema de valor
inicial pieza a pieza; connect resuelve el problema de dos puntos por
disparo múltiple más el grafo de uniones; trace_ball y prolong se apoyan en
shoot.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, least_squares, minimize_scalar

from utils.camino import CORNER, CROSSING, SLIDING_END, SLIDING_START, TOUCHING, GeodesicPath, ShootEvent
from utils.config import LIMITES, TOLERANCIAS
from utils.errores import (
    ConvergenceError,
    DomainError,
    GeodesicError,
    InputError,
    QuasihyperbolicError,
    ResolutionError,
)
from utils.espiral import SpiralArc, StraightArc, malla_parametros, primeras_raices
from utils.geometria import DOS_PI, arg, como_punto, cruz, pr, unitario
from utils.grafo_uniones import GrafoUniones, cota_superior
from utils.oraculo import semilla_oraculo
from utils.voronoi import CORNER as LOC_CORNER
from utils.voronoi import EDGE as LOC_EDGE

logger = logging.getLogger(__name__)

# Longitud restante por debajo de la cual el disparo termina
_FIN = 1e-14

# Modos del integrador
_LANZAMIENTO = 'lanzamiento'
_DESLIZANDO = 'deslizando'
_TRAS_ESPIRAL = 'tras_espiral'


def _verificar_interior(domain, z, nombre):
    z = como_punto(z, nombre)
    if domain.delta(z) == 0.0:
        raise DomainError(f"{nombre} = {z} está sobre la frontera (δ = 0)")
    return z


def _verificar_longitud(r):
    r = float(r)
    if not math.isfinite(r) or r < 0.0:
        raise DomainError(f"La longitud debe ser finita y no negativa: {r}")
    return r


def _paralela(tangente, direccion):
    return abs(cruz(tangente, direccion)) <= TOLERANCIAS['tangencia']


class _Disparo:
    """Estado de una integración: piezas, celdas y sucesos acumulados."""

    def __init__(self, domain):
        self.d = domain
        self.tol = TOLERANCIAS['localizar'] * domain.escala
        self.piezas = []
        self.celdas = []
        self.sucesos = []
        self.t = 0.0

    def ejecutar(self, x, tangente, r):
        punto = x
        restante = r
        modo = _LANZAMIENTO
        previa = None

        while restante > _FIN:
            if len(self.piezas) >= LIMITES['max_piezas']:
                raise GeodesicError(
                    f"Se superaron {LIMITES['max_piezas']} piezas (t = {self.t:.6g}, restante {restante:.6g})"
                )
            loc = self.d.locate(punto, self.tol)
            tipo, soporte, clase, marcado = self._decidir(loc, punto, tangente, modo, previa)
            self._registrar(loc, previa, tipo, soporte, clase, marcado)

            if tipo == 'slide':
                pieza, salio = self._deslizar(soporte, punto, tangente, restante)
                self.celdas.append(None)
                modo = _DESLIZANDO
            else:
                pieza, salio = self._espiral(soporte, punto, tangente, restante)
                self.celdas.append(soporte)
                modo = _TRAS_ESPIRAL

            self.piezas.append(pieza)
            self.t += pieza.qh_len
            restante -= pieza.qh_len
            punto = pieza.end_point
            tangente = pieza.end_tangent
            previa = (tipo, soporte)
            logger.debug("Pieza %d (%s %s): longitud %.6g", len(self.piezas), tipo, soporte, pieza.qh_len)
            if not salio:
                break

        self.sucesos.sort(key=lambda e: e.t)
        return self.piezas, self.celdas, self.sucesos

    def _decidir(self, loc, punto, tangente, modo, previa):
        """
        Elige cómo continuar desde punto.

        Returns:
            (tipo, soporte, clase de suceso o None, marcado)
        """
        if loc.kind == LOC_CORNER:
            tipo, soporte = self._regla_esquina(loc.corner, punto, tangente)
            return tipo, soporte, CORNER, True

        if loc.kind == LOC_EDGE:
            arista = self.d.edges[loc.edge]
            if _paralela(tangente, arista.direction):
                if modo != _TRAS_ESPIRAL:
                    return 'slide', arista.index, None, False
                return self._regla_contacto(arista, punto, tangente, previa)
            c0 = arista.neighbors[0]
            celda = c0 if float(tangente @ arista.normal_into(c0)) > 0.0 else arista.neighbors[1]
            return 'spiral', celda, None, False

        return 'spiral', loc.cell, None, False

    def _registrar(self, loc, previa, tipo, soporte, clase, marcado):
        desde = previa[1] if previa is not None and previa[0] == 'spiral' else None
        hacia = soporte if tipo == 'spiral' else None
        if clase is None:
            if tipo == 'slide':
                if previa is not None and previa == ('slide', soporte):
                    return
                clase = SLIDING_START
            elif previa is None:
                return
            elif previa[0] == 'slide':
                clase = SLIDING_END
            elif previa[1] != soporte:
                clase = CROSSING
            else:
                return
        self.sucesos.append(ShootEvent(self.t, loc, clase, (desde, hacia), marcado))
        if marcado:
            logger.warning("Suceso %s marcado en t = %.6g (celdas %s -> %s)", clase, self.t, desde, hacia)

    def _permanece(self, c, punto, tangente):
        """Si la espiral de la celda c con esa tangente sigue dentro de c tras un paso corto."""
        celda = self.d.cells[c]
        paso = TOLERANCIAS['paso_candidato']
        arco = SpiralArc.from_point_direction(self.d.boundary[c], punto, tangente, paso)
        if not celda.edges:
            return True
        return bool(np.all(celda.offsets(arco.points([paso]))[0] > 0.0))

    def _regla_contacto(self, arista, punto, tangente, previa):
        """Llegada tangente a una arista desde el interior de una celda."""
        c0, c1 = arista.neighbors
        queda0 = self._permanece(c0, punto, tangente)
        queda1 = self._permanece(c1, punto, tangente)
        if queda0 != queda1:
            return 'spiral', c0 if queda0 else c1, TOUCHING, False
        if not queda0:
            return 'slide', arista.index, None, False
        actual = previa[1] if previa is not None and previa[0] == 'spiral' else c0
        return 'spiral', actual, TOUCHING, True

    def _regla_esquina(self, k, punto, tangente):
        d = self.d
        for e in d.corner_edges[k]:
            arista = d.edges[e]
            if _paralela(tangente, arista.direction):
                saliente = arista.direction if arista.corner_lo == k else -arista.direction
                if float(tangente @ saliente) > 0.0:
                    return 'slide', e

        candidatas = [c for c in d.corner_cells[k] if self._permanece(c, punto, tangente)]
        if candidatas:
            def giro(c):
                radial = punto - d.boundary[c]
                return abs(pr(math.atan2(tangente[1], tangente[0]) - math.atan2(radial[1], radial[0])))
            return 'spiral', min(candidatas, key=lambda c: (giro(c), c))

        prueba = punto + TOLERANCIAS['paso_candidato'] * d.delta(punto) * tangente
        return 'spiral', d.nearest(prueba)

    def _deslizar(self, e, punto, tangente, restante):
        arista = self.d.edges[e]
        sentido = 1.0 if float(tangente @ arista.direction) >= 0.0 else -1.0
        s0 = arista.param(punto)
        s_fin = arista.hi if sentido > 0 else arista.lo
        u0 = math.asinh(s0 / arista.h)
        disponible = math.inf if math.isinf(s_fin) else abs(math.asinh(s_fin / arista.h) - u0)
        if restante < disponible:
            return StraightArc.on_edge(arista, s0, arista.h * math.sinh(u0 + sentido * restante)), False
        return StraightArc.on_edge(arista, s0, s_fin), True

    def _espiral(self, c, punto, tangente, restante):
        """
        Pieza de espiral dentro de la celda c hasta su salida o hasta agotar la longitud.

        Returns:
            (SpiralArc, si la pieza termina en el borde de la celda)
        """
        celda = self.d.cells[c]
        arco = SpiralArc.from_point_direction(self.d.boundary[c], punto, tangente, restante)
        if not celda.edges:
            return arco, False

        g0 = celda.offsets(punto)[0]
        derivada = celda.normals @ tangente
        raices = primeras_raices(arco, celda.anchors, celda.normals, restante)
        salida = math.inf
        for k, lista in enumerate(raices):
            if abs(g0[k]) <= self.tol and derivada[k] > 0.0 and lista and lista[0] <= 1e-9:
                # Arranque sobre esta arista hacia dentro: se descarta el corte espurio en t ≈ 0
                lista = [t for t in primeras_raices(arco, celda.anchors[k], celda.normals[k], restante,
                                                    todas=True)[0] if t > 1e-9]
            if lista:
                salida = min(salida, lista[0])

        limite = min(salida, restante)
        corte = self._roces(arco, celda, c, limite)
        if corte < limite:
            salida = limite = corte
        return arco.with_length(limite), salida <= restante

    def _roces(self, arco, celda, c, limite):
        """
        Detecta contactos tangenciales (y cortes que la malla no separó) con las aristas.

        Registra un suceso touching por cada mínimo del desplazamiento que queda
        a menos de roce·escala de la arista.

        Returns:
            Parámetro de un corte perdido, o infinito
        """
        ts = malla_parametros(arco.alpha, limite)
        if len(ts) < 3:
            return math.inf
        g = celda.offsets(arco.points(ts))
        radios = arco.rho0 * np.exp(ts * math.cos(arco.alpha))
        umbral_roce = TOLERANCIAS['roce'] * self.d.escala
        corte = math.inf
        for k in range(g.shape[1]):
            columna = g[:, k]
            interiores = np.flatnonzero(
                (columna[1:-1] <= columna[:-2]) & (columna[1:-1] <= columna[2:])
                & (columna[1:-1] <= 0.01 * radios[1:-1])
            ) + 1
            for j in interiores:
                ancla, normal = celda.anchors[k], celda.normals[k]

                def desplazamiento(t, ancla=ancla, normal=normal):
                    return float((arco.points([t])[0] - ancla) @ normal)

                res = minimize_scalar(desplazamiento, bounds=(ts[j - 1], ts[j + 1]), method='bounded',
                                      options={'xatol': 1e-14})
                t_min, g_min = float(res.x), float(res.fun)
                if g_min < -self.tol and desplazamiento(ts[j - 1]) > 0.0:
                    corte = min(corte, brentq(desplazamiento, ts[j - 1], t_min, xtol=1e-15))
                elif abs(g_min) <= umbral_roce and t_min < min(corte, limite):
                    self._suceso_roce(arco, celda, c, k, t_min)
        return corte

    def _suceso_roce(self, arco, celda, c, k, t_local):
        punto = arco.points([t_local])[0]
        tangente = arco.tangents([t_local])[0]
        arista = self.d.edges[celda.edges[k]]
        otra = arista.other(c)
        marcado = self._permanece(c, punto, tangente) and self._permanece(otra, punto, tangente)
        loc = self.d.locate(punto, max(self.tol, TOLERANCIAS['roce'] * self.d.escala))
        self.sucesos.append(ShootEvent(self.t + t_local, loc, TOUCHING, (c, c), marcado))
        if marcado:
            logger.warning("Contacto tangencial ambiguo con la arista %d en t = %.6g", arista.index,
                           self.t + t_local)


def shoot(domain, x, direction, r):
    """
    Geodésica de longitud cuasihiperbólica r que sale de x con la tangente dada.

    Args:
        domain: VoronoiDomain
        x: Punto inicial (δ(x) > 0)
        direction: Tangente inicial (se normaliza)
        r: Longitud total >= 0

    Returns:
        GeodesicPath con los sucesos de unión

    Raises:
        DomainError: Si x está sobre la frontera o r no es válida
        GeodesicError: Si se supera el máximo de piezas
    """
    x = _verificar_interior(domain, x, 'x')
    tangente = unitario(direction)
    r = _verificar_longitud(r)
    piezas, celdas, sucesos = _Disparo(domain).ejecutar(x, tangente, r)
    return GeodesicPath.from_pieces(x, tangente, piezas, sucesos, celdas)


def exp_map(domain, x, phi, r):
    """Extremo de la geodésica que sale de x con ángulo phi y longitud r."""
    return shoot(domain, x, (math.cos(phi), math.sin(phi)), r).endpoint


def prolong(domain, path, extra):
    """
    Prolonga una geodésica desde su extremo con la tangente final.

    Args:
        domain: VoronoiDomain
        path: GeodesicPath
        extra: Longitud añadida >= 0

    Returns:
        GeodesicPath concatenado (el mismo objeto si extra = 0)
    """
    extra = _verificar_longitud(extra)
    if extra == 0.0:
        return path
    continuacion = shoot(domain, path.endpoint, path.end_tangent, extra)
    return path.concatenate(continuacion)


@dataclass(frozen=True)
class ConnectResult:
    """Geodésicas encontradas entre x e y, la distancia y si la solución es única."""
    paths: tuple
    distance: float
    unique: bool

    def to_dict(self):
        return {
            'distance': self.distance,
            'unique': self.unique,
            'paths': [p.to_dict() for p in self.paths],
        }


@dataclass(frozen=True)
class _Solucion:
    phi: float
    r: float
    path: GeodesicPath


def _malla_pieza(pieza):
    if isinstance(pieza, SpiralArc):
        return malla_parametros(pieza.alpha, pieza.qh_len)
    return np.linspace(0.0, pieza.qh_len, max(2, int(math.ceil(pieza.qh_len * 16)) + 1))


def _aproximacion(path, y):
    """
    Parámetro de máximo acercamiento de path a y.

    Returns:
        (t, distancia euclídea)
    """
    if not path.pieces:
        return 0.0, float(math.hypot(*(path.start - y)))
    mejor = None
    for k, pieza in enumerate(path.pieces):
        ts = _malla_pieza(pieza)
        distancias = np.hypot(*(pieza.points(ts) - y).T)
        j = int(np.argmin(distancias))
        if mejor is None or distancias[j] < mejor[0]:
            mejor = (float(distancias[j]), k, ts, j)
    distancia, k, ts, j = mejor
    pieza = path.pieces[k]
    a, b = ts[max(j - 1, 0)], ts[min(j + 1, len(ts) - 1)]
    if b > a:
        res = minimize_scalar(lambda t: float(math.hypot(*(pieza.points([t])[0] - y))),
                              bounds=(a, b), method='bounded', options={'xatol': 1e-13})
        if res.fun < distancia:
            return float(path.piece_offsets[k] + res.x), float(res.fun)
    return float(path.piece_offsets[k] + ts[j]), distancia


def _misma(a, b):
    tol = TOLERANCIAS['agrupamiento']
    return abs(pr(a.phi - b.phi)) <= tol and abs(a.r - b.r) <= tol * max(1.0, a.r)


def _refinar(domain, x, y, phi0, r0):
    """
    Refina (φ, r) con mínimos cuadrados sobre el extremo del disparo.

    Returns:
        (_Solucion o None, residuo euclídeo alcanzado)
    """
    escala = domain.delta(y)
    objetivo = TOLERANCIAS['residuo_conexion'] * escala

    def residuo(v):
        try:
            return (exp_map(domain, x, v[0], v[1]) - y) / escala
        except QuasihyperbolicError:
            return np.full(2, 1e3)

    inicial = np.array([phi0, max(r0, 0.0)])
    error = float(np.hypot(*residuo(inicial))) * escala
    if error > objetivo:
        res = least_squares(residuo, inicial, bounds=([-np.inf, 0.0], [np.inf, np.inf]), jac='3-point',
                            xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=LIMITES['max_evaluaciones'])
        candidato = res.x
        error_ls = float(np.hypot(*res.fun)) * escala
        if error_ls < error:
            inicial, error = candidato, error_ls
    logger.debug("Refinamiento desde φ=%.6g r=%.6g: residuo %.3g", phi0, r0, error)
    if error > objetivo:
        return None, error
    phi, r = pr(inicial[0]), float(inicial[1])
    return _Solucion(phi, r, shoot(domain, x, (math.cos(phi), math.sin(phi)), r)), error


def _semillas(domain, x, y, camino, usar_oraculo, semilla):
    angulos = []
    if camino is not None:
        angulos.append(arg(camino.path.direction))
    if usar_oraculo:
        try:
            angulos.append(arg(semilla_oraculo(domain, x, y)))
        except (ResolutionError, ConvergenceError) as exc:
            logger.warning("Sin semilla del oráculo: %s", exc)
    if semilla is not None:
        angulos.append(float(semilla) if np.ndim(semilla) == 0 else arg(semilla))
    return angulos


def _acercamiento(domain, x, y, phi, alcance):
    """(distancia mínima a y, φ, parámetro) del disparo de ángulo φ."""
    try:
        t, distancia = _aproximacion(shoot(domain, x, (math.cos(phi), math.sin(phi)), alcance), y)
    except GeodesicError as exc:
        logger.warning("Disparo φ=%.6g descartado: %s", phi, exc)
        t, distancia = 0.0, math.inf
    return distancia, float(phi), t


def connect(domain, x, y, usar_oraculo=None, semilla=None):
    """
    Geodésicas de x a y por disparo múltiple.

    Se disparan 64 ángulos equiespaciados (más las semillas del grafo de
    uniones, del oráculo y del usuario) hasta una cota superior de la
    distancia; los mínimos locales del acercamiento a y se refinan en
    (φ, r) con least_squares. Las soluciones se agrupan y solo se conservan
    las de longitud mínima.

    Args:
        domain: VoronoiDomain
        x, y: Extremos (δ > 0)
        usar_oraculo: True añade siempre la dirección inicial del camino del
            oráculo; None (por defecto) solo la usa si ningún otro arranque
            converge; False nunca
        semilla: Ángulo o vector inicial adicional

    Returns:
        ConnectResult

    Raises:
        DomainError: Si x o y están sobre la frontera
        ConvergenceError: Si ningún disparo alcanza y
    """
    x = _verificar_interior(domain, x, 'x')
    y = _verificar_interior(domain, y, 'y')
    if np.array_equal(x, y):
        return ConnectResult((GeodesicPath.from_pieces(x, (1.0, 0.0), ()),), 0.0, True)

    try:
        camino = GrafoUniones(domain, x, y).resolver()
    except QuasihyperbolicError as exc:
        logger.warning("Grafo de uniones no disponible: %s", exc)
        camino = None
    cota = cota_superior(domain, x, y, camino)
    alcance = cota * 1.02 + 0.05

    semillas = _semillas(domain, x, y, camino, usar_oraculo is True, semilla)
    n = LIMITES['angulos_disparo']
    anillo = np.linspace(-math.pi, math.pi, n, endpoint=False)
    acercamientos = [_acercamiento(domain, x, y, phi, alcance) for phi in list(anillo) + semillas]

    en_anillo = np.array([a[0] for a in acercamientos[:n]])
    minimos = [i for i in range(n) if en_anillo[i] <= en_anillo[i - 1] and en_anillo[i] <= en_anillo[(i + 1) % n]]
    minimos.sort(key=lambda i: en_anillo[i])
    arranques = [acercamientos[i] for i in minimos[:LIMITES['candidatos_refinar']]] + acercamientos[n:]

    soluciones = []
    mejor_residuo = math.inf
    for _, phi, t in arranques:
        solucion, residuo = _refinar(domain, x, y, phi, t)
        mejor_residuo = min(mejor_residuo, residuo)
        if solucion is not None:
            soluciones.append(solucion)

    if camino is not None:
        solucion, residuo = _refinar(domain, x, y, arg(camino.path.direction), camino.path.total_qh_len)
        mejor_residuo = min(mejor_residuo, residuo)
        if solucion is not None:
            soluciones.append(solucion)
        elif camino.valido and math.hypot(*(camino.path.endpoint - y)) <= TOLERANCIAS['residuo_conexion'] * domain.delta(y):
            soluciones.append(_Solucion(arg(camino.path.direction), camino.path.total_qh_len, camino.path))
            mejor_residuo = 0.0

    if not soluciones and usar_oraculo is None:
        logger.info("Ningún arranque convergió; se prueba la semilla del oráculo")
        for phi in _semillas(domain, x, y, None, True, None):
            _, phi, t = _acercamiento(domain, x, y, phi, alcance)
            solucion, residuo = _refinar(domain, x, y, phi, t)
            mejor_residuo = min(mejor_residuo, residuo)
            if solucion is not None:
                soluciones.append(solucion)

    if not soluciones:
        raise ConvergenceError(f"Ningún disparo alcanzó {y} (mejor residuo {mejor_residuo:.3g})", mejor_residuo)

    distintas = []
    for solucion in sorted(soluciones, key=lambda s: s.r):
        if not any(_misma(solucion, otra) for otra in distintas):
            distintas.append(solucion)
    minimo = distintas[0].r
    minimas = [s for s in distintas if s.r <= minimo * (1.0 + TOLERANCIAS['minimalidad'])]
    descartadas = len(distintas) - len(minimas)
    if descartadas:
        logger.debug("Descartadas %d soluciones no minimales", descartadas)
    logger.info("connect %s -> %s: distancia %.12g, %d geodésica(s)", x, y, minimo, len(minimas))
    return ConnectResult(tuple(s.path for s in minimas), float(minimo), len(minimas) == 1)


def qh_distance(domain, x, y, **opciones):
    """Distancia cuasihiperbólica d_Q(x, y) (0 si x = y)."""
    return connect(domain, x, y, **opciones).distance


@dataclass(frozen=True)
class QhBall:
    """
    Frontera de una bola cuasihiperbólica muestreada por ángulo de disparo.

    Attributes:
        center: Centro x
        radius: Radio r
        samples: Tupla de (φ, extremo, GeodesicPath) ordenada por φ
    """
    center: np.ndarray
    radius: float
    samples: tuple

    @property
    def angles(self):
        return np.array([s[0] for s in self.samples])

    @property
    def boundary(self):
        return np.array([s[1] for s in self.samples]).reshape(-1, 2)

    def is_convex(self, tol=0.0):
        """Si el polígono de muestras gira siempre en el mismo sentido."""
        puntos = self.boundary
        lados = np.roll(puntos, -1, axis=0) - puntos
        giros = lados[:, 0] * np.roll(lados, -1, axis=0)[:, 1] - lados[:, 1] * np.roll(lados, -1, axis=0)[:, 0]
        return bool(np.all(giros >= -tol) or np.all(giros <= tol))

    def filas_csv(self):
        """Filas (phi, x, y, longitud) para exportar."""
        return [(float(phi), float(p[0]), float(p[1]), float(path.total_qh_len)) for phi, p, path in self.samples]

    def to_dict(self):
        return {
            'center': self.center.tolist(),
            'radius': self.radius,
            'samples': [{'phi': phi, 'point': p.tolist()} for phi, p, _ in self.samples],
        }


def trace_ball(domain, x, r, n_samples=64, workers=None):
    """
    Traza la frontera de B_Q(x, r) como imagen de la aplicación exponencial.

    Se dispara sobre n_samples ángulos equiespaciados y se insertan ángulos
    intermedios allí donde dos extremos consecutivos distan más de
    escala/100, hasta un máximo de 4096 muestras.

    Args:
        domain: VoronoiDomain
        x: Centro
        r: Radio > 0
        n_samples: Muestras iniciales (>= 16)
        workers: Hilos para evaluar los disparos (None o 1: secuencial)

    Returns:
        QhBall

    Raises:
        InputError: Si n_samples < 16
        DomainError: Si r <= 0 o x está sobre la frontera
    """
    if n_samples < LIMITES['min_muestras_bola']:
        raise InputError(f"trace_ball necesita al menos {LIMITES['min_muestras_bola']} muestras")
    x = _verificar_interior(domain, x, 'x')
    r = _verificar_longitud(r)
    if r <= 0.0:
        raise DomainError("El radio de la bola debe ser positivo")

    nube = np.vstack([domain.boundary, x])
    escala = max(float(math.hypot(*np.ptp(nube, axis=0))), domain.delta(x))
    umbral = escala / 100.0
    tope = LIMITES['max_muestras_bola']

    def disparar(phi):
        return shoot(domain, x, (math.cos(phi), math.sin(phi)), r)

    def evaluar(angulos):
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ejecutor:
                return list(ejecutor.map(disparar, angulos))
        return [disparar(phi) for phi in angulos]

    angulos = list(np.linspace(0.0, DOS_PI, n_samples, endpoint=False))
    caminos = dict(zip(angulos, evaluar(angulos)))
    while True:
        orden = sorted(caminos)
        nuevos = []
        for k, phi in enumerate(orden):
            siguiente = orden[(k + 1) % len(orden)]
            hueco = (siguiente - phi) % DOS_PI or DOS_PI
            separacion = math.hypot(*(caminos[phi].endpoint - caminos[siguiente].endpoint))
            if separacion > umbral and hueco > 1e-9:
                nuevos.append((phi + hueco / 2.0) % DOS_PI)
        if not nuevos:
            break
        if len(caminos) + len(nuevos) > tope:
            logger.warning("trace_ball: tope de %d muestras alcanzado con huecos mayores que %.3g", tope, umbral)
            nuevos = nuevos[:max(0, tope - len(caminos))]
            caminos.update(zip(nuevos, evaluar(nuevos)))
            break
        caminos.update(zip(nuevos, evaluar(nuevos)))

    muestras = tuple((float(phi), caminos[phi].endpoint, caminos[phi]) for phi in sorted(caminos))
    logger.debug("trace_ball r=%.6g: %d muestras", r, len(muestras))
    return QhBall(x, r, muestras)


def validate_ball(domain, ball, subsample=8):
    """
    Error máximo |d_Q(x, extremo) - r| sobre una submuestra de la frontera.

    Solo tiene sentido para r < π, donde los disparos son minimizantes.
    """
    indices = np.linspace(0, len(ball.samples) - 1, min(subsample, len(ball.samples))).astype(int)
    errores = [abs(qh_distance(domain, ball.center, ball.samples[i][1]) - ball.radius) for i in indices]
    return float(max(errores))
