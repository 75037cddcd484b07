"""
Diagrama de Voronoi de una frontera finita y la función distancia δ.

Cada celda se construye como intersección de semiplanos (bisectrices con los
demás núcleos) con scipy.spatial.HalfspaceIntersection; los vértices se
recalculan después como intersección exacta de las rectas bisectrices. Las
aristas no acotadas se guardan como semirrectas o rectas con parámetros
infinitos: la caja auxiliar solo existe durante la construcción.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import Delaunay, HalfspaceIntersection, QhullError, cKDTree
from scipy.spatial.distance import pdist

from utils.config import TOLERANCIAS
from utils.errores import AdjacencyError, DomainError, InputError
from utils.geometria import como_punto, perpendicular

logger = logging.getLogger(__name__)

INTERIOR = 'interior'
EDGE = 'edge'
CORNER = 'corner'


@dataclass(frozen=True)
class Edge:
    """
    Arista del diagrama: subconjunto de la bisectriz de dos núcleos vecinos.

    El soporte es la recta point + s·direction; point es el punto medio de
    los dos núcleos (pie de la perpendicular desde cualquiera de ellos) y
    direction es el giro antihorario de (a_j - a_i)/|a_j - a_i|. Los
    parámetros lo < hi pueden ser infinitos.
    """
    index: int
    point: np.ndarray
    direction: np.ndarray
    lo: float
    hi: float
    neighbors: tuple
    nuclei: tuple
    h: float
    corner_lo: Optional[int] = None
    corner_hi: Optional[int] = None

    @property
    def unit_normal(self):
        """Normal unitaria que apunta de la celda neighbors[0] a neighbors[1]."""
        return -perpendicular(self.direction)

    def point_at(self, s):
        return self.point + s * self.direction

    def param(self, z):
        """Parámetro de la proyección de z sobre el soporte."""
        return float((np.asarray(z, dtype=float) - self.point) @ self.direction)

    def normal_into(self, cell):
        """Normal unitaria que apunta hacia el interior de la celda dada."""
        lado = self._lado(cell)
        return -self.unit_normal if lado == 0 else self.unit_normal

    def offset(self, cell, z):
        """Distancia con signo de z al soporte, positiva del lado de la celda."""
        return float((np.asarray(z, dtype=float) - self.point) @ self.normal_into(cell))

    def other(self, cell):
        return self.neighbors[1 - self._lado(cell)]

    def contains_param(self, s, tol=0.0):
        return self.lo - tol <= s <= self.hi + tol

    def endpoint(self, extremo):
        """Extremo 'lo' o 'hi' como punto, o None si es infinito."""
        s = self.lo if extremo == 'lo' else self.hi
        return None if math.isinf(s) else self.point_at(s)

    def _lado(self, cell):
        indice = cell.index if isinstance(cell, Cell) else int(cell)
        if indice == self.neighbors[0]:
            return 0
        if indice == self.neighbors[1]:
            return 1
        raise AdjacencyError(f"La celda {indice} no comparte la arista {self.index}")


@dataclass(frozen=True)
class Cell:
    """
    Celda de Voronoi: polígono convexo, posiblemente no acotado.

    normals y anchors describen los semiplanos de sus aristas:
    z está en la celda si (z - anchors[k]) · normals[k] >= 0 para todo k.
    """
    index: int
    nucleus: np.ndarray
    edges: tuple
    bounded: bool
    vertices: np.ndarray
    normals: np.ndarray = field(repr=False, default=None)
    anchors: np.ndarray = field(repr=False, default=None)

    def offsets(self, puntos):
        """Distancias con signo de los puntos (n, 2) a cada arista (n, E)."""
        puntos = np.atleast_2d(np.asarray(puntos, dtype=float))
        if len(self.edges) == 0:
            return np.zeros((len(puntos), 0))
        return np.einsum('nek,ek->ne', puntos[:, None, :] - self.anchors[None, :, :], self.normals)

    def contains(self, z, tol=0.0):
        return bool(np.all(self.offsets(z)[0] >= -tol))


@dataclass(frozen=True)
class CellLocation:
    """Resultado de locate: celda interior, arista o esquina."""
    kind: str
    cells: tuple
    edge: Optional[int] = None
    corner: Optional[int] = None
    edges: tuple = ()

    @property
    def cell(self):
        return self.cells[0]


@dataclass(frozen=True)
class VoronoiDomain:
    """
    Dominio de Voronoi: frontera finita y su diagrama completo.

    Las celdas están ordenadas por el orden lexicográfico de sus núcleos y
    boundary[i] es el núcleo de cells[i].
    """
    boundary: np.ndarray
    cells: tuple
    edges: tuple
    corners: np.ndarray
    corner_edges: tuple
    corner_cells: tuple
    _arbol: cKDTree = field(repr=False, compare=False, default=None)

    @property
    def n(self):
        return len(self.boundary)

    @property
    def escala(self):
        """Diagonal de la caja envolvente de los núcleos (al menos 1)."""
        if self.n == 1:
            return 1.0
        extension = self.boundary.max(axis=0) - self.boundary.min(axis=0)
        return max(1.0, float(math.hypot(*extension)))

    def delta(self, z):
        return delta(self, z)

    def delta_many(self, puntos):
        """δ para un lote de puntos (n, 2) usando el árbol k-d."""
        puntos = np.asarray(puntos, dtype=float).reshape(-1, 2)
        distancias, _ = self._arbol.query(puntos)
        return np.asarray(distancias, dtype=float)

    def nearest(self, z):
        """Índice del núcleo más cercano (el menor índice en caso de empate)."""
        z = como_punto(z)
        return int(np.argmin(np.hypot(self.boundary[:, 0] - z[0], self.boundary[:, 1] - z[1])))

    def nearest_many(self, puntos):
        return self.delta_y_nucleo(puntos)[1]

    def delta_y_nucleo(self, puntos):
        """δ y núcleo más cercano para un lote de puntos (n, 2)."""
        puntos = np.asarray(puntos, dtype=float).reshape(-1, 2)
        distancias, indices = self._arbol.query(puntos)
        return np.asarray(distancias, dtype=float), np.asarray(indices, dtype=int)

    def cells_at(self, z, tol=None):
        """Celdas cuyos núcleos están a distancia δ(z) dentro de tol."""
        tol = TOLERANCIAS['localizar'] if tol is None else tol
        z = como_punto(z)
        distancias = np.hypot(self.boundary[:, 0] - z[0], self.boundary[:, 1] - z[1])
        return tuple(int(k) for k in np.flatnonzero(distancias <= distancias.min() + tol))

    def locate(self, z, tol=None):
        return locate(self, z, tol)

    def to_dict(self):
        """Representación JSON determinista del diagrama."""
        def num(v):
            if math.isinf(v):
                return 'inf' if v > 0 else '-inf'
            return float(v)

        return {
            'boundary': self.boundary.tolist(),
            'cells': [
                {
                    'nucleus': c.nucleus.tolist(),
                    'edges': list(c.edges),
                    'bounded': c.bounded,
                    'vertices': c.vertices.tolist(),
                }
                for c in self.cells
            ],
            'edges': [
                {
                    'point': e.point.tolist(),
                    'direction': e.direction.tolist(),
                    'lo': num(e.lo),
                    'hi': num(e.hi),
                    'neighbors': list(e.neighbors),
                    'corners': [e.corner_lo, e.corner_hi],
                }
                for e in self.edges
            ],
            'corners': self.corners.tolist(),
            'corner_edges': [list(c) for c in self.corner_edges],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))


def _tolerancia_vertices(pts):
    extension = float(np.max(np.ptp(pts, axis=0))) if len(pts) > 1 else 0.0
    return TOLERANCIAS['separacion_nucleos'] * max(1.0, extension)


def _caja_envolvente(pts):
    """Caja que contiene núcleos y circuncentros (todos los vértices de Voronoi)."""
    nube = [pts]
    if len(pts) >= 3:
        try:
            tri = Delaunay(pts)
        except QhullError:
            tri = None
        if tri is not None:
            a, b, c = (pts[tri.simplices[:, k]] for k in range(3))
            d = 2.0 * (a[:, 0] * (b[:, 1] - c[:, 1]) + b[:, 0] * (c[:, 1] - a[:, 1])
                       + c[:, 0] * (a[:, 1] - b[:, 1]))
            validos = np.abs(d) > 0.0
            a2, b2, c2 = (np.sum(p * p, axis=1) for p in (a, b, c))
            ux = (a2 * (b[:, 1] - c[:, 1]) + b2 * (c[:, 1] - a[:, 1]) + c2 * (a[:, 1] - b[:, 1]))
            uy = (a2 * (c[:, 0] - b[:, 0]) + b2 * (a[:, 0] - c[:, 0]) + c2 * (b[:, 0] - a[:, 0]))
            centros = np.column_stack([ux[validos] / d[validos], uy[validos] / d[validos]])
            nube.append(centros[np.all(np.isfinite(centros), axis=1)])
    todo = np.vstack(nube)
    bajo = todo.min(axis=0)
    alto = todo.max(axis=0)
    centro = (bajo + alto) / 2.0
    radio = float(np.max(alto - bajo)) + 1.0
    return centro[0] - radio, centro[1] - radio, centro[0] + radio, centro[1] + radio


def _unicos(puntos, tol):
    """Elimina puntos repetidos (a distancia <= tol), conservando el primero."""
    elegidos = []
    for p in puntos:
        if all(math.hypot(*(p - q)) > tol for q in elegidos):
            elegidos.append(p)
    return np.array(elegidos)


def _interseccion(fila_a, fila_b):
    """Intersección de las rectas n·z + c = 0 dadas por dos filas [n, c]."""
    matriz = np.array([fila_a[:2], fila_b[:2]])
    if abs(np.linalg.det(matriz)) < 1e-300:
        return None
    return np.linalg.solve(matriz, -np.array([fila_a[2], fila_b[2]]))


def _lados_de_celda(pts, i, caja, tol):
    """
    Polígono de la celda i recortado por la caja.

    Returns:
        Lista de (j, p, q) por cada lado bisectriz en orden antihorario,
        donde j es el núcleo vecino y p, q los extremos (None si tocan la caja).
    """
    a = pts[i]
    otros = np.delete(np.arange(len(pts)), i)
    normales = pts[otros] - a
    constantes = -(np.sum(pts[otros] ** 2, axis=1) - a @ a) / 2.0
    x0, y0, x1, y1 = caja
    semiplanos = np.vstack([
        np.column_stack([normales, constantes]),
        [[1.0, 0.0, -x1], [-1.0, 0.0, x0], [0.0, 1.0, -y1], [0.0, -1.0, y0]],
    ])
    semiplanos /= np.hypot(semiplanos[:, 0], semiplanos[:, 1])[:, None]
    vecinos = list(otros) + [None] * 4

    hs = HalfspaceIntersection(semiplanos, a)
    vertices = _unicos(hs.intersections, tol)
    centro = vertices.mean(axis=0)
    orden = np.argsort(np.arctan2(vertices[:, 1] - centro[1], vertices[:, 0] - centro[0]))
    vertices = vertices[orden]
    m = len(vertices)

    residuos = np.abs(vertices @ semiplanos[:, :2].T + semiplanos[:, 2])
    lados = [int(np.argmin(residuos[k] + residuos[(k + 1) % m])) for k in range(m)]

    # Vértice k: entre el lado k-1 y el lado k
    exactos = []
    for k in range(m):
        previo, actual = lados[k - 1], lados[k]
        if vecinos[previo] is None or vecinos[actual] is None:
            exactos.append(None)
        else:
            exactos.append(_interseccion(semiplanos[previo], semiplanos[actual]))

    resultado = []
    for k in range(m):
        j = vecinos[lados[k]]
        if j is None:
            continue
        resultado.append((int(j), exactos[k], exactos[(k + 1) % m], vertices[k], vertices[(k + 1) % m]))
    return resultado


def build(boundary):
    """
    Construye el diagrama de Voronoi de una frontera finita.

    Args:
        boundary: Lista de puntos (a_1, ..., a_N), N >= 1, distintos

    Returns:
        VoronoiDomain con celdas ordenadas lexicográficamente por núcleo

    Raises:
        InputError: Si la frontera está vacía, mal formada o tiene duplicados
    """
    pts = np.asarray(boundary, dtype=float)
    if pts.size == 0:
        raise InputError("La frontera no tiene puntos")
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InputError(f"La frontera debe ser una lista de pares, forma {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InputError("La frontera contiene coordenadas no finitas")
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    n = len(pts)
    if n > 1 and float(pdist(pts).min()) <= TOLERANCIAS['separacion_nucleos']:
        raise InputError("La frontera contiene puntos duplicados")
    pts.setflags(write=False)

    if n == 1:
        celda = Cell(0, pts[0], (), False, np.empty((0, 2)), np.empty((0, 2)), np.empty((0, 2)))
        return VoronoiDomain(pts, (celda,), (), np.empty((0, 2)), (), (), cKDTree(pts))

    tol = _tolerancia_vertices(pts)
    caja = _caja_envolvente(pts)
    crudas = {}
    lados_por_celda = {}
    for i in range(n):
        lados = _lados_de_celda(pts, i, caja, tol)
        lados_por_celda[i] = [j for j, *_ in lados]
        for j, p, q, p_crudo, q_crudo in lados:
            clave = (min(i, j), max(i, j))
            if clave not in crudas:
                crudas[clave] = (p, q, p_crudo, q_crudo)

    # Parámetros de cada arista sobre su soporte
    provisionales = []
    for (i, j), (p, q, p_crudo, q_crudo) in sorted(crudas.items()):
        a_i, a_j = pts[i], pts[j]
        u = (a_j - a_i) / math.hypot(*(a_j - a_i))
        medio = (a_i + a_j) / 2.0
        direccion = perpendicular(u)
        s_p_crudo = float((p_crudo - medio) @ direccion)
        s_q_crudo = float((q_crudo - medio) @ direccion)
        s_p = float((p - medio) @ direccion) if p is not None else math.copysign(math.inf, s_p_crudo - s_q_crudo)
        s_q = float((q - medio) @ direccion) if q is not None else math.copysign(math.inf, s_q_crudo - s_p_crudo)
        lo, hi = min(s_p, s_q), max(s_p, s_q)
        if hi - lo <= tol:
            continue
        provisionales.append(((i, j), medio, direccion, lo, hi, (a_i.copy(), a_j.copy()),
                              math.hypot(*(a_j - a_i)) / 2.0))

    # Esquinas: extremos finitos, sin repetir
    extremos = []
    for _, medio, direccion, lo, hi, _, _ in provisionales:
        for s in (lo, hi):
            if not math.isinf(s):
                extremos.append(medio + s * direccion)
    esquinas = _unicos(np.array(extremos), tol) if extremos else np.empty((0, 2))
    if len(esquinas):
        esquinas = esquinas[np.lexsort((esquinas[:, 1], esquinas[:, 0]))]

    def esquina_de(punto):
        if punto is None:
            return None
        distancias = np.hypot(esquinas[:, 0] - punto[0], esquinas[:, 1] - punto[1])
        return int(np.argmin(distancias))

    aristas = []
    for indice, (par, medio, direccion, lo, hi, nucleos, h) in enumerate(provisionales):
        p_lo = None if math.isinf(lo) else medio + lo * direccion
        p_hi = None if math.isinf(hi) else medio + hi * direccion
        for v in (medio, direccion, *nucleos):
            v.setflags(write=False)
        aristas.append(Edge(indice, medio, direccion, lo, hi, par, nucleos, h,
                            esquina_de(p_lo), esquina_de(p_hi)))

    incidentes = [[] for _ in range(len(esquinas))]
    for arista in aristas:
        for c in (arista.corner_lo, arista.corner_hi):
            if c is not None:
                incidentes[c].append(arista.index)
    corner_edges = tuple(tuple(sorted(set(lista))) for lista in incidentes)
    corner_cells = tuple(
        tuple(sorted({k for e in lista for k in aristas[e].neighbors})) for lista in corner_edges
    )

    celdas = []
    por_celda = [[] for _ in range(n)]
    for arista in aristas:
        for k in arista.neighbors:
            por_celda[k].append(arista)
    for i in range(n):
        propias = sorted(por_celda[i], key=lambda e: _angulo_representativo(e, pts[i]))
        acotada = all(not math.isinf(e.lo) and not math.isinf(e.hi) for e in propias) and len(propias) >= 3
        vertices = []
        for e in propias:
            for c in (e.corner_lo, e.corner_hi):
                if c is not None and c not in vertices:
                    vertices.append(c)
        vertices.sort(key=lambda c: math.atan2(esquinas[c][1] - pts[i][1], esquinas[c][0] - pts[i][0]))
        normales = np.array([e.normal_into(i) for e in propias]).reshape(-1, 2)
        anclas = np.array([e.point for e in propias]).reshape(-1, 2)
        celdas.append(Cell(i, pts[i], tuple(e.index for e in propias), acotada,
                           esquinas[vertices].reshape(-1, 2), normales, anclas))
        if sorted(lados_por_celda[i]) != sorted(e.other(i) for e in propias):
            logger.debug("Celda %d: lados degenerados descartados", i)

    esquinas.setflags(write=False)
    logger.debug("Diagrama construido: %d celdas, %d aristas, %d esquinas", n, len(aristas), len(esquinas))
    return VoronoiDomain(pts, tuple(celdas), tuple(aristas), esquinas, corner_edges, corner_cells, cKDTree(pts))


def _angulo_representativo(arista, nucleo):
    lo, hi = arista.lo, arista.hi
    if math.isinf(lo) and math.isinf(hi):
        punto = arista.point
    elif math.isinf(lo):
        punto = arista.point_at(hi - (1.0 + arista.h))
    elif math.isinf(hi):
        punto = arista.point_at(lo + (1.0 + arista.h))
    else:
        punto = arista.point_at((lo + hi) / 2.0)
    return math.atan2(punto[1] - nucleo[1], punto[0] - nucleo[0])


def delta(d, z):
    """
    Distancia euclídea de z a la frontera: mínimo de |z - a_i|.

    Es exacta (fuerza bruta sobre los núcleos) y vale 0 solo en los núcleos.
    """
    z = como_punto(z, 'z')
    return float(np.min(np.hypot(d.boundary[:, 0] - z[0], d.boundary[:, 1] - z[1])))


def locate(d, z, tol=None):
    """
    Localiza z en el diagrama.

    Args:
        d: VoronoiDomain
        z: Punto de consulta
        tol: Tolerancia de contacto (1e-9 por defecto)

    Returns:
        CellLocation de tipo interior, edge o corner
    """
    tol = TOLERANCIAS['localizar'] if tol is None else tol
    if tol <= 0:
        raise DomainError("La tolerancia de locate debe ser positiva")
    z = como_punto(z, 'z')
    i = d.nearest(z)
    celda = d.cells[i]
    if not celda.edges:
        return CellLocation(INTERIOR, (i,))

    candidatas = set()
    for e in celda.edges:
        for c in (d.edges[e].corner_lo, d.edges[e].corner_hi):
            if c is not None:
                candidatas.add(c)
    if candidatas:
        indices = sorted(candidatas)
        distancias = np.hypot(d.corners[indices, 0] - z[0], d.corners[indices, 1] - z[1])
        k = int(np.argmin(distancias))
        if distancias[k] <= tol:
            c = indices[k]
            return CellLocation(CORNER, d.corner_cells[c], corner=c, edges=d.corner_edges[c])

    desplazamientos = celda.offsets(z)[0]
    cercanas = []
    for k, e in enumerate(celda.edges):
        arista = d.edges[e]
        if desplazamientos[k] <= tol and arista.contains_param(arista.param(z), tol):
            cercanas.append((desplazamientos[k], e))
    if cercanas:
        _, e = min(cercanas)
        return CellLocation(EDGE, d.edges[e].neighbors, edge=e, edges=(e,))
    return CellLocation(INTERIOR, (i,))


def mirror_nucleus(e, from_cell):
    """
    Núcleo de la celda vecina a través de la arista e.

    Raises:
        AdjacencyError: Si from_cell no es vecina de e
    """
    lado = e._lado(from_cell)
    return np.array(e.nuclei[1 - lado], dtype=float)


def reflect(e, p):
    """Refleja p respecto de la recta soporte de e."""
    p = como_punto(p)
    n = e.unit_normal
    return p - 2.0 * float((p - e.point) @ n) * n
