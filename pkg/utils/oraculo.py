"""
Oráculo de fuerza bruta: caminos más cortos en una malla.

Los nodos son los puntos de una retícula cuadrada con δ > 2·h; cada nodo se
une con sus vecinos del esténcil de 16 direcciones y el peso de cada arco es
la cuadratura de Gauss de dos puntos de ∫ |dz|/δ sobre el segmento. El
camino de Dijkstra se pule después moviendo sus vértices, lo que elimina el
sesgo de rumbo del esténcil. Las poligonales resultantes son admisibles, así
que la distancia del oráculo es una cota superior de d_Q (salvo el error de
cuadratura) que converge al refinar.
"""

import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from utils.config import LIMITES
from utils.errores import DomainError, ResolutionError, SingularityError
from utils.espiral import qh_length_of_polyline
from utils.geometria import Polyline, como_punto, unitario
from utils.grafo_uniones import cota_superior

logger = logging.getLogger(__name__)

# Mitad "hacia delante" del esténcil de 16 vecinos; la otra mitad son los opuestos
DESPLAZAMIENTOS = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))

_NODOS_GAUSS, _PESOS_GAUSS = np.polynomial.legendre.leggauss(2)


@dataclass(frozen=True)
class GridGraph:
    """
    Malla del oráculo.

    Attributes:
        window: Rectángulo (x0, y0, x1, y1)
        spacing: Paso h de la retícula
        nodes: Array (n, 2) de nodos con δ > 2h
        matrix: Matriz dispersa simétrica de pesos (csr)
    """
    window: tuple
    spacing: float
    nodes: np.ndarray
    matrix: object = field(repr=False)

    @property
    def n_nodes(self):
        return len(self.nodes)


@dataclass(frozen=True)
class OracleResult:
    """
    Resultado del oráculo.

    Attributes:
        distance: Longitud del camino más corto en la malla
        path: Vértices (n, 2) del camino, de x a y
        spacing_used: Paso de la malla
        richardson_estimate: Extrapolación 2·D(h/2) - D(h), o distance sin refinamiento
        cumulative: Longitud cuasihiperbólica acumulada en cada vértice
    """
    distance: float
    path: np.ndarray
    spacing_used: float
    richardson_estimate: float
    cumulative: np.ndarray = field(repr=False, default=None)

    def polyline(self):
        return Polyline(self.path) if len(self.path) >= 2 else None


def pesos_segmentos(domain, p, q):
    """Cuadratura de Gauss de dos puntos de ∫ |dz|/δ sobre cada segmento [p_k, q_k]."""
    p = np.atleast_2d(p)
    q = np.atleast_2d(q)
    medio = (p + q) / 2.0
    semi = (q - p) / 2.0
    largo = np.hypot(semi[:, 0], semi[:, 1])
    total = np.zeros(len(p))
    for xi, w in zip(_NODOS_GAUSS, _PESOS_GAUSS):
        total += w / domain.delta_many(medio + xi * semi)
    return largo * total


def ventana_consulta(domain, x, y, cota, spacing):
    """
    Rectángulo que contiene toda curva de longitud <= cota entre x e y.

    Cada punto de una curva así está a distancia cuasihiperbólica <= cota/2
    de x o de y, y la estimación de Gehring-Palka acota su desplazamiento
    euclídeo por (e^{cota/2} - 1)·δ.
    """
    factor = math.expm1(cota / 2.0)
    rx = factor * domain.delta(x)
    ry = factor * domain.delta(y)
    bajo = np.minimum(x - rx, y - ry) - 2.0 * spacing
    alto = np.maximum(x + rx, y + ry) + 2.0 * spacing
    return float(bajo[0]), float(bajo[1]), float(alto[0]), float(alto[1])


def build_grid(domain, window, spacing):
    """
    Construye la malla de una ventana.

    Raises:
        ResolutionError: Si la retícula supera el máximo de nodos
    """
    if not spacing > 0.0:
        raise DomainError("El paso de la malla debe ser positivo")
    x0, y0, x1, y1 = window
    nx = int(math.floor((x1 - x0) / spacing)) + 1
    ny = int(math.floor((y1 - y0) / spacing)) + 1
    if nx * ny > LIMITES['max_nodos_oraculo']:
        raise ResolutionError(f"La malla tendría {nx * ny} nodos (máximo {LIMITES['max_nodos_oraculo']})")

    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing='ij')
    puntos = np.column_stack([x0 + ii.ravel() * spacing, y0 + jj.ravel() * spacing])
    validos = domain.delta_many(puntos) > 2.0 * spacing
    ids = np.full(nx * ny, -1, dtype=np.int64)
    ids[validos] = np.arange(int(validos.sum()))
    ids = ids.reshape(nx, ny)
    nodos = puntos[validos]

    filas, columnas, pesos = [], [], []
    for a, b in DESPLAZAMIENTOS:
        i_src = slice(max(0, -a), nx - max(0, a))
        j_src = slice(max(0, -b), ny - max(0, b))
        i_dst = slice(max(0, a), nx - max(0, -a))
        j_dst = slice(max(0, b), ny - max(0, -b))
        origen = ids[i_src, j_src].ravel()
        destino = ids[i_dst, j_dst].ravel()
        ambos = (origen >= 0) & (destino >= 0)
        origen, destino = origen[ambos], destino[ambos]
        filas.append(origen)
        columnas.append(destino)
        pesos.append(pesos_segmentos(domain, nodos[origen], nodos[destino]))

    filas = np.concatenate(filas) if filas else np.empty(0, dtype=np.int64)
    columnas = np.concatenate(columnas) if columnas else np.empty(0, dtype=np.int64)
    pesos = np.concatenate(pesos) if pesos else np.empty(0)
    n = len(nodos)
    matriz = coo_matrix((pesos, (filas, columnas)), shape=(n, n)).tocsr()
    logger.debug("Malla del oráculo: h=%.4g, %dx%d, %d nodos, %d arcos", spacing, nx, ny, n, len(pesos))
    return GridGraph(window, float(spacing), nodos, matriz)


def _con_extremos(domain, malla, x, y):
    """Añade x e y como nodos extra unidos a los nodos a distancia <= 2h."""
    h = malla.spacing
    n = malla.n_nodes
    arbol = cKDTree(malla.nodes) if n else None
    filas, columnas, pesos = [], [], []
    for extra, z in ((n, x), (n + 1, y)):
        vecinos = arbol.query_ball_point(z, 2.0 * h) if arbol is not None else []
        if not vecinos:
            raise ResolutionError(f"Ningún nodo de la malla a menos de 2h de {z}")
        vecinos = np.asarray(vecinos, dtype=np.int64)
        filas.extend([extra] * len(vecinos))
        columnas.extend(vecinos.tolist())
        pesos.extend(pesos_segmentos(domain, np.tile(z, (len(vecinos), 1)), malla.nodes[vecinos]).tolist())
    if 0.0 < math.hypot(*(x - y)) <= 2.0 * h:
        filas.append(n)
        columnas.append(n + 1)
        pesos.append(float(pesos_segmentos(domain, x, y)[0]))
    extras = coo_matrix((pesos, (filas, columnas)), shape=(n + 2, n + 2)).tocsr()
    base = malla.matrix.tocoo()
    base = coo_matrix((base.data, (base.row, base.col)), shape=(n + 2, n + 2)).tocsr()
    return base + extras


def _distancia_en_malla(domain, x, y, spacing, cota):
    ventana = ventana_consulta(domain, x, y, cota, spacing)
    malla = build_grid(domain, ventana, spacing)
    matriz = _con_extremos(domain, malla, x, y)
    n = malla.n_nodes
    distancias, predecesores = dijkstra(matriz, directed=False, indices=n, return_predecessors=True)
    if not np.isfinite(distancias[n + 1]):
        raise ResolutionError("x e y no están conectados en la malla")
    camino = [n + 1]
    while camino[-1] != n:
        camino.append(int(predecesores[camino[-1]]))
    camino.reverse()
    todos = np.vstack([malla.nodes, x, y])
    return float(distancias[n + 1]), todos[camino], distancias[camino]


def _longitud_y_gradiente(domain, vertices):
    """Suma de pesos_segmentos sobre la poligonal y su gradiente respecto de los vértices."""
    p, q = vertices[:-1], vertices[1:]
    d = q - p
    largo = np.hypot(d[:, 0], d[:, 1])
    u = np.divide(d, largo[:, None], out=np.zeros_like(d), where=largo[:, None] > 0.0)
    suma = np.zeros(len(p))
    grad_p = np.zeros_like(p)
    grad_q = np.zeros_like(q)
    for xi, w in zip(_NODOS_GAUSS, _PESOS_GAUSS):
        z = (p + q) / 2.0 + xi * d / 2.0
        dist, idx = domain.delta_y_nucleo(z)
        f = 1.0 / dist
        # ∇(1/δ) = -(z - a)/δ³ con a el núcleo más cercano
        grad_f = -(z - domain.boundary[idx]) * (f ** 3)[:, None]
        suma += w * f
        grad_p += (w * largo * (1.0 - xi) / 4.0)[:, None] * grad_f
        grad_q += (w * largo * (1.0 + xi) / 4.0)[:, None] * grad_f
    grad_p -= u * (suma / 2.0)[:, None]
    grad_q += u * (suma / 2.0)[:, None]
    grad = np.zeros_like(vertices)
    grad[:-1] += grad_p
    grad[1:] += grad_q
    return float(np.sum(largo * suma) / 2.0), grad


def pulir_camino(domain, vertices):
    """
    Acorta el camino de la malla moviendo sus vértices interiores.

    Los caminos de la malla sólo siguen los rumbos del esténcil, lo que
    sobrestima la longitud hasta un 2,7 % entre dos rumbos vecinos y no
    desaparece al refinar. Con los extremos fijos, L-BFGS minimiza la
    cuadratura de Gauss de la poligonal; la longitud devuelta se recalcula
    con qh_length_of_polyline, de modo que sigue siendo la de una curva
    admisible.

    Returns:
        (vertices, longitud)
    """
    vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
    if len(vertices) < 3:
        return vertices, qh_length_of_polyline(domain, vertices)
    inicio, fin = vertices[:1], vertices[-1:]

    def objetivo(interior):
        todos = np.vstack([inicio, interior.reshape(-1, 2), fin])
        valor, grad = _longitud_y_gradiente(domain, todos)
        return valor, grad[1:-1].ravel()

    resultado = minimize(objetivo, vertices[1:-1].ravel(), jac=True, method='L-BFGS-B',
                         options={'maxiter': LIMITES['iter_pulido'], 'ftol': 1e-14, 'gtol': 1e-10})
    pulidos = np.vstack([inicio, resultado.x.reshape(-1, 2), fin])
    try:
        longitud = qh_length_of_polyline(domain, pulidos)
    except SingularityError:
        logger.warning("El camino pulido toca un núcleo; se conserva el de la malla")
        return vertices, qh_length_of_polyline(domain, vertices)
    logger.debug("Pulido del camino: %d vértices, %d iteraciones, %s", len(vertices), resultado.nit,
                 resultado.message)
    return pulidos, longitud


def _distancia(domain, x, y, spacing, cota, pulir):
    distancia, vertices, acumulado = _distancia_en_malla(domain, x, y, spacing, cota)
    if not pulir:
        return distancia, vertices, acumulado
    vertices, distancia = pulir_camino(domain, vertices)
    acumulado = np.concatenate([[0.0], np.cumsum(pesos_segmentos(domain, vertices[:-1], vertices[1:]))])
    return distancia, vertices, acumulado


def oracle_distance(domain, x, y, spacing, refinar=True, cota=None, pulir=True):
    """
    Distancia cuasihiperbólica aproximada por Dijkstra en la malla.

    Args:
        domain: VoronoiDomain
        x, y: Extremos
        spacing: Paso h de la malla
        refinar: Si se calcula también D(h/2) para la extrapolación de Richardson
        cota: Cota superior de d_Q(x, y) para la ventana (se calcula si falta)
        pulir: Si el camino de Dijkstra se acorta con pulir_camino

    Returns:
        OracleResult

    Raises:
        ResolutionError: Si δ(x) o δ(y) <= 2h, o si la malla es demasiado grande
    """
    x, y = como_punto(x, 'x'), como_punto(y, 'y')
    for nombre, z in (('x', x), ('y', y)):
        if domain.delta(z) <= 2.0 * spacing:
            raise ResolutionError(f"{nombre} está a menos de 2h = {2.0 * spacing:.3g} de un núcleo")
    if np.array_equal(x, y):
        return OracleResult(0.0, x[None, :].copy(), float(spacing), 0.0, np.zeros(1))

    cota = cota_superior(domain, x, y) if cota is None else cota
    distancia, vertices, acumulado = _distancia(domain, x, y, spacing, cota, pulir)
    estimacion = distancia
    if refinar:
        fina, _, _ = _distancia(domain, x, y, spacing / 2.0, cota, pulir)
        estimacion = 2.0 * fina - distancia
    logger.debug("Oráculo h=%.4g: %.10g (Richardson %.10g)", spacing, distancia, estimacion)
    return OracleResult(distancia, vertices, float(spacing), estimacion, acumulado)


def oracle_seed_direction(result, x, longitud=0.1):
    """
    Dirección inicial del camino del oráculo por ajuste lineal.

    Ajusta por mínimos cuadrados (SVD) una recta a los primeros vértices cuya
    longitud acumulada no pasa de `longitud` (al menos tres); si eso no es
    posible usa el primer segmento.

    Returns:
        Vector unitario
    """
    x = como_punto(x, 'x')
    vertices = np.asarray(result.path, dtype=float)
    if len(vertices) < 2:
        raise DomainError("El camino del oráculo no tiene segmentos")
    acumulado = result.cumulative if result.cumulative is not None else np.zeros(len(vertices))
    k = max(3, int(np.searchsorted(acumulado, longitud, side='right')))
    primeros = vertices[:k]
    if len(primeros) >= 3:
        centrados = primeros - primeros.mean(axis=0)
        _, valores, vt = np.linalg.svd(centrados, full_matrices=False)
        if valores[0] > 0.0:
            direccion = vt[0]
            if float(direccion @ (primeros[-1] - primeros[0])) < 0.0:
                direccion = -direccion
            return unitario(direccion)
    logger.debug("Ajuste degenerado, se usa el primer segmento")
    return unitario(vertices[1] - vertices[0])


def paso_para_nodos(domain, x, y, nodos, cota):
    """Paso h para que la ventana de consulta tenga unos `nodos` nodos (y δ > 2h en los extremos)."""
    x0, y0, x1, y1 = ventana_consulta(domain, x, y, cota, 0.0)
    h = math.sqrt(max((x1 - x0) * (y1 - y0), 1e-300) / nodos)
    return min(h, 0.4 * min(domain.delta(x), domain.delta(y)))


def semilla_oraculo(domain, x, y):
    """Dirección inicial sugerida por una malla gruesa (~4·10⁴ nodos)."""
    x, y = como_punto(x, 'x'), como_punto(y, 'y')
    cota = cota_superior(domain, x, y)
    h = paso_para_nodos(domain, x, y, LIMITES['nodos_oraculo_semilla'], cota)
    resultado = oracle_distance(domain, x, y, h, refinar=False, cota=cota)
    return oracle_seed_direction(resultado, x)


def refinement_ladder(domain, x, y, spacings):
    """
    Escalera de refinamiento del oráculo.

    Returns:
        Lista de filas (spacing, distance, orden empírico); el orden se
        estima a partir de tres pasos consecutivos y es NaN en las dos
        primeras filas o si las diferencias se anulan.
    """
    x, y = como_punto(x, 'x'), como_punto(y, 'y')
    cota = cota_superior(domain, x, y)
    filas = []
    for h in spacings:
        distancia = oracle_distance(domain, x, y, h, refinar=False, cota=cota).distance
        filas.append([float(h), distancia, math.nan])
    for k in range(2, len(filas)):
        d0, d1, d2 = filas[k - 2][1], filas[k - 1][1], filas[k][1]
        razon = filas[k - 1][0] / filas[k][0]
        if d0 != d1 and d1 != d2 and razon > 1.0:
            filas[k][2] = math.log(abs(d0 - d1) / abs(d1 - d2)) / math.log(razon)
    return [tuple(f) for f in filas]


def write_ladder_csv(filas, ruta, extra=None):
    """
    Escribe la escalera en CSV.

    Args:
        filas: Salida de refinement_ladder
        ruta: Fichero de destino
        extra: Columna adicional opcional (p. ej. distancia del motor) repetida en cada fila
    """
    cabecera = ['spacing', 'distance', 'empirical_order']
    if extra is not None:
        cabecera.append('engine_distance')
    with open(ruta, 'w', newline='') as fichero:
        escritor = csv.writer(fichero)
        escritor.writerow(cabecera)
        for fila in filas:
            escritor.writerow(list(fila) + ([extra] if extra is not None else []))
