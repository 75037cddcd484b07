"""
Grafo de uniones sobre las aristas de Voronoi.

Dentro de una celda la distancia entre dos puntos es la del plano perforado
en su núcleo siempre que la espiral que los une no salga de la celda, y a
lo largo de una arista la longitud de un deslizamiento es una diferencia de
asinh. El grafo toma como nodos muestras de las aristas, las esquinas y los
extremos x, y; los arcos son esas piezas exactas. Dijkstra da el tipo
combinatorio del camino más corto (qué celdas cruza y sobre qué aristas
desliza) y una optimización continua de los puntos de unión lo convierte en
una geodésica compuesta exacta. Esto captura las geodésicas que deslizan
por una arista, que no se alcanzan disparando desde el interior de una
celda.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from utils.camino import CORNER, CROSSING, SLIDING_END, SLIDING_START, GeodesicPath, ShootEvent
from utils.config import LIMITES, TOLERANCIAS
from utils.errores import ConvergenceError, SingularityError
from utils.espiral import StraightArc, punctured_geodesic, qh_length_of_polyline
from utils.geometria import como_punto, pr_array
from utils.voronoi import CORNER as LOC_CORNER

logger = logging.getLogger(__name__)

_FRACCIONES_GRAFO = np.arange(1, 16) / 16.0
_FRACCIONES_VALIDACION = np.arange(1, 128) / 128.0


@dataclass
class _Nodo:
    punto: np.ndarray
    aristas: dict
    celdas: tuple


@dataclass(frozen=True)
class CaminoUniones:
    """Resultado del grafo: camino compuesto, si es geodésico (C¹ y contenido) y el salto de tangente."""
    path: GeodesicPath
    valido: bool
    contenido: bool
    salto_tangente: float


class GrafoUniones:
    """
    Grafo de uniones para una consulta x -> y.

    Args:
        domain: VoronoiDomain
        x, y: Extremos de la consulta
        muestras_arista: Muestras interiores por arista
    """

    def __init__(self, domain, x, y, muestras_arista=None):
        self.domain = domain
        self.x = como_punto(x, 'x')
        self.y = como_punto(y, 'y')
        self.muestras = LIMITES['muestras_arista'] if muestras_arista is None else muestras_arista
        self.tol = TOLERANCIAS['localizar'] * domain.escala
        self.nodos = []
        self.sobre_arista = {}
        self._ventana()
        self._construir_nodos()
        self._construir_arcos()

    def _ventana(self):
        nube = np.vstack([self.domain.boundary, self.x, self.y])
        bajo, alto = nube.min(axis=0), nube.max(axis=0)
        self.centro = (bajo + alto) / 2.0
        diagonal = float(math.hypot(*(alto - bajo)))
        self.radio = 2.0 * diagonal + 1.0

    def _recorte(self, arista):
        """Intervalo de parámetros de la arista dentro del disco de trabajo."""
        s_c = arista.param(self.centro)
        lejania = abs(float((self.centro - arista.point) @ arista.unit_normal))
        if lejania >= self.radio:
            return None
        media = math.sqrt(self.radio ** 2 - lejania ** 2)
        lo, hi = max(arista.lo, s_c - media), min(arista.hi, s_c + media)
        return (lo, hi) if hi - lo > self.tol else None

    def _nuevo(self, punto, aristas, celdas):
        self.nodos.append(_Nodo(np.asarray(punto, dtype=float), dict(aristas), tuple(celdas)))
        return len(self.nodos) - 1

    def _construir_nodos(self):
        d = self.domain
        nodo_esquina = {}
        for c, p in enumerate(d.corners):
            if math.hypot(*(p - self.centro)) <= self.radio:
                aristas = {e: d.edges[e].param(p) for e in d.corner_edges[c]}
                nodo_esquina[c] = self._nuevo(p, aristas, d.corner_cells[c])

        for arista in d.edges:
            rango = self._recorte(arista)
            if rango is None:
                continue
            lo, hi = rango
            ids = []
            for s, esquina in ((lo, arista.corner_lo), (hi, arista.corner_hi)):
                if esquina is not None and esquina in nodo_esquina and s in (arista.lo, arista.hi):
                    ids.append(nodo_esquina[esquina])
                else:
                    ids.append(self._nuevo(arista.point_at(s), {arista.index: s}, arista.neighbors))
            u_lo, u_hi = math.asinh(lo / arista.h), math.asinh(hi / arista.h)
            for u in np.linspace(u_lo, u_hi, self.muestras + 2)[1:-1]:
                s = arista.h * math.sinh(u)
                ids.append(self._nuevo(arista.point_at(s), {arista.index: s}, arista.neighbors))
            self.sobre_arista[arista.index] = ids

        self.ix = self._nodo_consulta(self.x)
        self.iy = self._nodo_consulta(self.y)

    def _nodo_consulta(self, z):
        loc = self.domain.locate(z)
        aristas = {e: self.domain.edges[e].param(z) for e in loc.edges}
        indice = self._nuevo(z, aristas, loc.cells)
        for e in aristas:
            if e in self.sobre_arista:
                self.sobre_arista[e].append(indice)
        return indice

    def _construir_arcos(self):
        d = self.domain
        filas, columnas, pesos = [], [], []

        for e, ids in self.sobre_arista.items():
            arista = d.edges[e]
            ids = sorted(set(ids), key=lambda k: self.nodos[k].aristas[e])
            self.sobre_arista[e] = ids
            u = np.array([math.asinh(self.nodos[k].aristas[e] / arista.h) for k in ids])
            filas.extend(ids[:-1])
            columnas.extend(ids[1:])
            pesos.extend(np.abs(np.diff(u)).tolist())

        por_celda = [[] for _ in range(d.n)]
        for k, nodo in enumerate(self.nodos):
            for c in nodo.celdas:
                por_celda[c].append(k)

        for c, ids in enumerate(por_celda):
            if len(ids) < 2:
                continue
            ids = np.array(sorted(set(ids)))
            a, b, w = self._arcos_celda(d.cells[c], ids)
            filas.extend(a.tolist())
            columnas.extend(b.tolist())
            pesos.extend(w.tolist())

        filas = np.array(filas, dtype=int)
        columnas = np.array(columnas, dtype=int)
        pesos = np.maximum(np.array(pesos, dtype=float), 1e-300)
        # Un mismo par puede venir de dos celdas: se conserva el menor peso
        menor = np.minimum(filas, columnas)
        mayor = np.maximum(filas, columnas)
        orden = np.lexsort((pesos, mayor, menor))
        clave = menor[orden] * len(self.nodos) + mayor[orden]
        _, primeros = np.unique(clave, return_index=True)
        elegidos = orden[primeros]
        n = len(self.nodos)
        self.matriz = coo_matrix((pesos[elegidos], (menor[elegidos], mayor[elegidos])), shape=(n, n)).tocsr()
        logger.debug("Grafo de uniones: %d nodos, %d arcos", n, len(elegidos))

    def _arcos_celda(self, celda, ids):
        """Arcos de espiral contenidos en la celda entre nodos que no comparten arista."""
        puntos = np.array([self.nodos[k].punto for k in ids])
        aristas_celda = list(celda.edges)
        incidencia = np.array(
            [[e in self.nodos[k].aristas for e in aristas_celda] for k in ids], dtype=float
        ).reshape(len(ids), len(aristas_celda))
        comparten = (incidencia @ incidencia.T) > 0
        i, j = np.triu_indices(len(ids), 1)
        libres = ~comparten[i, j]
        i, j = i[libres], j[libres]
        pesos, dentro = _pesos_espiral(celda, puntos[i], puntos[j], _FRACCIONES_GRAFO, self.tol)
        return ids[i][dentro], ids[j][dentro], pesos[dentro]

    def camino_nodos(self):
        """Nodos del camino más corto de x a y, o None si no hay conexión."""
        distancias, predecesores = dijkstra(self.matriz, directed=False, indices=self.ix, return_predecessors=True)
        if not np.isfinite(distancias[self.iy]):
            return None
        camino = [self.iy]
        while camino[-1] != self.ix:
            camino.append(int(predecesores[camino[-1]]))
        return camino[::-1]

    def resolver(self):
        """
        Geodésica compuesta de x a y.

        Returns:
            CaminoUniones, o None si x e y no están conectados en el grafo
        """
        nodos = self.camino_nodos()
        if nodos is None:
            return None
        pasos = self._pasos(nodos)
        pasos = self._optimizar(pasos)
        return self._ensamblar(pasos)

    def _pasos(self, nodos):
        """
        Traduce la sucesión de nodos en pasos (tipo, soporte, a, b).

        tipo 'slide' con soporte una arista, o 'spiral' con soporte una celda.
        Los deslizamientos consecutivos sobre la misma arista se funden.
        """
        d = self.domain
        pasos = []
        for a, b in zip(nodos[:-1], nodos[1:]):
            comunes = sorted(set(self.nodos[a].aristas) & set(self.nodos[b].aristas))
            if comunes:
                e = comunes[0]
                if pasos and pasos[-1][0] == 'slide' and pasos[-1][1] == e:
                    pasos[-1] = ('slide', e, pasos[-1][2], b)
                else:
                    pasos.append(('slide', e, a, b))
                continue
            mejor = None
            for c in sorted(set(self.nodos[a].celdas) & set(self.nodos[b].celdas)):
                peso, dentro = _pesos_espiral(
                    d.cells[c], self.nodos[a].punto[None, :], self.nodos[b].punto[None, :],
                    _FRACCIONES_GRAFO, self.tol,
                )
                if dentro[0] and (mejor is None or peso[0] < mejor[0]):
                    mejor = (peso[0], c)
            c = mejor[1] if mejor is not None else sorted(set(self.nodos[a].celdas) & set(self.nodos[b].celdas))[0]
            pasos.append(('spiral', c, a, b))
        return pasos

    def _variables(self, pasos):
        """Nodos de unión libres (muestras de arista) y la arista sobre la que se mueven."""
        libres = {}
        for k in range(len(pasos) - 1):
            nodo = pasos[k][3]
            if nodo in (self.ix, self.iy) or len(self.nodos[nodo].aristas) != 1:
                continue
            (e,) = self.nodos[nodo].aristas
            libres[nodo] = e
        return libres

    def _optimizar(self, pasos):
        libres = self._variables(pasos)
        if not libres:
            return [(tipo, sop, self.nodos[a].punto, self.nodos[b].punto) for tipo, sop, a, b in pasos]
        d = self.domain
        orden = list(libres)
        posicion = {nodo: k for k, nodo in enumerate(orden)}
        s0 = np.array([self.nodos[nodo].aristas[libres[nodo]] for nodo in orden])
        cotas = []
        for nodo in orden:
            ids = self.sobre_arista[libres[nodo]]
            params = [self.nodos[k].aristas[libres[nodo]] for k in ids]
            cotas.append((min(params), max(params)))

        def punto(nodo, s):
            if nodo in posicion:
                return d.edges[libres[nodo]].point_at(s[posicion[nodo]])
            return self.nodos[nodo].punto

        def param(nodo, e, s):
            if nodo in posicion:
                return s[posicion[nodo]]
            return self.nodos[nodo].aristas[e]

        def objetivo(s):
            total = 0.0
            gradiente = np.zeros_like(s)
            for tipo, soporte, a, b in pasos:
                if tipo == 'slide':
                    arista = d.edges[soporte]
                    sa, sb = param(a, soporte, s), param(b, soporte, s)
                    ua, ub = math.asinh(sa / arista.h), math.asinh(sb / arista.h)
                    total += abs(ub - ua)
                    signo = math.copysign(1.0, ub - ua) if ub != ua else 0.0
                    if a in posicion:
                        gradiente[posicion[a]] -= signo / math.hypot(arista.h, sa)
                    if b in posicion:
                        gradiente[posicion[b]] += signo / math.hypot(arista.h, sb)
                else:
                    S = d.boundary[soporte]
                    pa, pb = punto(a, s), punto(b, s)
                    largo, ga, gb = _distancia_perforada_gradiente(S, pa, pb)
                    total += largo
                    if a in posicion:
                        gradiente[posicion[a]] += float(ga @ d.edges[libres[a]].direction)
                    if b in posicion:
                        gradiente[posicion[b]] += float(gb @ d.edges[libres[b]].direction)
            return total, gradiente

        resultado = minimize(objetivo, s0, jac=True, method='L-BFGS-B', bounds=cotas,
                             options={'ftol': 1e-15, 'gtol': 1e-12, 'maxiter': 500})
        s = resultado.x
        logger.debug("Uniones optimizadas: %d variables, longitud %.12g", len(s), resultado.fun)
        return [(tipo, sop, punto(a, s), punto(b, s)) for tipo, sop, a, b in pasos]

    def _ensamblar(self, pasos):
        d = self.domain
        piezas, celdas, sucesos = [], [], []
        contenido = True
        t = 0.0
        previo = None
        for tipo, soporte, pa, pb in pasos:
            if math.hypot(*(pb - pa)) == 0.0:
                continue
            if previo is not None:
                loc = d.locate(pa)
                if loc.kind == LOC_CORNER:
                    clase = CORNER
                elif tipo == 'slide':
                    clase = SLIDING_START
                elif previo[0] == 'slide':
                    clase = SLIDING_END
                else:
                    clase = CROSSING
                desde = previo[1] if previo[0] == 'spiral' else None
                hacia = soporte if tipo == 'spiral' else None
                sucesos.append(ShootEvent(t, loc, clase, (desde, hacia), clase == CORNER))
            if tipo == 'slide':
                arista = d.edges[soporte]
                pieza = StraightArc.on_edge(arista, arista.param(pa), arista.param(pb))
                celdas.append(None)
            else:
                S = d.boundary[soporte]
                opciones = punctured_geodesic(S, pa, pb).arcs
                pieza = opciones[0]
                for opcion in opciones:
                    _, dentro = _pesos_espiral(d.cells[soporte], pa[None, :], pb[None, :],
                                               _FRACCIONES_VALIDACION, self.tol, giro=opcion.alpha)
                    if dentro[0]:
                        pieza = opcion
                        break
                else:
                    contenido = False
                celdas.append(soporte)
            piezas.append(pieza)
            t += pieza.qh_len
            previo = (tipo, soporte)

        if not piezas:
            return None
        direccion = piezas[0].tangents([0.0])[0]
        path = GeodesicPath.from_pieces(self.x, direccion, piezas, sucesos, celdas)
        _, salto = path.max_junction_gaps()
        valido = contenido and salto <= TOLERANCIAS['union_c1'] * 10.0
        return CaminoUniones(path, valido, contenido, salto)


def _pesos_espiral(celda, a, b, fracciones, tol, giro=None):
    """
    Longitudes del plano perforado entre los pares (a[k], b[k]) y si la
    espiral correspondiente queda dentro de la celda.

    Args:
        giro: Si se indica, ángulo α de la espiral a comprobar (para elegir
            entre las dos geodésicas antipodales)
    """
    S = celda.nucleus
    ra, rb = a - S, b - S
    la = np.log(np.hypot(ra[:, 0], ra[:, 1]))
    lb = np.log(np.hypot(rb[:, 0], rb[:, 1]))
    ta = np.arctan2(ra[:, 1], ra[:, 0])
    tb = np.arctan2(rb[:, 1], rb[:, 0])
    dlog = lb - la
    dtheta = pr_array(tb - ta)
    if giro is not None:
        largo = np.hypot(dlog, dtheta)
        dtheta = np.where(np.abs(np.abs(dtheta) - math.pi) <= TOLERANCIAS['antipodal'],
                          largo * math.sin(giro), dtheta)
    pesos = np.hypot(dlog, dtheta)
    if len(celda.edges) == 0:
        return pesos, np.ones(len(pesos), dtype=bool)
    f = fracciones[None, :]
    rho = np.exp(la[:, None] + f * dlog[:, None])
    theta = ta[:, None] + f * dtheta[:, None]
    puntos = S + np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=-1)
    desplazamientos = np.einsum('pfk,ek->pfe', puntos, celda.normals) - np.sum(celda.anchors * celda.normals, axis=1)
    dentro = np.all(desplazamientos >= -tol, axis=(1, 2))
    return pesos, dentro


def _distancia_perforada_gradiente(S, a, b):
    """Distancia del plano perforado y sus gradientes respecto de a y b."""
    za = complex(a[0] - S[0], a[1] - S[1])
    zb = complex(b[0] - S[0], b[1] - S[1])
    dlog = math.log(abs(zb)) - math.log(abs(za))
    dtheta = float(pr_array(math.atan2(zb.imag, zb.real) - math.atan2(za.imag, za.real)))
    largo = math.hypot(dlog, dtheta)
    if largo == 0.0:
        return 0.0, np.zeros(2), np.zeros(2)
    e = complex(dlog, dtheta) / largo
    cb = e.conjugate() / zb
    ca = e.conjugate() / za
    return largo, -np.array([ca.real, -ca.imag]), np.array([cb.real, -cb.imag])


def cota_superior(domain, x, y, camino=None):
    """
    Longitud de una curva admisible de x a y (cota superior de d_Q).

    Usa el camino del grafo si sus piezas quedan dentro de sus celdas y, en
    cualquier caso, la cuadratura del segmento [x, y] o de un desvío en
    codo cuando el segmento pasa por un núcleo.

    Args:
        domain: VoronoiDomain
        x, y: Extremos
        camino: CaminoUniones ya calculado (opcional)

    Returns:
        La menor de las longitudes disponibles
    """
    x, y = como_punto(x, 'x'), como_punto(y, 'y')
    candidatos = []
    if camino is not None and camino.contenido:
        candidatos.append(camino.path.total_qh_len)
    recorridos = [np.array([x, y])]
    tramo = y - x
    medio = (x + y) / 2.0
    for signo in (1.0, -1.0):
        recorridos.append(np.array([x, medio + signo * 0.5 * np.array([-tramo[1], tramo[0]]), y]))
    for recorrido in recorridos:
        try:
            candidatos.append(qh_length_of_polyline(domain, recorrido))
            break
        except SingularityError:
            logger.debug("Recorrido de cota por un núcleo, se prueba un desvío")
    if not candidatos:
        raise ConvergenceError("No se encontró ninguna curva admisible de referencia")
    return float(min(candidatos))
