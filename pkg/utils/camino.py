"""
Caminos geodésicos compuestos: piezas de espiral y arcos rectos pegados
de forma C¹, con parametrización canónica (el parámetro es la longitud
cuasihiperbólica).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from utils.geometria import como_punto, unitario

CROSSING = 'crossing'
TOUCHING = 'touching'
SLIDING_START = 'sliding-start'
SLIDING_END = 'sliding-end'
CORNER = 'corner'


@dataclass(frozen=True)
class ShootEvent:
    """Suceso en una unión entre piezas (o contacto tangencial con una arista)."""
    t: float
    location: object
    kind: str
    cells: tuple
    flagged: bool = False

    def to_dict(self):
        loc = self.location
        return {
            't': self.t,
            'kind': self.kind,
            'cells': [None if c is None else int(c) for c in self.cells],
            'location': {
                'kind': loc.kind,
                'cells': list(loc.cells),
                'edge': loc.edge,
                'corner': loc.corner,
            },
            'flagged': self.flagged,
        }


@dataclass(frozen=True)
class GeodesicPath:
    """
    Composición canónica de piezas.

    Attributes:
        pieces: Tupla de SpiralArc / StraightArc
        start: Punto inicial
        direction: Tangente unitaria inicial (válida también si no hay piezas)
        total_qh_len: Suma exacta de las longitudes de las piezas
        events: Sucesos ordenados por t
        cells: Celda de cada pieza (None para arcos rectos)
    """
    pieces: tuple
    start: np.ndarray
    direction: np.ndarray
    total_qh_len: float
    events: tuple = ()
    cells: tuple = ()
    _offsets: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        largos = [p.qh_len for p in self.pieces]
        object.__setattr__(self, '_offsets', np.concatenate([[0.0], np.cumsum(largos)]))
        object.__setattr__(self, 'start', como_punto(self.start))
        object.__setattr__(self, 'direction', unitario(self.direction))

    @classmethod
    def from_pieces(cls, start, direction, pieces, events=(), cells=()):
        pieces = tuple(pieces)
        total = float(sum(p.qh_len for p in pieces))
        cells = tuple(cells) if cells else tuple(None for _ in pieces)
        return cls(pieces, start, direction, total, tuple(events), cells)

    def _pieza(self, t):
        if not self.pieces:
            return None, 0.0
        t = min(max(float(t), 0.0), self.total_qh_len)
        k = int(np.searchsorted(self._offsets, t, side='right')) - 1
        k = min(max(k, 0), len(self.pieces) - 1)
        local = min(t - self._offsets[k], self.pieces[k].qh_len)
        return self.pieces[k], max(local, 0.0)

    def point(self, t):
        pieza, local = self._pieza(t)
        return self.start.copy() if pieza is None else pieza.point(local)

    def tangent(self, t):
        pieza, local = self._pieza(t)
        return self.direction.copy() if pieza is None else pieza.tangent(local)

    def velocity(self, t):
        pieza, local = self._pieza(t)
        return np.zeros(2) if pieza is None else pieza.velocity(local)

    def sample(self, n):
        """n puntos equiespaciados en t, incluidos los extremos."""
        ts = np.linspace(0.0, self.total_qh_len, n)
        return ts, np.array([self.point(t) for t in ts])

    def dense_points(self, por_pieza=32):
        """Puntos densos pieza a pieza, para dibujar o integrar."""
        if not self.pieces:
            return self.start[None, :].copy()
        bloques = [self.start[None, :]]
        for pieza in self.pieces:
            ts = np.linspace(0.0, pieza.qh_len, por_pieza + 1)[1:]
            bloques.append(pieza.points(ts))
        return np.vstack(bloques)

    @property
    def endpoint(self):
        return self.pieces[-1].end_point if self.pieces else self.start.copy()

    @property
    def end_tangent(self):
        return self.pieces[-1].end_tangent if self.pieces else self.direction.copy()

    @property
    def piece_offsets(self):
        return self._offsets.copy()

    def junctions(self):
        """Parámetros de las uniones interiores entre piezas."""
        return self._offsets[1:-1].copy()

    def cell_sequence(self):
        """Celdas recorridas por las piezas de espiral, sin repeticiones consecutivas."""
        secuencia = []
        for c in self.cells:
            if c is not None and (not secuencia or secuencia[-1] != c):
                secuencia.append(c)
        return secuencia

    def truncate(self, t):
        """Camino restringido a [0, t]."""
        t = min(max(float(t), 0.0), self.total_qh_len)
        piezas, celdas = [], []
        for k, pieza in enumerate(self.pieces):
            inicio = self._offsets[k]
            if inicio >= t:
                break
            if self._offsets[k + 1] <= t:
                piezas.append(pieza)
            else:
                piezas.append(pieza.truncated(t - inicio))
            celdas.append(self.cells[k])
        sucesos = [e for e in self.events if e.t <= t]
        return GeodesicPath.from_pieces(self.start, self.direction, piezas, sucesos, celdas)

    def concatenate(self, otro):
        """Une este camino con otro que empieza en su extremo final."""
        desplazados = [
            ShootEvent(e.t + self.total_qh_len, e.location, e.kind, e.cells, e.flagged) for e in otro.events
        ]
        return GeodesicPath.from_pieces(
            self.start, self.direction, self.pieces + otro.pieces,
            self.events + tuple(desplazados), self.cells + otro.cells,
        )

    def reversed(self):
        """Mismo camino recorrido de final a principio."""
        piezas = [p.reversed() for p in reversed(self.pieces)]
        total = self.total_qh_len
        sucesos = [
            ShootEvent(total - e.t, e.location, e.kind, tuple(reversed(e.cells)), e.flagged)
            for e in reversed(self.events)
        ]
        return GeodesicPath.from_pieces(self.endpoint, -self.end_tangent, piezas, sucesos, tuple(reversed(self.cells)))

    def max_junction_gaps(self):
        """Máximos saltos de posición y de tangente (radianes) en las uniones."""
        salto_c0, salto_c1 = 0.0, 0.0
        for a, b in zip(self.pieces[:-1], self.pieces[1:]):
            salto_c0 = max(salto_c0, float(math.hypot(*(a.end_point - b.start_point))))
            ta, tb = a.end_tangent, b.tangents([0.0])[0]
            salto_c1 = max(salto_c1, abs(math.atan2(ta[0] * tb[1] - ta[1] * tb[0], float(ta @ tb))))
        return salto_c0, salto_c1

    def to_dict(self):
        return {
            'start': self.start.tolist(),
            'direction': self.direction.tolist(),
            'total_qh_len': self.total_qh_len,
            'endpoint': self.endpoint.tolist(),
            'pieces': [
                dict(p.to_dict(), cell=None if c is None else int(c)) for p, c in zip(self.pieces, self.cells)
            ],
            'events': [e.to_dict() for e in self.events],
        }
