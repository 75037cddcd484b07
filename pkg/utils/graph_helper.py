"""
Vistas previas PNG con Matplotlib (backend Agg, sin interfaz gráfica).
"""

import logging

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from utils.styles import COLORS, DIMENSIONS
from utils.svg import recortar_arista

logger = logging.getLogger(__name__)


class GraphCanvas:
    """
    Figura de Matplotlib para dibujar dominios, bolas y geodésicas.
    """

    def __init__(self, figsize=None, dpi=None):
        """
        Inicializa la figura.

        Args:
            figsize: Tamaño de la figura (ancho, alto) en pulgadas
            dpi: Resolución de la figura
        """
        self.figure = Figure(figsize=figsize or DIMENSIONS['png_size'], dpi=dpi or DIMENSIONS['png_dpi'],
                             facecolor=COLORS['background'])
        self.canvas = FigureCanvasAgg(self.figure)
        self.ax = self.figure.add_subplot(111)
        self.ax.set_aspect('equal')
        self._puntos = []
        self._domain = None

    def _anotar(self, xs, ys):
        self._puntos.extend(zip(xs, ys))

    def plot(self, xs, ys, **kwargs):
        """Crea un gráfico de línea."""
        self._anotar(xs, ys)
        self.ax.plot(xs, ys, **kwargs)

    def scatter(self, xs, ys, **kwargs):
        """Crea un gráfico de dispersión."""
        self._anotar(xs, ys)
        self.ax.scatter(xs, ys, **kwargs)

    def set_labels(self, xlabel='', ylabel='', title=''):
        if xlabel:
            self.ax.set_xlabel(xlabel)
        if ylabel:
            self.ax.set_ylabel(ylabel)
        if title:
            self.ax.set_title(title)

    def grid(self, visible=True):
        self.ax.grid(visible, alpha=0.3)

    def ventana(self):
        """Caja (min_x, max_x, min_y, max_y) de lo dibujado, con margen."""
        if not self._puntos:
            return (-1.0, 1.0, -1.0, 1.0)
        xs = [p[0] for p in self._puntos]
        ys = [p[1] for p in self._puntos]
        pad = max(max(xs) - min(xs), max(ys) - min(ys), 1e-3) * DIMENSIONS['view_margin']
        return (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)

    def dominio(self, domain):
        """Núcleos del dominio; las aristas se añaden al guardar, recortadas a la vista."""
        self.scatter(domain.boundary[:, 0], domain.boundary[:, 1], s=12, color=COLORS['nucleus'], zorder=3)
        self._domain = domain

    def bola(self, ball):
        borde = ball.boundary
        xs = list(borde[:, 0]) + [borde[0, 0]]
        ys = list(borde[:, 1]) + [borde[0, 1]]
        self.ax.fill(xs, ys, color=COLORS['ball_fill'], alpha=0.5, zorder=1)
        self.plot(xs, ys, color=COLORS['ball'], linewidth=1.5, zorder=2)
        self.scatter([ball.center[0]], [ball.center[1]], s=20, color=COLORS['center'], zorder=4)

    def geodesica(self, path, principal=True):
        puntos = path.dense_points()
        color = COLORS['geodesic'] if principal else COLORS['geodesic_alt']
        self.plot(puntos[:, 0], puntos[:, 1], color=color, linewidth=1.2, zorder=2)
        marcados = [path.point(e.t) for e in path.events if e.flagged]
        if marcados:
            self.scatter([p[0] for p in marcados], [p[1] for p in marcados], s=18, color=COLORS['flagged'],
                         zorder=4)

    def save(self, ruta):
        """Recorta la vista, dibuja las aristas visibles y guarda el PNG."""
        caja = self.ventana()
        domain = self._domain
        if domain is not None:
            for arista in domain.edges:
                tramo = recortar_arista(arista, caja)
                if tramo is not None:
                    p, q = tramo
                    self.ax.plot([p[0], q[0]], [p[1], q[1]], color=COLORS['edge'], linewidth=0.8, zorder=0)
        self.ax.set_xlim(caja[0], caja[1])
        self.ax.set_ylim(caja[2], caja[3])
        self.figure.tight_layout()
        self.canvas.print_png(ruta)
        logger.info("Vista previa guardada en %s", ruta)
        return ruta


def vista_previa(ruta, domain, ball=None, paths=(), titulo=''):
    """PNG de un dominio con bola y geodésicas opcionales."""
    lienzo = GraphCanvas()
    lienzo.dominio(domain)
    if ball is not None:
        lienzo.bola(ball)
    for k, path in enumerate(paths):
        lienzo.geodesica(path, principal=(k == 0))
    lienzo.set_labels('x', 'y', titulo)
    lienzo.grid()
    return lienzo.save(ruta)
