"""
Emisor SVG determinista para dominios, bolas y geodésicas.

Las coordenadas se escriben a escala fija (DIMENSIONS['svg_scale'] unidades
por unidad del dominio) con un número fijo de decimales, y el eje y se
invierte para que la figura tenga la orientación matemática habitual. Las
capas se emiten siempre en el mismo orden.
"""

import math

from utils.styles import COLORS, DIMENSIONS

CAPAS = ('nuclei', 'edges', 'polygon', 'ball', 'geodesics', 'markers')

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN"
"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg width="%(width)s" height="%(height)s" viewBox="%(min_x)s %(min_y)s %(width)s %(height)s" version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="%(min_x)s" y="%(min_y)s" width="%(width)s" height="%(height)s" style="fill:%(fondo)s"/>
"""

POSTAMBLE = """\
</svg>
"""


class SVG:
    """
    Figura SVG organizada por capas.

    Los puntos se dan en coordenadas del dominio; la conversión a unidades
    SVG ocurre al emitir.
    """

    def __init__(self, escala=None, decimales=None):
        self.escala = DIMENSIONS['svg_scale'] if escala is None else escala
        self.decimales = DIMENSIONS['svg_decimals'] if decimales is None else decimales
        self.min_x = None
        self.max_x = None
        self.min_y = None
        self.max_y = None
        self.capas = {nombre: [] for nombre in CAPAS}

    def num(self, v):
        # +0.0 evita "-0.000"
        return f"{round(v * self.escala, self.decimales) + 0.0:.{self.decimales}f}"

    def par(self, x, y):
        return f"{self.num(x)},{self.num(-y)}"

    def require(self, x, y):
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def circle(self, capa, x, y, radio, color, relleno=True):
        self.require(x - radio, y - radio)
        self.require(x + radio, y + radio)
        estilo = f"fill:{color}" if relleno else f"fill:none;stroke:{color}"
        self.capas[capa].append(
            f'<circle cx="{self.num(x)}" cy="{self.num(-y)}" r="{self.num(radio)}" style="{estilo}"/>'
        )

    def line(self, capa, puntos, color, ancho=1.0, ampliar=True):
        if ampliar:
            for x, y in puntos:
                self.require(x, y)
        self.capas[capa].append(
            '<polyline points="%s" style="fill:none;stroke:%s;stroke-width:%s"/>' % (
                ' '.join(self.par(x, y) for x, y in puntos), color, f"{ancho:.{self.decimales}f}")
        )

    def polygon(self, capa, puntos, color, ancho=1.0, relleno='none'):
        for x, y in puntos:
            self.require(x, y)
        self.capas[capa].append(
            '<polygon points="%s" style="fill:%s;stroke:%s;stroke-width:%s"/>' % (
                ' '.join(self.par(x, y) for x, y in puntos), relleno, color, f"{ancho:.{self.decimales}f}")
        )

    def ventana(self):
        """Caja (min_x, max_x, min_y, max_y) con margen, en unidades del dominio."""
        if self.min_x is None:
            return (-1.0, 1.0, -1.0, 1.0)
        pad = max(self.max_x - self.min_x, self.max_y - self.min_y, 1e-3) * DIMENSIONS['svg_margin']
        return (self.min_x - pad, self.max_x + pad, self.min_y - pad, self.max_y + pad)

    def render(self):
        x0, x1, y0, y1 = self.ventana()
        datos = {
            'min_x': self.num(x0),
            'min_y': self.num(-y1),
            'width': self.num(x1 - x0),
            'height': self.num(y1 - y0),
            'fondo': COLORS['background'],
        }
        partes = [PREAMBLE % datos]
        for nombre in CAPAS:
            if self.capas[nombre]:
                partes.append(f'<g id="{nombre}">\n')
                partes.extend(item + '\n' for item in self.capas[nombre])
                partes.append('</g>\n')
        partes.append(POSTAMBLE)
        return ''.join(partes)

    def save(self, filename):
        with open(filename, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.render())


def recortar_arista(arista, ventana):
    """
    Tramo de la arista dentro de la caja (algoritmo de Liang-Barsky).

    Returns:
        (p, q) extremos del tramo visible, o None si no corta la caja
    """
    x0, x1, y0, y1 = ventana
    lo, hi = arista.lo, arista.hi
    for origen, d, bajo, alto in ((arista.point[0], arista.direction[0], x0, x1),
                                  (arista.point[1], arista.direction[1], y0, y1)):
        if abs(d) < 1e-15:
            if origen < bajo or origen > alto:
                return None
            continue
        s0, s1 = sorted(((bajo - origen) / d, (alto - origen) / d))
        lo, hi = max(lo, s0), min(hi, s1)
    if not lo < hi:
        return None
    return arista.point_at(lo), arista.point_at(hi)


def figura(domain, ball=None, paths=(), polygon=None, marcas=()):
    """
    Figura completa de un dominio con bola y geodésicas opcionales.

    La caja visible se ajusta a los núcleos, la bola, las geodésicas y el
    polígono; las aristas no acotadas se recortan a esa caja.

    Args:
        domain: VoronoiDomain
        ball: QhBall opcional
        paths: Secuencia de GeodesicPath
        polygon: Vértices del polígono original (dominios aproximados)
        marcas: Puntos a resaltar (centro, extremos)
    """
    svg = SVG()
    r_nucleo = DIMENSIONS['nucleus_radius']
    for a in domain.boundary:
        svg.circle('nuclei', float(a[0]), float(a[1]), r_nucleo, COLORS['nucleus'])
    if polygon is not None:
        svg.polygon('polygon', [(float(p[0]), float(p[1])) for p in polygon], COLORS['polygon'],
                    DIMENSIONS['stroke_edge'])
    if ball is not None:
        borde = ball.boundary
        svg.polygon('ball', [(float(p[0]), float(p[1])) for p in borde], COLORS['ball'],
                    DIMENSIONS['stroke_ball'], COLORS['ball_fill'])
        svg.circle('markers', float(ball.center[0]), float(ball.center[1]), DIMENSIONS['marker_radius'],
                   COLORS['center'])
    for k, path in enumerate(paths):
        color = COLORS['geodesic'] if k == 0 or ball is not None else COLORS['geodesic_alt']
        puntos = path.dense_points()
        svg.line('geodesics', [(float(p[0]), float(p[1])) for p in puntos], color, DIMENSIONS['stroke_geodesic'])
        for evento in path.events:
            if evento.flagged:
                q = path.point(evento.t)
                svg.circle('markers', float(q[0]), float(q[1]), DIMENSIONS['marker_radius'], COLORS['flagged'])
    for p in marcas:
        svg.circle('markers', float(p[0]), float(p[1]), DIMENSIONS['marker_radius'], COLORS['center'])

    caja = svg.ventana()
    for arista in domain.edges:
        tramo = recortar_arista(arista, caja)
        if tramo is not None and math.isfinite(tramo[0][0]) and math.isfinite(tramo[1][0]):
            p, q = tramo
            svg.line('edges', [(float(p[0]), float(p[1])), (float(q[0]), float(q[1]))], COLORS['edge'],
                     DIMENSIONS['stroke_edge'], ampliar=False)
    return svg


def guardar_figura(ruta, domain, **opciones):
    figura(domain, **opciones).save(ruta)
    return ruta

