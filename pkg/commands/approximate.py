"""
Subcomando approximate: distancias en aproximaciones de Voronoi Ω_k de un polígono.
"""

import logging

from commands.base import OK, ComandoBase
from utils.config import LIMITES, TOLERANCIAS
from utils.errores import InputError
from utils.motor_geodesico import qh_distance

logger = logging.getLogger(__name__)

CABECERA = ['level', 'nuclei', 'distance', 'flagged']


class ApproximateCommand(ComandoBase):
    """
    Para cada nivel k (muestreo del polígono duplicado en cada nivel y
    anidado) calcula d_Q(x, y) en Ω_k. Al refinar, Ω_k disminuye y la
    distancia no debe decrecer; los niveles donde decrece más que la
    tolerancia se marcan.
    """

    def __init__(self, config, stdout=None):
        super().__init__(config, "Aproximación por dominios de Voronoi", "approximate", stdout)

    def niveles(self):
        return self.config.levels or tuple(range(LIMITES['peldanos_escalera']))

    def tabla(self):
        """Filas (nivel, núcleos, distancia, marcado)."""
        self.spec = self.config.load_spec()
        if not self.spec.is_polygon:
            raise InputError("approximate necesita un dominio con 'polygon'")
        x, y = self.punto('x'), self.punto('y')
        tol = TOLERANCIAS['monotonia']
        filas = []
        anterior = None
        for nivel in self.niveles():
            self.domain = self.spec.domain(nivel)
            distancia = qh_distance(self.domain, x, y)
            marcado = anterior is not None and distancia < anterior - tol * max(anterior, 1.0)
            if marcado:
                logger.warning("Nivel %d: la distancia baja de %.9g a %.9g", nivel, anterior, distancia)
            filas.append((nivel, self.domain.n, distancia, marcado))
            anterior = distancia
        return filas

    def ejecutar(self):
        filas = self.tabla()
        self.escribir_csv(CABECERA, [(k, n, f"{d:.9f}", int(m)) for k, n, d, m in filas], self.ruta_salida('.csv'))
        return OK
