"""
Subcomando geodesic: geodésicas entre dos puntos o disparo desde uno.
"""

import math

from commands.base import OK, ComandoBase
from utils.motor_geodesico import connect, shoot
from utils.svg import guardar_figura


class GeodesicCommand(ComandoBase):
    """
    Con --y resuelve el problema de contorno (connect); con --phi y --r
    dispara desde x. Imprime el JSON del resultado; con --output escribe el
    JSON y una figura SVG.
    """

    def __init__(self, config, stdout=None):
        super().__init__(config, "Geodésica", "geodesic", stdout)

    def ejecutar(self):
        self.cargar_dominio()
        x = self.punto('x')
        if self.config.y is not None:
            y = self.punto('y')
            resultado = connect(self.domain, x, y)
            paths, datos, marcas = resultado.paths, resultado.to_dict(), (x, y)
        else:
            phi, r = self.config.require('phi', 'r')
            path = shoot(self.domain, x, (math.cos(phi), math.sin(phi)), r)
            paths, datos, marcas = (path,), path.to_dict(), (x,)

        self.escribir_json(datos)
        ruta = self.ruta_salida('.json')
        if ruta:
            self.escribir_json(datos, ruta)
            guardar_figura(self.ruta_salida('.svg'), self.domain, paths=paths, marcas=marcas,
                           polygon=self.spec.polygon)
        self.vista_previa(paths=paths)
        return OK
