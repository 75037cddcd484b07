"""
Subcomando ball: frontera de una bola cuasihiperbólica en SVG y CSV.
"""

import logging

from commands.base import OK, ComandoBase
from utils.motor_geodesico import trace_ball
from utils.svg import guardar_figura

logger = logging.getLogger(__name__)

CABECERA = ['phi', 'endpoint_x', 'endpoint_y', 'qh_length']

# Geodésicas de muestra dibujadas en la figura
GEODESICAS_DIBUJADAS = 8


class BallCommand(ComandoBase):
    """
    Traza B_Q(x, r) con --samples disparos iniciales.

    Sin --output el CSV sale por stdout; con --output se escriben
    <prefijo>.csv y <prefijo>.svg.
    """

    def __init__(self, config, stdout=None):
        super().__init__(config, "Bola cuasihiperbólica", "ball", stdout)

    def ejecutar(self):
        self.cargar_dominio()
        x = self.punto('x')
        r = self.config.require('r')
        ball = trace_ball(self.domain, x, r, n_samples=self.config.samples, workers=self.config.workers)
        filas = [(f"{phi:.12g}", f"{px:.12g}", f"{py:.12g}", f"{largo:.12g}")
                 for phi, px, py, largo in ball.filas_csv()]

        paso = max(1, len(ball.samples) // GEODESICAS_DIBUJADAS)
        muestras = tuple(path for _, _, path in ball.samples[::paso])
        ruta = self.ruta_salida('.csv')
        self.escribir_csv(CABECERA, filas, ruta)
        if ruta:
            guardar_figura(self.ruta_salida('.svg'), self.domain, ball=ball, paths=muestras,
                           polygon=self.spec.polygon)
        logger.info("Bola r=%.6g: %d muestras, convexa: %s", r, len(ball.samples), ball.is_convex())
        self.vista_previa(ball=ball, paths=muestras)
        return OK
