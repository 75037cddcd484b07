"""
Subcomando distance: distancia del motor contrastada con el oráculo.
"""

import logging

from commands.base import FALLO_NUMERICO, OK, ComandoBase
from utils.config import LIMITES
from utils.errores import ResolutionError
from utils.grafo_uniones import cota_superior
from utils.motor_geodesico import connect
from utils.oraculo import oracle_distance, paso_para_nodos

logger = logging.getLogger(__name__)


class DistanceCommand(ComandoBase):
    """
    Imprime d_Q(x, y) del motor, la estimación de Richardson del oráculo y
    su diferencia relativa. Con --output escribe además las geodésicas en JSON.
    """

    def __init__(self, config, stdout=None):
        super().__init__(config, "Distancia cuasihiperbólica", "distance", stdout)

    def oraculo(self, x, y):
        """Estimación del oráculo, o None si la malla no resuelve los extremos."""
        try:
            cota = cota_superior(self.domain, x, y)
            h = paso_para_nodos(self.domain, x, y, LIMITES['nodos_oraculo_cli'], cota)
            return oracle_distance(self.domain, x, y, h, cota=cota).richardson_estimate
        except ResolutionError as exc:
            logger.warning("Oráculo no disponible: %s", exc)
            return None

    def ejecutar(self):
        self.cargar_dominio()
        x, y = self.punto('x'), self.punto('y')
        resultado = connect(self.domain, x, y, usar_oraculo=True)
        self.escribir(f"distance {resultado.distance:.6f}")
        self.escribir(f"geodesics {len(resultado.paths)}")
        if resultado.distance == 0.0:
            self.escribir("oracle 0.000000")
            self.escribir("relative_gap 0.000000")
            return OK

        estimacion = self.oraculo(x, y)
        codigo = OK
        if estimacion is None:
            self.escribir("oracle n/a")
        else:
            hueco = abs(resultado.distance - estimacion) / resultado.distance
            self.escribir(f"oracle {estimacion:.6f}")
            self.escribir(f"relative_gap {hueco:.6f}")
            if hueco > self.config.tol:
                logger.error("Motor y oráculo difieren un %.3g%% (tolerancia %.3g%%)", 100 * hueco,
                             100 * self.config.tol)
                codigo = FALLO_NUMERICO

        ruta = self.ruta_salida('.json')
        if ruta:
            self.escribir_json(resultado.to_dict(), ruta)
        return codigo
